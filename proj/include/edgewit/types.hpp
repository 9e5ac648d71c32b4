#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace edgewit {

namespace tol {
inline constexpr double hermiticity = 1e-12;     // construction-time entrywise deviation
inline constexpr double hermiticity_io = 1e-9;   // JSON readers reject above this
inline constexpr double rank = 1e-9;             // relative eigenvalue cutoff, floor 1
inline constexpr double zero = 1e-9;             // product-expectation zero classification
inline constexpr double psd_floor = 1e-10;       // eigenvalues below -psd_floor fail PSD
inline constexpr double trace_one = 1e-12;
inline constexpr double gram_rank = 1e-8;        // Gram eigenvalue cutoff for span ranks
inline constexpr double duplicate_overlap = 1e-8;  // tensors with overlap > 1-this are duplicates
inline constexpr double lambda_floor = 1e-8;     // smallest productive subtraction weight
inline constexpr double verify_product = 1e-8;   // sampled EW verification floor
inline constexpr double residual = 1e-8;         // Frobenius residual acceptance
}  // namespace tol

inline constexpr int default_restarts = 200;
inline constexpr double default_safety = 0.9;

class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

class invalid_operator_error : public error {
 public:
  using error::error;
};

class parameter_error : public error {
 public:
  using error::error;
};

class precondition_error : public error {
 public:
  using error::error;
};

class sampling_error : public error {
 public:
  using error::error;
};

class io_error : public error {
 public:
  using error::error;
};

class range_criterion_error : public precondition_error {
 public:
  using precondition_error::precondition_error;
};

class not_a_witness_error : public precondition_error {
 public:
  using precondition_error::precondition_error;
};

class degenerate_edge_error : public precondition_error {
 public:
  using precondition_error::precondition_error;
};

struct BipartiteDims {
  int d_A = 2;
  int d_B = 2;

  BipartiteDims() = default;
  BipartiteDims(int a, int b) : d_A(a), d_B(b) {
    if (a < 2 || b < 2) throw parameter_error("subsystem dimensions must be at least 2");
  }

  int total() const { return d_A * d_B; }
  // row-major index of |a>_A (x) |b>_B
  int index(int a, int b) const { return d_B * a + b; }

  friend bool operator==(const BipartiteDims& x, const BipartiteDims& y) {
    return x.d_A == y.d_A && x.d_B == y.d_B;
  }
  friend bool operator!=(const BipartiteDims& x, const BipartiteDims& y) { return !(x == y); }
};

}  // namespace edgewit
