#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <variant>
#include <vector>

#include "operators.hpp"
#include "spectral.hpp"

namespace edgewit {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic per-stream seed so independent sampling tasks never share a generator.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
  splitmix64(state);
  return splitmix64(state);
}

inline std::mt19937_64 make_engine(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Vector haar_vector(int n, std::mt19937_64& engine) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) {
    const double re = gauss(engine);
    const double im = gauss(engine);
    v(i) = Complex(re, im);
  }
  const double norm = v.norm();
  if (norm < 1e-300) return haar_vector(n, engine);
  return v / norm;
}

inline ProductVector sample_pure_product(const BipartiteDims& dims, std::uint64_t seed) {
  auto engine = make_engine(seed);
  Vector e = haar_vector(dims.d_A, engine);
  Vector f = haar_vector(dims.d_B, engine);
  return ProductVector(e, f);
}

inline DensityMatrix sample_separable_mixture(const BipartiteDims& dims, std::uint64_t seed,
                                              int terms = 0) {
  if (terms < 0) throw parameter_error("separable mixture needs a nonnegative term count");
  if (terms == 0) terms = 4 * dims.total();
  auto engine = make_engine(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> weights(terms);
  double total = 0.0;
  for (int k = 0; k < terms; ++k) {
    weights[k] = expo(engine);
    total += weights[k];
  }
  const int d = dims.total();
  Matrix m = Matrix::Zero(d, d);
  for (int k = 0; k < terms; ++k) {
    Vector e = haar_vector(dims.d_A, engine);
    Vector f = haar_vector(dims.d_B, engine);
    const Vector t = ProductVector(e, f).tensor();
    m.noalias() += (weights[k] / total) * (t * t.adjoint());
  }
  m /= m.trace().real();
  return DensityMatrix(dims, m);
}

inline DensityMatrix sample_random_density(const BipartiteDims& dims, std::uint64_t seed,
                                           int ancilla = 0) {
  if (ancilla < 0) throw parameter_error("ancilla dimension must be nonnegative");
  auto engine = make_engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int d = dims.total();
  const int s = ancilla == 0 ? d : ancilla;
  Matrix g(d, s);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < s; ++j) g(i, j) = Complex(gauss(engine), gauss(engine));
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(dims, m);
}

// Draws with a doubled ancilla so the acceptance rate stays practical in larger
// dimensions while samples remain spread across the positive-partial-transpose set.
inline DensityMatrix sample_random_ppt(const BipartiteDims& dims, std::uint64_t seed,
                                       std::uint64_t max_attempts = 100000) {
  for (std::uint64_t k = 0; k < max_attempts; ++k) {
    DensityMatrix rho = sample_random_density(dims, derive_seed(seed, k), 2 * dims.total());
    if (ppt_check(rho).is_ppt) return rho;
  }
  throw sampling_error("no positive-partial-transpose sample within the attempt budget");
}

enum class SampleKind { PureProduct, SeparableMixture, RandomDensity, RandomPpt };

inline std::variant<DensityMatrix, ProductVector> sample(SampleKind kind,
                                                         const BipartiteDims& dims,
                                                         std::uint64_t seed) {
  switch (kind) {
    case SampleKind::PureProduct:
      return sample_pure_product(dims, seed);
    case SampleKind::SeparableMixture:
      return sample_separable_mixture(dims, seed);
    case SampleKind::RandomDensity:
      return sample_random_density(dims, seed);
    case SampleKind::RandomPpt:
    default:
      return sample_random_ppt(dims, seed);
  }
}

}  // namespace edgewit
