#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "choi.hpp"
#include "edge.hpp"
#include "operators.hpp"
#include "product_search.hpp"
#include "witness.hpp"

namespace edgewit {

using Json = nlohmann::json;

inline Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw invalid_operator_error("complex entries must be [re, im] pairs");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

inline Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

inline Vector vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw invalid_operator_error("vector must be a nonempty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json operator_to_json(const HermitianOperator& op) {
  return Json{{"dims", Json::array({op.dims().d_A, op.dims().d_B})},
              {"matrix", matrix_to_json(op.matrix())}};
}

inline HermitianOperator operator_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dims") || !j.contains("matrix"))
    throw invalid_operator_error("operator needs dims and matrix fields");
  const Json& jd = j["dims"];
  if (!jd.is_array() || jd.size() != 2 || !jd[0].is_number_integer() || !jd[1].is_number_integer())
    throw invalid_operator_error("dims must be a pair of integers");
  const int da = jd[0].get<int>();
  const int db = jd[1].get<int>();
  if (da < 2 || db < 2) throw invalid_operator_error("subsystem dimensions must be at least 2");
  const BipartiteDims dims(da, db);
  const int d = dims.total();
  const Json& jm = j["matrix"];
  if (!jm.is_array() || static_cast<int>(jm.size()) != d)
    throw invalid_operator_error("matrix row count does not match dims");
  Matrix m(d, d);
  for (int r = 0; r < d; ++r) {
    const Json& row = jm[r];
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      throw invalid_operator_error("matrix column count does not match dims");
    for (int c = 0; c < d; ++c) m(r, c) = complex_from_json(row[c]);
  }
  return HermitianOperator(dims, std::move(m), tol::hermiticity_io);
}

inline DensityMatrix density_from_json(const Json& j) {
  return DensityMatrix(operator_from_json(j));
}

inline Json product_vector_to_json(const ProductVector& v) {
  return Json{{"e", vector_to_json(v.e())}, {"f", vector_to_json(v.f())}};
}

inline ProductVector product_vector_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("e") || !j.contains("f"))
    throw invalid_operator_error("product vector needs e and f fields");
  return ProductVector(vector_from_json(j["e"]), vector_from_json(j["f"]));
}

inline Json zero_set_to_json(const ZeroSet& z) {
  Json vecs = Json::array();
  for (const auto& v : z.vectors) vecs.push_back(product_vector_to_json(v));
  return Json{{"vectors", std::move(vecs)}, {"span_dim", z.span_dim}};
}

inline Json edge_decomposition_to_json(const EdgeDecomposition& dec) {
  Json components = Json::array();
  for (const auto& [weight, vec] : dec.separable_part) {
    Json c = product_vector_to_json(vec);
    c["weight"] = weight;
    components.push_back(std::move(c));
  }
  Json steps = Json::array();
  for (const auto& s : dec.steps) {
    steps.push_back(Json{{"vector", product_vector_to_json(s.vector)},
                         {"lambda", s.lambda},
                         {"rank_before", Json::array({s.rank_before[0], s.rank_before[1]})},
                         {"rank_after", Json::array({s.rank_after[0], s.rank_after[1]})}});
  }
  Json out{{"p", dec.p}, {"components", std::move(components)}, {"steps", std::move(steps)}};
  out["delta"] = dec.edge_part ? operator_to_json(*dec.edge_part) : Json(nullptr);
  return out;
}

inline const char* certificate_name(OptimalityCertificate c) {
  return c == OptimalityCertificate::OptimalBySpan ? "OptimalBySpan" : "Unknown";
}

inline Json witness_report_to_json(const WitnessReport& report) {
  Json steps = Json::array();
  for (const auto& s : report.steps) {
    steps.push_back(Json{{"D", operator_to_json(s.D)},
                         {"lambda0", s.lambda0},
                         {"span_pw", s.span_pw},
                         {"span_pwt", s.span_pwt}});
  }
  Json out{{"witness", operator_to_json(report.witness)},
           {"zero_set", zero_set_to_json(report.zero_set)},
           {"zero_set_pt", zero_set_to_json(report.zero_set_pt)},
           {"optimal_certificate", certificate_name(report.optimal_certificate)},
           {"steps", std::move(steps)},
           {"initial_witness", operator_to_json(report.initial_witness)},
           {"iterations", report.iterations}};
  out["nd_certificate"] =
      report.nd_certificate ? operator_to_json(*report.nd_certificate) : Json(nullptr);
  return out;
}

inline Json choi_to_json(const ChoiMap& m) {
  Json out = operator_to_json(m.choi);
  out["d_in"] = m.d_in;
  out["d_out"] = m.d_out;
  return out;
}

inline ChoiMap choi_from_json(const Json& j) {
  const HermitianOperator op = operator_from_json(j);
  if (!j.contains("d_in") || !j.contains("d_out"))
    throw invalid_operator_error("map needs d_in and d_out fields");
  const int din = j["d_in"].get<int>();
  const int dout = j["d_out"].get<int>();
  if (din != op.dims().d_A || dout != op.dims().d_B)
    throw invalid_operator_error("map dimensions disagree with the operator dims");
  return ChoiMap{op, din, dout};
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open file: " + path);
  Json j;
  in >> j;
  return j;
}

// Writes through a sibling temp file and renames, so readers never observe a
// half-written file.
inline void save_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw io_error("cannot write file: " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, target);
}

inline void save_json_file(const std::string& path, const Json& j) {
  save_text_file(path, j.dump(2) + "\n");
}

}  // namespace edgewit
