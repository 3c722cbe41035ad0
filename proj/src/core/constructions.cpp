#include "qosa/constructions.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "json_io.hpp"
#include "qosa/overlap.hpp"

namespace qosa {

using nlohmann::json;
using detail::parse_complex;
using detail::parse_json;
using detail::parse_matrix;
using detail::read_file;
using detail::schema_error;

SystemSpec::SystemSpec(int n) : n_(n) {
  if (n < 1) raise(ErrorCode::kInvalidArgument, "SystemSpec: n must be >= 1");
}

void SystemSpec::add(std::string name, SubAlgebra algebra) {
  if (algebra.ambient_dim() != n_) {
    raise(ErrorCode::kDimensionMismatch, "algebra '" + name + "' lives in M_" +
                                             std::to_string(algebra.ambient_dim()) +
                                             ", system is M_" + std::to_string(n_));
  }
  if (index_of(name)) raise(ErrorCode::kInvalidArgument, "duplicate algebra name '" + name + "'");
  entries_.push_back({std::move(name), std::move(algebra)});
}

std::optional<std::size_t> SystemSpec::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return i;
  }
  return std::nullopt;
}

const SubAlgebra& SystemSpec::at(std::string_view name) const {
  const auto i = index_of(name);
  if (!i) raise(ErrorCode::kInvalidArgument, "no algebra named '" + std::string(name) + "'");
  return entries_[*i].algebra;
}

SubAlgebra masa_from_basis(std::span<const Eigen::VectorXcd> vectors, double tol) {
  if (vectors.empty()) raise(ErrorCode::kNotOrthonormal, "masa_from_basis: no vectors");
  const auto n = vectors.front().size();
  if (static_cast<Eigen::Index>(vectors.size()) != n) {
    raise(ErrorCode::kNotOrthonormal, "masa_from_basis: need exactly n = " + std::to_string(n) +
                                          " vectors, got " + std::to_string(vectors.size()));
  }
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != n) raise(ErrorCode::kNotOrthonormal, "masa_from_basis: ragged vectors");
    for (std::size_t j = 0; j <= i; ++j) {
      const Complex ip = vectors[j].dot(vectors[i]);
      const double expect = i == j ? 1.0 : 0.0;
      if (std::abs(ip - expect) > tol) {
        raise(ErrorCode::kNotOrthonormal, "masa_from_basis: <v" + std::to_string(j) + ", v" +
                                              std::to_string(i) + "> deviates by " +
                                              std::to_string(std::abs(ip - expect)));
      }
    }
  }
  std::vector<HSMatrix> projections;
  for (const auto& v : vectors) projections.push_back(HSMatrix::projector(v));
  return SubAlgebra::trusted(static_cast<int>(n), std::move(projections), tol);
}

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

Complex root_of_unity(int order, long power) {
  const double angle = 2.0 * std::numbers::pi * double(power % order) / double(order);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

SystemSpec mub_family(int p, double tol) {
  if (!is_prime(p)) raise(ErrorCode::kNotPrime, std::to_string(p) + " is not prime");
  if (p > 13) raise(ErrorCode::kTooLarge, "mub_family supports p <= 13, got " + std::to_string(p));

  SystemSpec spec(p);
  std::vector<Eigen::VectorXcd> standard;
  for (int j = 0; j < p; ++j) standard.push_back(Eigen::VectorXcd::Unit(p, j));
  spec.add("basis0", masa_from_basis(standard, tol));

  // v_{k,j}(l) = w^{k l^2 + j l} / sqrt(p), w = exp(2 pi i / p); for p = 2
  // the quadratic phase is i^{k l}.
  const double norm = 1.0 / std::sqrt(double(p));
  for (int k = 0; k < p; ++k) {
    std::vector<Eigen::VectorXcd> vecs;
    for (int j = 0; j < p; ++j) {
      Eigen::VectorXcd v(p);
      for (int l = 0; l < p; ++l) {
        const Complex quad = p == 2 ? root_of_unity(4, long(k) * l) : root_of_unity(p, long(k) * l * l);
        v(l) = norm * quad * root_of_unity(p, long(j) * l);
      }
      vecs.push_back(v);
    }
    spec.add("basis" + std::to_string(k + 1), masa_from_basis(vecs, tol));
  }

  for (std::size_t i = 0; i < spec.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.size(); ++j) {
      const auto r = quasi_orthogonal(spec.entries()[i].algebra, spec.entries()[j].algebra, tol);
      if (!r.is_quasi_orthogonal) {
        raise(ErrorCode::kInvariantViolation,
              "mub_family(" + std::to_string(p) + "): bases " + std::to_string(i) + " and " +
                  std::to_string(j) + " are not unbiased");
      }
    }
  }
  spec.metadata()["construction"] = "mub";
  spec.metadata()["p"] = std::to_string(p);
  return spec;
}

SubAlgebra factor_left(int d, int n) {
  if (d < 1 || n < 1 || n % d != 0) {
    raise(ErrorCode::kInvalidArgument,
          "factor M_" + std::to_string(d) + " does not embed unitally in M_" + std::to_string(n));
  }
  const int m = n / d;
  const HSMatrix id = HSMatrix::identity(m) * Complex(1.0 / std::sqrt(double(m)));
  std::vector<HSMatrix> basis;
  for (int c = 0; c < d; ++c) {
    for (int r = 0; r < d; ++r) basis.push_back(kron(HSMatrix::unit(d, r, c), id));
  }
  return SubAlgebra::trusted(n, std::move(basis));
}

SubAlgebra factor_right(int d, int n) {
  if (d < 1 || n < 1 || n % d != 0) {
    raise(ErrorCode::kInvalidArgument,
          "factor M_" + std::to_string(d) + " does not embed unitally in M_" + std::to_string(n));
  }
  const int m = n / d;
  const HSMatrix id = HSMatrix::identity(m) * Complex(1.0 / std::sqrt(double(m)));
  std::vector<HSMatrix> basis;
  for (int c = 0; c < d; ++c) {
    for (int r = 0; r < d; ++r) basis.push_back(kron(id, HSMatrix::unit(d, r, c)));
  }
  return SubAlgebra::trusted(n, std::move(basis));
}

SystemSpec factor_pair(int j, int k) {
  if (j < 1 || k < 1) raise(ErrorCode::kInvalidArgument, "factor_pair: j, k must be >= 1");
  SystemSpec spec(j * k);
  spec.add("left", factor_left(j, j * k));
  spec.add("right", factor_right(k, j * k));
  spec.metadata()["construction"] = "factor-pair";
  spec.metadata()["j"] = std::to_string(j);
  spec.metadata()["k"] = std::to_string(k);
  return spec;
}

SystemSpec bell_system() {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<Eigen::VectorXcd> bell(4, Eigen::VectorXcd::Zero(4));
  // |00> = e0, |01> = e1, |10> = e2, |11> = e3
  bell[0](0) = s; bell[0](3) = s;
  bell[1](0) = s; bell[1](3) = -s;
  bell[2](1) = s; bell[2](2) = s;
  bell[3](1) = s; bell[3](2) = -s;
  SystemSpec spec(4);
  spec.add("first", factor_left(2, 4));
  spec.add("second", factor_right(2, 4));
  spec.add("bell", masa_from_basis(bell));
  spec.metadata()["construction"] = "bell";
  return spec;
}

HSMatrix fourier_matrix(int n) {
  Eigen::MatrixXcd f(n, n);
  const double s = 1.0 / std::sqrt(double(n));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) f(r, c) = s * root_of_unity(n, long(r) * c);
  }
  return HSMatrix(std::move(f));
}

HSMatrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd z(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) z(r, c) = Complex(g(rng), g(rng));
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    const double ad = std::abs(d);
    if (ad > 0.0) q.col(i) *= d / ad;
  }
  return HSMatrix(std::move(q));
}

bool is_unitary(const HSMatrix& u, double tol) {
  const Eigen::MatrixXcd d = u.eigen().adjoint() * u.eigen() - Eigen::MatrixXcd::Identity(u.dim(), u.dim());
  return d.cwiseAbs().maxCoeff() <= tol;
}

SubAlgebra conjugate(const SubAlgebra& a, const HSMatrix& u, double tol) {
  if (u.dim() != a.ambient_dim()) {
    raise(ErrorCode::kDimensionMismatch, "conjugate: unitary has the wrong dimension");
  }
  if (!is_unitary(u, tol)) raise(ErrorCode::kNotUnitary, "conjugate: matrix is not unitary");
  std::vector<HSMatrix> basis;
  basis.reserve(a.basis().size());
  const auto& um = u.eigen();
  for (const auto& b : a.basis()) basis.emplace_back((um * b.eigen() * um.adjoint()).eval());
  return SubAlgebra::trusted(a.ambient_dim(), std::move(basis), a.tol());
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json matrix_to_json(const HSMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.dim(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.dim(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string to_json(const SystemSpec& spec) {
  // One matrix row per line keeps files diffable; numbers use the JSON
  // library's shortest round-trip formatting.
  std::ostringstream out;
  out << "{\n \"n\": " << spec.ambient_dim() << ",\n \"algebras\": [";
  for (std::size_t i = 0; i < spec.entries().size(); ++i) {
    const auto& e = spec.entries()[i];
    out << (i ? "," : "") << "\n  {\n   \"name\": " << json(e.name).dump() << ",\n   \"basis\": [";
    for (std::size_t k = 0; k < e.algebra.basis().size(); ++k) {
      const json m = matrix_to_json(e.algebra.basis()[k]);
      out << (k ? "," : "") << "\n    [";
      for (std::size_t r = 0; r < m.size(); ++r) out << (r ? ",\n     " : "") << m[r].dump();
      out << "]";
    }
    out << "\n   ]\n  }";
  }
  out << "\n ],\n \"metadata\": " << json(spec.metadata()).dump() << "\n}";
  return out.str();
}

SystemSpec from_json(std::string_view text, double tol) {
  const json doc = parse_json(text);
  if (!doc.is_object()) schema_error("$", "expected an object");
  if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<long>() < 1) {
    schema_error("$.n", "expected a positive integer");
  }
  const int n = doc["n"].get<int>();
  if (!doc.contains("algebras") || !doc["algebras"].is_array()) {
    schema_error("$.algebras", "expected an array");
  }
  SystemSpec spec(n);
  std::unordered_set<std::string> names;
  const auto& algebras = doc["algebras"];
  for (std::size_t i = 0; i < algebras.size(); ++i) {
    const std::string where = "$.algebras[" + std::to_string(i) + "]";
    const auto& a = algebras[i];
    if (!a.is_object()) schema_error(where, "expected an object");
    if (!a.contains("name") || !a["name"].is_string()) schema_error(where + ".name", "expected a string");
    const std::string name = a["name"].get<std::string>();
    if (!names.insert(name).second) schema_error(where + ".name", "duplicate name '" + name + "'");
    if (!a.contains("basis") || !a["basis"].is_array() || a["basis"].empty()) {
      schema_error(where + ".basis", "expected a non-empty array of matrices");
    }
    std::vector<HSMatrix> basis;
    for (std::size_t k = 0; k < a["basis"].size(); ++k) {
      basis.push_back(parse_matrix(a["basis"][k], n, where + ".basis[" + std::to_string(k) + "]"));
    }
    try {
      spec.add(name, SubAlgebra::from_basis(n, std::move(basis), tol));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kInvariantViolation) {
        raise(ErrorCode::kInvariantViolation, "algebra '" + name + "': " + e.what());
      }
      throw;
    }
  }
  if (doc.contains("metadata")) {
    const auto& md = doc["metadata"];
    if (!md.is_object()) schema_error("$.metadata", "expected an object");
    for (const auto& [k, v] : md.items()) {
      if (!v.is_string()) schema_error("$.metadata." + k, "expected a string value");
      spec.metadata()[k] = v.get<std::string>();
    }
  }
  return spec;
}

void save(const SystemSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << to_json(spec) << '\n';
  if (!out) raise(ErrorCode::kIo, "write to '" + path.string() + "' failed");
}

SystemSpec load(const std::filesystem::path& path, double tol) {
  return from_json(read_file(path), tol);
}

std::vector<Eigen::VectorXcd> load_vectors(const std::filesystem::path& path) {
  const json doc = parse_json(read_file(path));
  if (!doc.is_object() || !doc.contains("vectors") || !doc["vectors"].is_array() ||
      doc["vectors"].empty()) {
    schema_error("$.vectors", "expected a non-empty array of vectors");
  }
  const auto& vs = doc["vectors"];
  const std::size_t n = vs[0].is_array() ? vs[0].size() : 0;
  std::vector<Eigen::VectorXcd> out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string where = "$.vectors[" + std::to_string(i) + "]";
    if (!vs[i].is_array() || vs[i].size() != n || n == 0) {
      schema_error(where, "expected " + std::to_string(n) + " [re, im] entries");
    }
    Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
    for (std::size_t l = 0; l < n; ++l) {
      v(static_cast<Eigen::Index>(l)) = parse_complex(vs[i][l], where + "[" + std::to_string(l) + "]");
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace qosa
