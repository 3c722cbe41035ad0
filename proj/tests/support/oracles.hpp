#pragma once

// Reference implementations and random generators used by the tests.
// The oracles deliberately avoid the library's own code paths: projections
// are materialised as explicit n^2 x n^2 matrices from raw spanning sets,
// null spaces come from a full-pivot LU instead of an SVD.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qosa/algebra.hpp"
#include "qosa/constructions.hpp"

namespace oracle {

using qosa::Block;
using qosa::Complex;
using qosa::HSMatrix;
using qosa::SubAlgebra;
using Mat = Eigen::MatrixXcd;

inline Eigen::VectorXcd vec(const Mat& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

/// Explicit orthogonal projection onto span(mats) on C^{n^2}, via the
/// pseudo-inverse of the Gram matrix of a column-pivoted QR basis.
inline Mat projection(const std::vector<Mat>& mats) {
  const auto n2 = mats.front().size();
  Mat v(n2, static_cast<Eigen::Index>(mats.size()));
  for (std::size_t i = 0; i < mats.size(); ++i) v.col(static_cast<Eigen::Index>(i)) = vec(mats[i]);
  Eigen::ColPivHouseholderQR<Mat> qr(v);
  qr.setThreshold(1e-10);
  const auto r = qr.rank();
  const Mat q = qr.householderQ() * Mat::Identity(n2, r);
  return q * q.adjoint();
}

inline Mat projection(const SubAlgebra& a) {
  std::vector<Mat> mats;
  for (const auto& b : a.basis()) mats.push_back(b.eigen());
  return projection(mats);
}

/// c(A,B) = Tr(P_A P_B) with both projections materialised.
inline double c_value(const Mat& pa, const Mat& pb) { return (pa * pb).trace().real(); }

/// Dimension of {X : [b, X] = 0 for all b} by LU on the stacked commutator map.
inline int commutant_dim(const std::vector<Mat>& gens) {
  const auto n = gens.front().rows();
  Mat stacked(static_cast<Eigen::Index>(gens.size()) * n * n, n * n);
  for (std::size_t k = 0; k < gens.size(); ++k) {
    Mat op(n * n, n * n);
    // vec(bX - Xb) = (I (x) b - b^T (x) I) vec(X)
    for (Eigen::Index i = 0; i < n * n; ++i) {
      Mat e = Mat::Zero(n, n);
      e(i % n, i / n) = 1.0;
      op.col(i) = vec(gens[k] * e - e * gens[k]);
    }
    stacked.block(static_cast<Eigen::Index>(k) * n * n, 0, n * n, n * n) = op;
  }
  // an all-zero map (scalars) has only rounding noise as pivots
  if (stacked.cwiseAbs().maxCoeff() < 1e-9) return static_cast<int>(n * n);
  Eigen::FullPivLU<Mat> lu(stacked);
  lu.setThreshold(1e-9);
  return static_cast<int>(n * n - lu.rank());
}

/// Spanning set of (+)_k M_{n_k} (x) 1_{m_k} in standard position.
inline std::vector<Mat> block_span(const std::vector<Block>& blocks) {
  int n = 0;
  for (const auto& b : blocks) n += b.n_k * b.m_k;
  std::vector<Mat> out;
  int offset = 0;
  for (const auto& b : blocks) {
    for (int i = 0; i < b.n_k; ++i) {
      for (int j = 0; j < b.n_k; ++j) {
        Mat m = Mat::Zero(n, n);
        for (int r = 0; r < b.m_k; ++r) m(offset + i * b.m_k + r, offset + j * b.m_k + r) = 1.0;
        out.push_back(m);
      }
    }
    offset += b.n_k * b.m_k;
  }
  return out;
}

inline std::vector<HSMatrix> to_hs(const std::vector<Mat>& mats) {
  std::vector<HSMatrix> out;
  for (const auto& m : mats) out.emplace_back(m);
  return out;
}

inline std::vector<Mat> conjugate_span(const std::vector<Mat>& span, const Mat& u) {
  std::vector<Mat> out;
  for (const auto& m : span) out.push_back(u * m * u.adjoint());
  return out;
}

inline SubAlgebra algebra(const std::vector<Mat>& span) {
  const auto hs = to_hs(span);
  return SubAlgebra::from_span(static_cast<int>(span.front().rows()), hs);
}

inline Mat haar(int n, std::mt19937_64& rng) { return qosa::random_unitary(n, rng).eigen(); }

/// Every block list with sum n_k m_k = n and a common ratio n_k / m_k.
inline std::vector<std::vector<Block>> balanced_structures(int n) {
  std::vector<std::vector<Block>> out;
  std::vector<Block> cur;
  std::function<void(int, Block)> rec = [&](int left, Block min_block) {
    if (left == 0) {
      bool ok = true;
      for (const auto& b : cur) ok = ok && b.n_k * cur.front().m_k == cur.front().n_k * b.m_k;
      if (ok) out.push_back(cur);
      return;
    }
    for (int nk = 1; nk <= left; ++nk) {
      for (int mk = 1; nk * mk <= left; ++mk) {
        const Block b{nk, mk};
        if (b < min_block) continue;
        cur.push_back(b);
        rec(left - nk * mk, b);
        cur.pop_back();
      }
    }
  };
  rec(n, Block{0, 0});
  return out;
}

/// Six orthonormal vectors (|0>|j> + s|1>|j+1>)/sqrt 2 of C^2 (x) C^3; each
/// has maximally mixed qubit marginal, so their MASA is quasi-orthogonal to
/// M_2 (x) 1_3.
inline std::vector<Mat> entangled_masa_2x3() {
  std::vector<Mat> out;
  for (int j = 0; j < 3; ++j) {
    for (int s : {1, -1}) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(6);
      v(j) = 1.0 / std::sqrt(2.0);
      v(3 + (j + 1) % 3) = s / std::sqrt(2.0);
      out.push_back(v * v.adjoint());
    }
  }
  return out;
}

inline std::vector<Mat> fourier_masa(int n) {
  const Mat f = qosa::fourier_matrix(n).eigen();
  std::vector<Mat> out;
  for (int k = 0; k < n; ++k) out.push_back(f.col(k) * f.col(k).adjoint());
  return out;
}

inline std::vector<Mat> diagonal_masa(int n) {
  std::vector<Mat> out;
  for (int k = 0; k < n; ++k) {
    Mat m = Mat::Zero(n, n);
    m(k, k) = 1.0;
    out.push_back(m);
  }
  return out;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat m(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      m.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return m;
}

/// Full matrix algebra spanned by matrix units, tensored into position.
inline std::vector<Mat> factor_span(int left, int d, int right) {
  std::vector<Mat> out;
  const Mat il = Mat::Identity(left, left);
  const Mat ir = Mat::Identity(right, right);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Mat e = Mat::Zero(d, d);
      e(i, j) = 1.0;
      out.push_back(kron(kron(il, e), ir));
    }
  }
  return out;
}

struct Pair {
  std::string label;
  std::vector<Mat> a;
  std::vector<Mat> b;
};

/// A quasi-orthogonal pair from a varied family, conjugated by a common
/// Haar unitary (which preserves quasi-orthogonality).
inline Pair random_qo_pair(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 7);
  Pair p;
  switch (pick(rng)) {
    case 0: {
      const int ps[] = {2, 3, 5};
      const int q = ps[std::uniform_int_distribution<int>(0, 2)(rng)];
      p = {"diag/fourier in M_" + std::to_string(q), diagonal_masa(q), fourier_masa(q)};
      break;
    }
    case 1: {
      const int j = std::uniform_int_distribution<int>(2, 3)(rng);
      const int k = std::uniform_int_distribution<int>(2, 3)(rng);
      p = {"factor pair " + std::to_string(j) + "x" + std::to_string(k), factor_span(1, j, k),
           factor_span(j, k, 1)};
      break;
    }
    case 2: {
      std::vector<Mat> bell;
      const double r = 1.0 / std::sqrt(2.0);
      const Complex vs[4][4] = {{r, 0, 0, r}, {r, 0, 0, -r}, {0, r, r, 0}, {0, r, -r, 0}};
      for (const auto& row : vs) {
        Eigen::VectorXcd v(4);
        for (int i = 0; i < 4; ++i) v(i) = row[i];
        bell.push_back(v * v.adjoint());
      }
      p = {"qubit factor / Bell MASA", factor_span(1, 2, 2), bell};
      break;
    }
    case 3:
      p = {"M_2 factor / entangled MASA in M_6", factor_span(1, 2, 3), entangled_masa_2x3()};
      break;
    case 4:
      p = {"M_2 (x) 1 (x) 1 / 1 (x) M_2 (x) 1", factor_span(1, 2, 4), factor_span(2, 2, 2)};
      break;
    case 5: {
      const int n = 2 * std::uniform_int_distribution<int>(1, 3)(rng);
      Mat proj = Mat::Zero(n, n);
      for (int i = 0; i < n / 2; ++i) proj(i, i) = 1.0;
      p = {"half projection / Fourier MASA in M_" + std::to_string(n),
           {Mat::Identity(n, n), proj}, fourier_masa(n)};
      break;
    }
    case 6: {
      const int n = std::uniform_int_distribution<int>(2, 5)(rng);
      std::vector<Mat> full;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          Mat e = Mat::Zero(n, n);
          e(i, j) = 1.0;
          full.push_back(e);
        }
      }
      p = {"scalars / M_" + std::to_string(n), {Mat::Identity(n, n)}, full};
      break;
    }
    default: {
      // 1 (x) MASA against M_2 (x) 1 in M_{2k}: a tensor-split pair.
      const int k = std::uniform_int_distribution<int>(2, 3)(rng);
      std::vector<Mat> masa;
      for (const auto& m : diagonal_masa(k)) masa.push_back(kron(Mat::Identity(2, 2), m));
      p = {"M_2 (x) 1 / 1 (x) MASA", factor_span(1, 2, k), masa};
      break;
    }
  }
  const int n = static_cast<int>(p.a.front().rows());
  const Mat u = haar(n, rng);
  p.a = conjugate_span(p.a, u);
  p.b = conjugate_span(p.b, u);
  return p;
}

/// Random homogeneously balanced algebra in M_n, conjugated by a Haar unitary.
inline std::vector<Mat> random_balanced(int n, std::mt19937_64& rng,
                                        std::vector<Block>* structure = nullptr) {
  const auto all = balanced_structures(n);
  const auto& blocks =
      all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
  if (structure) *structure = blocks;
  return conjugate_span(block_span(blocks), haar(n, rng));
}

inline Mat random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat m(n, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = Complex(g(rng), g(rng));
  return m;
}

}  // namespace oracle
