#pragma once

// Independent reference computations used to check the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "entpoly/linalg.hpp"

namespace oracle {

using entpoly::CMatrix;
using entpoly::cplx;

// Bit of qubit q (qubit 0 is the most significant) in basis index i.
inline int bit(std::size_t i, int q, int n) { return static_cast<int>((i >> (n - 1 - q)) & 1U); }

// Reduced state by explicit summation over matching traced-out bits.
inline CMatrix partial_trace(const CMatrix& rho, int n, const std::vector<int>& keep) {
  const int k = static_cast<int>(keep.size());
  const std::size_t dim = std::size_t{1} << n;
  CMatrix out = CMatrix::Zero(1 << k, 1 << k);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      bool match = true;
      for (int q = 0; q < n && match; ++q) {
        if (std::find(keep.begin(), keep.end(), q) == keep.end() && bit(r, q, n) != bit(c, q, n)) match = false;
      }
      if (!match) continue;
      int rr = 0;
      int cc = 0;
      for (int j = 0; j < k; ++j) {
        rr = (rr << 1) | bit(r, keep[static_cast<std::size_t>(j)], n);
        cc = (cc << 1) | bit(c, keep[static_cast<std::size_t>(j)], n);
      }
      out(rr, cc) += rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

// Larger eigenvalue of a 2x2 Hermitian matrix from its Bloch vector length.
inline double qubit_max_eigenvalue(const CMatrix& m) {
  const double x = 2.0 * m(0, 1).real();
  const double y = -2.0 * m(0, 1).imag();
  const double z = (m(0, 0) - m(1, 1)).real();
  return 0.5 * (1.0 + std::sqrt(x * x + y * y + z * z));
}

// Vertices of {x in [1/2, 1]^4 : x_k >= sum_{i != k} x_i - 2} by enumerating
// every choice of four active constraints among the twelve.
inline std::vector<std::array<double, 4>> enumerate_four_qubit_vertices() {
  struct Row {
    std::array<double, 4> a;
    double b;  // a.x <= b
  };
  std::vector<Row> rows;
  for (int i = 0; i < 4; ++i) {
    std::array<double, 4> e{};
    e[static_cast<std::size_t>(i)] = 1.0;
    rows.push_back({e, 1.0});
    std::array<double, 4> ne{};
    ne[static_cast<std::size_t>(i)] = -1.0;
    rows.push_back({ne, -0.5});
    std::array<double, 4> p{1.0, 1.0, 1.0, 1.0};
    p[static_cast<std::size_t>(i)] = -1.0;
    rows.push_back({p, 2.0});
  }
  std::vector<std::array<double, 4>> out;
  const int m = static_cast<int>(rows.size());
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      for (int c = b + 1; c < m; ++c) {
        for (int d = c + 1; d < m; ++d) {
          Eigen::Matrix4d mat;
          Eigen::Vector4d rhs;
          const std::array<int, 4> idx{a, b, c, d};
          for (int r = 0; r < 4; ++r) {
            const Row& row = rows[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])];
            for (int j = 0; j < 4; ++j) mat(r, j) = row.a[static_cast<std::size_t>(j)];
            rhs[r] = row.b;
          }
          Eigen::FullPivLU<Eigen::Matrix4d> lu(mat);
          if (lu.rank() < 4) continue;
          const Eigen::Vector4d x = lu.solve(rhs);
          bool ok = true;
          for (const Row& row : rows) {
            double dot = 0.0;
            for (int j = 0; j < 4; ++j) dot += row.a[static_cast<std::size_t>(j)] * x[j];
            if (dot > row.b + 1e-12) ok = false;
          }
          if (!ok) continue;
          const std::array<double, 4> v{x[0], x[1], x[2], x[3]};
          const bool seen = std::any_of(out.begin(), out.end(), [&](const auto& w) {
            for (int j = 0; j < 4; ++j) {
              if (std::abs(w[static_cast<std::size_t>(j)] - v[static_cast<std::size_t>(j)]) > 1e-12) return false;
            }
            return true;
          });
          if (!seen) out.push_back(v);
        }
      }
    }
  }
  return out;
}

}  // namespace oracle
