#pragma once

// Cyclic Jacobi eigensolver for small dense symmetric matrices. Used only to check
// spectral claims against the matrix-free code paths, hence the hard size cap.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "higcn/dense.hpp"
#include "higcn/errors.hpp"

namespace higcn {

inline constexpr std::size_t kMaxEigenSize = 512;

struct SymEigen {
  std::vector<double> eigenvalues;  // ascending
  DenseMatrix eigenvectors;         // column j pairs with eigenvalues[j]
};

inline SymEigen dense_sym_eig(const DenseMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw NumericalError("dense_sym_eig: matrix is not square");
  if (n > kMaxEigenSize) {
    throw NumericalError("dense_sym_eig: size " + std::to_string(n) + " exceeds cap " +
                         std::to_string(kMaxEigenSize));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-12) {
        throw NumericalError("dense_sym_eig: matrix is not symmetric at (" + std::to_string(i) +
                             "," + std::to_string(j) + ")");
      }

  DenseMatrix m = a;
  DenseMatrix v = DenseMatrix::identity(n);

  double scale = 0.0;
  for (double x : m.values()) scale += x * x;
  scale = std::sqrt(scale);
  const double tol = 1e-12 * std::max(1.0, scale);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += m(i, j) * m(i, j);
    return std::sqrt(2.0 * s);
  };

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && off_norm() >= tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        m(p, p) -= t * apq;
        m(q, q) += t * apq;
        m(p, q) = 0.0;
        m(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = m(r, p);
            const double arq = m(r, q);
            m(r, p) = m(p, r) = arp - s * (arq + tau * arp);
            m(r, q) = m(q, r) = arq + s * (arp - tau * arq);
          }
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }
  if (off_norm() >= tol) throw NumericalError("dense_sym_eig: Jacobi sweeps did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return m(x, x) < m(y, y); });
  SymEigen out{std::vector<double>(n), DenseMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = m(order[j], order[j]);
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, j) = v(r, order[j]);
  }
  return out;
}

}  // namespace higcn
