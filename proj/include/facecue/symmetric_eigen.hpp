#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "facecue/error.hpp"
#include "facecue/matrix.hpp"

namespace facecue {

struct EigenDecomposition {
  std::vector<double> values;  ///< unsorted, in Jacobi output order
  Matrix vectors;              ///< column j is the eigenvector for values[j]
};

/// Cyclic Jacobi eigenvalue iteration for a real symmetric matrix.
///
/// Each sweep annihilates every off-diagonal pair (p, q) in row order with a
/// plane rotation. Iteration stops once the off-diagonal mass is negligible
/// relative to the matrix norm or no rotation changes anything.
inline EigenDecomposition jacobi_eigen(Matrix a, int max_sweeps = 100) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::DimensionMismatch, "eigensolve needs a square matrix");

  Matrix v = Matrix::identity(n);
  double total = 0.0;
  for (double x : a.data()) total += x * x;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off == 0.0 || off <= 1e-30 * total) break;

    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Once converging, drop entries too small to move either diagonal element.
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq)) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
        rotated = true;
      }
    }
    if (!rotated) break;
  }

  EigenDecomposition out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);
  out.vectors = std::move(v);
  return out;
}

}  // namespace facecue
