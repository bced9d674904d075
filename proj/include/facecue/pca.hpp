#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "facecue/error.hpp"
#include "facecue/matrix.hpp"
#include "facecue/symmetric_eigen.hpp"

namespace facecue {

struct PcaModel {
  std::vector<double> mean;
  Matrix components;  ///< k x d, row j is the j-th principal axis
  std::vector<double> explained_variance;

  std::size_t k() const { return components.rows(); }
  std::size_t dim() const { return mean.size(); }

  friend bool operator==(const PcaModel&, const PcaModel&) = default;
};

/// Column means of `data`.
inline std::vector<double> column_mean(const Matrix& data) {
  std::vector<double> mean(data.cols(), 0.0);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto row = data.row(r);
    for (std::size_t c = 0; c < data.cols(); ++c) mean[c] += row[c];
  }
  for (double& m : mean) m /= static_cast<double>(data.rows());
  return mean;
}

/// Sample covariance (divisor n - 1) about `mean`.
inline Matrix sample_covariance(const Matrix& data, std::span<const double> mean) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  Matrix cov(d, d);
  std::vector<double> centred(d);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = data.row(r);
    for (std::size_t c = 0; c < d; ++c) centred[c] = row[c] - mean[c];
    for (std::size_t i = 0; i < d; ++i) {
      const double ci = centred[i];
      for (std::size_t j = i; j < d; ++j) cov(i, j) += ci * centred[j];
    }
  }
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov(i, j) /= denom;
      cov(j, i) = cov(i, j);
    }
  }
  return cov;
}

/// Flip `v` so that its largest-magnitude entry (first one on ties) is positive.
inline void normalize_sign(std::span<double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  if (v[best] < 0.0) {
    for (double& x : v) x = -x;
  }
}

/// Full spectrum of the sample covariance, sorted by non-increasing
/// eigenvalue. Eigenvalues that compare equal keep the solver's order.
struct CovarianceSpectrum {
  std::vector<double> mean;
  std::vector<double> eigenvalues;
  Matrix axes;  ///< d x d, row j is the unit eigenvector for eigenvalues[j]
};

inline CovarianceSpectrum covariance_spectrum(const Matrix& data) {
  if (data.rows() < 2) {
    throw Error(ErrorCode::TooFewSamples,
                "PCA needs at least 2 rows, got " + std::to_string(data.rows()));
  }
  CovarianceSpectrum out;
  out.mean = column_mean(data);
  auto eig = jacobi_eigen(sample_covariance(data, out.mean));

  const std::size_t d = data.cols();
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return eig.values[a] > eig.values[b];
  });

  out.eigenvalues.reserve(d);
  out.axes = Matrix(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    out.eigenvalues.push_back(eig.values[order[j]]);
    auto axis = out.axes.row(j);
    for (std::size_t i = 0; i < d; ++i) axis[i] = eig.vectors(i, order[j]);
    normalize_sign(axis);
  }
  return out;
}

/// Top-k principal axes of the rows of `data`.
///
/// Axes inside a block of equal eigenvalues are an arbitrary (but
/// deterministic) basis of that block's eigenspace.
inline PcaModel fit_pca(const Matrix& data, std::size_t k) {
  if (data.rows() < 2) {
    throw Error(ErrorCode::TooFewSamples,
                "PCA needs at least 2 rows, got " + std::to_string(data.rows()));
  }
  if (k == 0 || k > std::min(data.rows() - 1, data.cols())) {
    throw Error(ErrorCode::KTooLarge,
                "k=" + std::to_string(k) + " with n=" + std::to_string(data.rows()) +
                    ", d=" + std::to_string(data.cols()));
  }
  auto spectrum = covariance_spectrum(data);
  PcaModel model;
  model.mean = std::move(spectrum.mean);
  model.components = Matrix(k, data.cols());
  for (std::size_t j = 0; j < k; ++j) {
    const auto src = spectrum.axes.row(j);
    std::copy(src.begin(), src.end(), model.components.row(j).begin());
    model.explained_variance.push_back(std::max(0.0, spectrum.eigenvalues[j]));
  }
  return model;
}

inline std::vector<double> transform(const PcaModel& model, std::span<const double> v) {
  if (v.size() != model.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "vector width " + std::to_string(v.size()) +
                                                  ", model expects " +
                                                  std::to_string(model.dim()));
  }
  std::vector<double> centred(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) centred[i] = v[i] - model.mean[i];
  std::vector<double> z(model.k());
  for (std::size_t j = 0; j < model.k(); ++j) z[j] = dot(model.components.row(j), centred);
  return z;
}

inline std::vector<double> inverse_transform(const PcaModel& model, std::span<const double> z) {
  if (z.size() != model.k()) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(model.k()) +
                                                  " components, got " +
                                                  std::to_string(z.size()));
  }
  std::vector<double> v = model.mean;
  for (std::size_t j = 0; j < model.k(); ++j) {
    const auto axis = model.components.row(j);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += z[j] * axis[i];
  }
  return v;
}

/// Projects every row of `data`; result is n x k.
inline Matrix transform_rows(const PcaModel& model, const Matrix& data) {
  Matrix out(data.rows(), model.k());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto z = transform(model, data.row(r));
    std::copy(z.begin(), z.end(), out.row(r).begin());
  }
  return out;
}

}  // namespace facecue
