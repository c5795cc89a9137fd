// Small numeric kernels over Eigen expressions: Pearson correlation,
// standardization, and ordinary least squares.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <utility>

#include "chatmood/errors.hpp"

namespace chatmood {

/// Pearson correlation of two equally sized vectors. A zero-variance side
/// yields 0 by convention.
template <typename DerivedX, typename DerivedY>
double pearson(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
  const auto n = x.size();
  if (n != y.size()) throw ValueError("pearson: size mismatch");
  if (n < 2) throw ValueError("pearson: need at least 2 samples");
  const double mx = x.template cast<double>().mean();
  const double my = y.template cast<double>().mean();
  const auto dx = x.template cast<double>().array() - mx;
  const auto dy = y.template cast<double>().array() - my;
  const double sxx = (dx * dx).sum();
  const double syy = (dy * dy).sum();
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return (dx * dy).sum() / std::sqrt(sxx * syy);
}

/// Per-column mean and population standard deviation; zero deviations are
/// replaced by 1 so standardization is always well-defined.
template <typename Derived>
std::pair<Eigen::VectorXd, Eigen::VectorXd> standardization_params(
    const Eigen::MatrixBase<Derived>& x) {
  const Eigen::Index n = x.rows();
  if (n < 1) throw ValueError("standardization_params: empty matrix");
  Eigen::VectorXd mean = x.template cast<double>().colwise().mean();
  Eigen::VectorXd stddev(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double var =
        (x.col(j).template cast<double>().array() - mean(j)).square().sum() / static_cast<double>(n);
    const double sd = std::sqrt(var);
    stddev(j) = sd > 0.0 ? sd : 1.0;
  }
  return {std::move(mean), std::move(stddev)};
}

/// (x - mean) / stddev, column-wise.
template <typename Derived>
Eigen::MatrixXd standardize(const Eigen::MatrixBase<Derived>& x, const Eigen::VectorXd& mean,
                            const Eigen::VectorXd& stddev) {
  return (x.template cast<double>().rowwise() - mean.transpose()).array().rowwise() /
         stddev.transpose().array();
}

/// Least-squares line fit; returns (slope, intercept).
template <typename DerivedX, typename DerivedY>
std::pair<double, double> ols_line(const Eigen::MatrixBase<DerivedX>& x,
                                   const Eigen::MatrixBase<DerivedY>& y) {
  const auto n = x.size();
  if (n != y.size()) throw ValueError("ols_line: size mismatch");
  if (n < 2) throw ValueError("ols_line: need at least 2 points");
  const double mx = x.template cast<double>().mean();
  const double my = y.template cast<double>().mean();
  const auto dx = x.template cast<double>().array() - mx;
  const auto dy = y.template cast<double>().array() - my;
  const double sxx = (dx * dx).sum();
  if (sxx == 0.0) throw ValueError("ols_line: x has zero variance");
  const double slope = (dx * dy).sum() / sxx;
  return {slope, my - slope * mx};
}

}  // namespace chatmood
