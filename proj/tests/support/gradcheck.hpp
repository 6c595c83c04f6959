#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "skurank/network.hpp"

namespace skurank::testing {

struct TensorCheck {
  std::string name;
  double max_abs_error = 0.0;
  // ||analytic - numeric|| / max(||analytic||, ||numeric||), or the absolute
  // error when both norms vanish.
  double relative_error = 0.0;
  double analytic_norm = 0.0;
};

/// Central finite differences of `loss` over every entry of every tensor
/// except the frozen pad row of the embedding table.
inline std::vector<TensorCheck> finite_difference_check(
    ModelParams<double> params, const ModelParams<double>& analytic,
    const std::function<double(const ModelParams<double>&)>& loss, double eps) {
  std::vector<TensorCheck> out;
  auto tensors = params.tensors();
  const auto grads = analytic.tensors();
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    auto& value = tensors[t].value;
    const auto& g = grads[t].value;
    MatrixX<double> numeric = MatrixX<double>::Zero(value.rows(), value.cols());
    for (Eigen::Index c = 0; c < value.cols(); ++c) {
      for (Eigen::Index r = 0; r < value.rows(); ++r) {
        if (tensors[t].name == "embeddings" && r == Vocabulary::kPadId) continue;
        const double saved = value(r, c);
        value(r, c) = saved + eps;
        const double up = loss(params);
        value(r, c) = saved - eps;
        const double down = loss(params);
        value(r, c) = saved;
        numeric(r, c) = (up - down) / (2.0 * eps);
      }
    }
    MatrixX<double> a = g;
    if (tensors[t].name == "embeddings") a.row(Vocabulary::kPadId).setZero();
    TensorCheck check;
    check.name = tensors[t].name;
    check.max_abs_error = (a - numeric).cwiseAbs().maxCoeff();
    check.analytic_norm = a.norm();
    const double scale = std::max(a.norm(), numeric.norm());
    check.relative_error = scale > 0.0 ? (a - numeric).norm() / scale : 0.0;
    out.push_back(check);
  }
  return out;
}

}  // namespace skurank::testing
