#include "taskgraph/matrix.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "taskgraph/error.hpp"

namespace taskgraph {

Mask build_mask(const Taxonomy& taxonomy) {
  const auto n = static_cast<Eigen::Index>(taxonomy.size());
  const auto start = static_cast<Eigen::Index>(taxonomy.start());
  const auto end = static_cast<Eigen::Index>(taxonomy.end());
  Mask mask = Mask::Constant(n, n, false);
  mask.diagonal().setConstant(true);
  mask.row(start).setConstant(true);
  mask.col(end).setConstant(true);
  return mask;
}

ScoreMatrix::ScoreMatrix(Matrix values, Mask mask)
    : values_(std::move(values)), mask_(std::move(mask)) {
  if (values_.rows() != values_.cols() || mask_.rows() != values_.rows() ||
      mask_.cols() != values_.cols()) {
    throw InputError("score matrix and mask must be square and the same size");
  }
  for (Eigen::Index i = 0; i < values_.rows(); ++i) {
    for (Eigen::Index j = 0; j < values_.cols(); ++j) {
      if (mask_(i, j)) {
        values_(i, j) = 0.0;
      } else if (!std::isfinite(values_(i, j))) {
        throw InputError("non-finite score at (" + std::to_string(i) + ", " +
                         std::to_string(j) + ")");
      }
    }
  }
}

ScoreMatrix ScoreMatrix::zeros(const Taxonomy& taxonomy) {
  const auto n = static_cast<Eigen::Index>(taxonomy.size());
  return {Matrix::Zero(n, n), build_mask(taxonomy)};
}

ScoreMatrix ScoreMatrix::updated(const Matrix& delta) const {
  if (delta.rows() != values_.rows() || delta.cols() != values_.cols()) {
    throw InputError("score update has the wrong shape");
  }
  Matrix next = mask_.select(values_, values_ + delta);
  return {std::move(next), mask_};
}

AdjacencyMatrix::AdjacencyMatrix(Matrix weights) : weights_(std::move(weights)) {
  if (weights_.rows() != weights_.cols()) {
    throw InputError("adjacency matrix must be square");
  }
  for (Eigen::Index i = 0; i < weights_.rows(); ++i) {
    for (Eigen::Index j = 0; j < weights_.cols(); ++j) {
      const double w = weights_(i, j);
      if (!(w >= 0.0 && w <= 1.0)) {
        throw InputError("adjacency weight at (" + std::to_string(i) + ", " +
                         std::to_string(j) + ") is outside [0, 1]");
      }
    }
  }
}

AdjacencyMatrix softmax_rows(const ScoreMatrix& scores) {
  const Matrix& a = scores.values();
  const Mask& mask = scores.mask();
  Matrix z = Matrix::Zero(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double row_max = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (!mask(i, j)) row_max = std::max(row_max, a(i, j));
    }
    if (!std::isfinite(row_max)) continue;  // fully masked row
    double total = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (mask(i, j)) continue;
      z(i, j) = std::exp(a(i, j) - row_max);
      total += z(i, j);
    }
    z.row(i) /= total;
  }
  return AdjacencyMatrix(std::move(z));
}

Matrix softmax_rows_backward(const AdjacencyMatrix& z, const Mask& mask, const Matrix& grad_z) {
  const Matrix& w = z.weights();
  Matrix grad = Matrix::Zero(w.rows(), w.cols());
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    // d z_ik / d a_il = z_ik (delta_kl - z_il), summed against grad_z.
    const double inner = w.row(i).dot(grad_z.row(i));
    for (Eigen::Index l = 0; l < w.cols(); ++l) {
      if (!mask(i, l)) grad(i, l) = w(i, l) * (grad_z(i, l) - inner);
    }
  }
  return grad;
}

}  // namespace taskgraph
