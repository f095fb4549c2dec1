#pragma once

#include <Eigen/Core>

#include "taskgraph/taxonomy.hpp"

namespace taskgraph {

using Matrix = Eigen::MatrixXd;
using Mask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Structurally forbidden cells for a taxonomy: the diagonal, every entry of
/// the START row (START has no preconditions) and every entry of the END
/// column (END is a precondition of nothing).
Mask build_mask(const Taxonomy& taxonomy);

/// Trainable edge scores. Entry (i, j) scores the edge i -> j, i.e. "j is a
/// precondition of i". Masked cells are held at 0 and never change.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  /// Throws InputError on shape mismatch or on non-finite unmasked values.
  ScoreMatrix(Matrix values, Mask mask);

  /// All-zero scores under the standard mask; softmax gives uniform rows.
  static ScoreMatrix zeros(const Taxonomy& taxonomy);

  const Matrix& values() const { return values_; }
  const Mask& mask() const { return mask_; }
  Eigen::Index size() const { return values_.rows(); }

  /// Returns a copy with `delta` added to the unmasked cells only.
  ScoreMatrix updated(const Matrix& delta) const;

 private:
  Matrix values_;
  Mask mask_;
};

/// Row-normalized edge weights in [0, 1]. Masked cells are exactly zero.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  /// Throws InputError unless square with every entry finite and in [0, 1].
  explicit AdjacencyMatrix(Matrix weights);

  const Matrix& weights() const { return weights_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return weights_(i, j); }
  Eigen::Index size() const { return weights_.rows(); }

 private:
  Matrix weights_;
};

/// Softmax over the unmasked cells of each row, max-subtracted for stability.
/// Fully masked rows become all-zero.
AdjacencyMatrix softmax_rows(const ScoreMatrix& scores);

/// Backpropagates a gradient with respect to softmax_rows(scores) into a
/// gradient with respect to the raw scores. Masked cells get zero.
Matrix softmax_rows_backward(const AdjacencyMatrix& z, const Mask& mask,
                             const Matrix& grad_z);

}  // namespace taskgraph
