#pragma once

#include <filesystem>
#include <string>

#include "ranklab/rng.hpp"
#include "ranklab/types.hpp"

namespace ranklab {

// Feed-forward scorer F -> H -> H -> 1 with tanh hidden activations and an
// identity output. Parameters live in one flat vector so the optimizer and
// the finite-difference checks can treat the model as theta in R^n.
//
// Flat layout: W1 (H*F, column-major), b1 (H), W2 (H*H), b2 (H), w3 (H), b3.
class MlpScorer {
 public:
  MlpScorer(int feature_count, int hidden_size);

  // He-style scaled normal init on weights, zero biases.
  static MlpScorer random_init(int feature_count, int hidden_size, Rng& rng,
                               double weight_scale = 1.0);

  int feature_count() const { return feature_count_; }
  int hidden_size() const { return hidden_size_; }
  Eigen::Index parameter_count() const { return theta_.size(); }

  const Vector& parameters() const { return theta_; }
  Vector& parameters() { return theta_; }

  double forward(const Eigen::Ref<const Vector>& features) const;

  // One score per column of features (F x m). Pure per-column mapping.
  Vector forward_batch(const Eigen::Ref<const Matrix>& features) const;

  // Gradient of sum_i upstream[i] * score(features.col(i)) with respect to
  // the flat parameter vector. Accumulates per sample in index order, so the
  // batch gradient equals the exact sum of single-sample gradients.
  Vector backward(const Eigen::Ref<const Matrix>& features,
                  const Eigen::Ref<const Vector>& upstream) const;

  void save(const std::filesystem::path& path) const;
  static MlpScorer load(const std::filesystem::path& path);

  std::string tag = "mlp";

 private:
  int feature_count_;
  int hidden_size_;
  Vector theta_;

  // segment offsets into theta_
  Eigen::Index w1_off_, b1_off_, w2_off_, b2_off_, w3_off_, b3_off_;
};

}  // namespace ranklab
