#include "ranklab/losses.hpp"

#include <cmath>

namespace ranklab {

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

LossGrad bce_loss_grad(double score, int label) {
  if (label != 0 && label != 1) throw IntegrityError("BCE label must be 0 or 1");
  if (!std::isfinite(score)) throw IntegrityError("non-finite score in BCE loss");
  // label 1: -ln s(x) = softplus(-x); label 0: -ln(1 - s(x)) = softplus(x)
  const double loss = label == 1 ? softplus(-score) : softplus(score);
  return {loss, logistic(score) - static_cast<double>(label)};
}

LossGrad mse_loss_grad(double score, double teacher_score) {
  if (!std::isfinite(score) || !std::isfinite(teacher_score)) {
    throw IntegrityError("non-finite input to MSE loss");
  }
  const double diff = score - teacher_score;
  return {diff * diff, 2.0 * diff};
}

ListLossGrad ranknet_loss_grad(const Eigen::Ref<const Vector>& scores) {
  const Eigen::Index n = scores.size();
  if (n < 2) throw IntegrityError("RankNet needs at least 2 scores");
  ListLossGrad out{0.0, Vector::Zero(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double margin = scores[j] - scores[i];
      out.loss += softplus(margin);
      const double p = logistic(margin);  // d softplus(m) / dm
      out.grad[j] += p;
      out.grad[i] -= p;
    }
  }
  return out;
}

}  // namespace ranklab
