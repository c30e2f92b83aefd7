#include "ranklab/optimizer.hpp"

#include <cmath>

namespace ranklab {

AdamW::AdamW(Eigen::Index parameter_count) : AdamW(parameter_count, Options{}) {}

AdamW::AdamW(Eigen::Index parameter_count, Options options)
    : options_(options), m_(Vector::Zero(parameter_count)), v_(Vector::Zero(parameter_count)) {}

void AdamW::step(Vector& params, const Eigen::Ref<const Vector>& grad, double lr) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw IntegrityError("optimizer state does not match parameter count");
  }
  ++t_;
  m_ = options_.beta1 * m_ + (1.0 - options_.beta1) * grad;
  v_ = options_.beta2 * v_.array().matrix() + (1.0 - options_.beta2) * grad.array().square().matrix();
  const double bias1 = 1.0 - std::pow(options_.beta1, static_cast<double>(t_));
  const double bias2 = 1.0 - std::pow(options_.beta2, static_cast<double>(t_));
  const auto m_hat = m_.array() / bias1;
  const auto v_hat = v_.array() / bias2;
  params.array() -= lr * (m_hat / (v_hat.sqrt() + options_.eps) +
                          options_.weight_decay * params.array());
}

}  // namespace ranklab
