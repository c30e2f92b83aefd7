#pragma once

#include "ranklab/types.hpp"

namespace ranklab {

// AdamW with decoupled weight decay. Defaults follow the usual fine-tuning
// recipe: beta1=0.9, beta2=0.999, eps=1e-8, weight decay 0.01.
class AdamW {
 public:
  struct Options {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
  };

  explicit AdamW(Eigen::Index parameter_count);
  AdamW(Eigen::Index parameter_count, Options options);

  void step(Vector& params, const Eigen::Ref<const Vector>& grad, double lr);

  std::int64_t steps_taken() const { return t_; }

 private:
  Options options_;
  Vector m_;
  Vector v_;
  std::int64_t t_ = 0;
};

}  // namespace ranklab
