#pragma once

#include "ranklab/types.hpp"

namespace ranklab {

struct LossGrad {
  double loss;
  double grad;
};

struct ListLossGrad {
  double loss;
  Vector grad;
};

// Binary cross entropy on a logit. loss = -[y ln s(x) + (1-y) ln(1-s(x))],
// grad = s(x) - y, with s the logistic function. Stable for large |score|.
LossGrad bce_loss_grad(double score, int label);

// Squared error against a teacher score. loss = (s - t)^2, grad = 2(s - t).
LossGrad mse_loss_grad(double score, double teacher_score);

// RankNet over a list given in target order (position i beats position j for
// i < j): loss = sum_{i<j} ln(1 + exp(s_j - s_i)), target pair probability 1,
// sigma scale 1, all pairs unweighted. Gradient accumulated over all pairs.
ListLossGrad ranknet_loss_grad(const Eigen::Ref<const Vector>& scores);

// log(1 + exp(x)) without overflow.
double softplus(double x);

// Logistic function, stable on both tails.
double logistic(double x);

}  // namespace ranklab
