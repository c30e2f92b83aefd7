#include "ranklab/scorer.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>

#include "ranklab/features.hpp"

namespace ranklab {

using nlohmann::json;

namespace {

using ConstMatMap = Eigen::Map<const Matrix>;
using ConstVecMap = Eigen::Map<const Vector>;

}  // namespace

MlpScorer::MlpScorer(int feature_count, int hidden_size)
    : feature_count_(feature_count), hidden_size_(hidden_size) {
  if (feature_count < 1 || hidden_size < 1) {
    throw IntegrityError("scorer dimensions must be positive");
  }
  const Eigen::Index f = feature_count, h = hidden_size;
  w1_off_ = 0;
  b1_off_ = w1_off_ + h * f;
  w2_off_ = b1_off_ + h;
  b2_off_ = w2_off_ + h * h;
  w3_off_ = b2_off_ + h;
  b3_off_ = w3_off_ + h;
  theta_ = Vector::Zero(b3_off_ + 1);
}

MlpScorer MlpScorer::random_init(int feature_count, int hidden_size, Rng& rng,
                                 double weight_scale) {
  MlpScorer scorer(feature_count, hidden_size);
  const Eigen::Index f = feature_count, h = hidden_size;
  auto fill = [&](Eigen::Index offset, Eigen::Index count, double stddev) {
    for (Eigen::Index i = 0; i < count; ++i) {
      scorer.theta_[offset + i] = rng.normal(0.0, stddev);
    }
  };
  fill(scorer.w1_off_, h * f, weight_scale / std::sqrt(static_cast<double>(f)));
  fill(scorer.w2_off_, h * h, weight_scale / std::sqrt(static_cast<double>(h)));
  fill(scorer.w3_off_, h, weight_scale / std::sqrt(static_cast<double>(h)));
  return scorer;
}

double MlpScorer::forward(const Eigen::Ref<const Vector>& features) const {
  if (features.size() != feature_count_) {
    throw IntegrityError("feature vector has length " + std::to_string(features.size()) +
                         ", model expects " + std::to_string(feature_count_));
  }
  if (!features.allFinite()) throw IntegrityError("non-finite input to scorer");
  const Eigen::Index f = feature_count_, h = hidden_size_;
  ConstMatMap w1(theta_.data() + w1_off_, h, f);
  ConstVecMap b1(theta_.data() + b1_off_, h);
  ConstMatMap w2(theta_.data() + w2_off_, h, h);
  ConstVecMap b2(theta_.data() + b2_off_, h);
  ConstVecMap w3(theta_.data() + w3_off_, h);
  const Vector h1 = ((w1 * features) + b1).array().tanh();
  const Vector h2 = ((w2 * h1) + b2).array().tanh();
  return w3.dot(h2) + theta_[b3_off_];
}

Vector MlpScorer::forward_batch(const Eigen::Ref<const Matrix>& features) const {
  Vector scores(features.cols());
  for (Eigen::Index i = 0; i < features.cols(); ++i) {
    scores[i] = forward(features.col(i));
  }
  return scores;
}

Vector MlpScorer::backward(const Eigen::Ref<const Matrix>& features,
                           const Eigen::Ref<const Vector>& upstream) const {
  if (features.rows() != feature_count_) {
    throw IntegrityError("feature batch has " + std::to_string(features.rows()) +
                         " rows, model expects " + std::to_string(feature_count_));
  }
  if (features.cols() != upstream.size()) {
    throw IntegrityError("feature batch and upstream gradient sizes differ");
  }
  const Eigen::Index f = feature_count_, h = hidden_size_;
  ConstMatMap w1(theta_.data() + w1_off_, h, f);
  ConstVecMap b1(theta_.data() + b1_off_, h);
  ConstMatMap w2(theta_.data() + w2_off_, h, h);
  ConstVecMap b2(theta_.data() + b2_off_, h);
  ConstVecMap w3(theta_.data() + w3_off_, h);

  Vector grad = Vector::Zero(theta_.size());
  Eigen::Map<Matrix> g_w1(grad.data() + w1_off_, h, f);
  Eigen::Map<Vector> g_b1(grad.data() + b1_off_, h);
  Eigen::Map<Matrix> g_w2(grad.data() + w2_off_, h, h);
  Eigen::Map<Vector> g_b2(grad.data() + b2_off_, h);
  Eigen::Map<Vector> g_w3(grad.data() + w3_off_, h);

  Vector h1(h), h2(h), d2(h), d1(h);
  for (Eigen::Index i = 0; i < features.cols(); ++i) {
    const auto x = features.col(i);
    const double u = upstream[i];
    h1 = ((w1 * x) + b1).array().tanh();
    h2 = ((w2 * h1) + b2).array().tanh();
    g_w3.noalias() += u * h2;
    grad[b3_off_] += u;
    d2 = (u * w3.array() * (1.0 - h2.array().square())).matrix();
    g_w2.noalias() += d2 * h1.transpose();
    g_b2.noalias() += d2;
    d1 = ((w2.transpose() * d2).array() * (1.0 - h1.array().square())).matrix();
    g_w1.noalias() += d1 * x.transpose();
    g_b1.noalias() += d1;
  }
  return grad;
}

void MlpScorer::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  json root;
  root["format_version"] = 1;
  root["feature_count"] = feature_count_;
  root["hidden_size"] = hidden_size_;
  root["activation"] = "tanh";
  root["tag"] = tag;
  root["feature_names"] = feature_names();
  root["parameters"] = std::vector<double>(theta_.data(), theta_.data() + theta_.size());
  out << root.dump(2) << '\n';
}

MlpScorer MlpScorer::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  json root = json::parse(in, nullptr, false);
  if (root.is_discarded()) throw ParseError(path.string() + ": malformed checkpoint");
  if (root.value("format_version", 0) != 1) {
    throw ParseError(path.string() + ": unsupported checkpoint version");
  }
  MlpScorer scorer(root.at("feature_count").get<int>(), root.at("hidden_size").get<int>());
  const auto params = root.at("parameters").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(params.size()) != scorer.parameter_count()) {
    throw IntegrityError(path.string() + ": parameter count mismatch");
  }
  scorer.theta_ = Eigen::Map<const Vector>(params.data(), scorer.parameter_count());
  if (!scorer.theta_.allFinite()) throw IntegrityError(path.string() + ": non-finite parameters");
  scorer.tag = root.value("tag", "mlp");
  return scorer;
}

}  // namespace ranklab
