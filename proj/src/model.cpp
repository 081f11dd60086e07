#include "bbsvm/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bbsvm {

namespace {

double explicit_dot(const Center& c, const AugPoint& p) {
  double s = 0.0;
  for (std::size_t k = 0; k < p.coords.size(); ++k) s += c.coords()[k] * p.coords[k];
  return s;
}

double center_dot(const Center& c, const AugPoint& p) {
  return explicit_dot(c, p) + c.slack_coeff(p.id) * p.slack_weight;
}

double norm_of(const SparseVector& x) {
  double s = 0.0;
  for (const Feature& f : x) s += f.value * f.value;
  return std::sqrt(s);
}

// Unit-normalized [sign * x/|x| ; sign].
std::vector<double> normalized_block(const SparseVector& x, double sign, std::size_t dim,
                                     bool strict) {
  const double norm = norm_of(x);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DataError("feature vector has zero (or non-finite) norm");
  }
  std::vector<double> coords(dim + 1, 0.0);
  for (const Feature& f : x) {
    if (f.index == 0 || f.index > dim) {
      if (strict) {
        throw DataError("feature index " + std::to_string(f.index) + " outside 1.." +
                        std::to_string(dim));
      }
      continue;
    }
    coords[f.index - 1] = sign * (f.value / norm);
  }
  coords[dim] = sign;
  return coords;
}

}  // namespace

double ModelParams::slack_weight() const { return std::isinf(C) ? 0.0 : 1.0 / std::sqrt(C); }

double ModelParams::kappa2() const { return 2.0 + (std::isinf(C) ? 0.0 : 1.0 / C); }

double ModelParams::kappa() const { return std::sqrt(kappa2()); }

void ModelParams::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be a positive number");
  }
  if (!(C > 0.0)) throw std::invalid_argument("C must be positive (or inf)");
  if (!(effective_delta() > 0.0) || !std::isfinite(effective_delta())) {
    throw std::invalid_argument("delta must be a positive number");
  }
  if (dim == 0) throw std::invalid_argument("dim must be positive");
}

AugPoint feature_map(const SparseVector& x, Label y, const ModelParams& params, PointId id) {
  AugPoint p;
  p.coords = normalized_block(x, sign_of(y), params.dim, true);
  p.slack_weight = params.slack_weight();
  p.id = id;
  p.label = y;
  return p;
}

AugPoint map_test_point(const SparseVector& x, const ModelParams& params) {
  AugPoint p;
  p.coords = normalized_block(x, 1.0, params.dim, false);
  p.id = kQueryId;
  return p;
}

const TrainingExample* SpanStream::next() {
  if (ordered_) {
    if (pos_ >= order_.size()) return nullptr;
    return &examples_[order_[pos_++]];
  }
  if (pos_ >= examples_.size()) return nullptr;
  return &examples_[pos_++];
}

Model::Model(ModelParams params)
    : params_((params.validate(), params)),
      cover_(params_.epsilon, params_.effective_delta()),
      buffer_(params_.lookahead) {}

Model::Model(ModelParams params, BlurredBallCover cover, PointId next_id)
    : params_((params.validate(), params)),
      cover_(std::move(cover)),
      buffer_(params_.lookahead),
      next_id_(next_id) {}

void Model::learn(const TrainingExample& example) {
  cover_.offer(buffer_, feature_map(example.x, example.y, params_, next_id_));
  ++next_id_;
}

void Model::finish() { cover_.flush(buffer_); }

Label Model::classify(const SparseVector& x) const {
  return bbsvm::classify(cover_, map_test_point(x, params_));
}

void train_stream(Model& model, ExampleStream& stream) {
  std::size_t position = 0;
  try {
    for (const TrainingExample* ex = stream.next(); ex != nullptr; ex = stream.next()) {
      model.learn(*ex);
      ++position;
    }
    model.finish();
  } catch (const std::exception& e) {
    throw DataError("training example " + std::to_string(position) + ": " + e.what());
  }
}

std::vector<const Ball*> support(const BlurredBallCover& cover, const AugPoint& p) {
  std::vector<const Ball*> out;
  for (const CoreSet& core : cover.cores()) {
    const Ball& b = core.ball;
    if (distance2(b.center, p) <= b.radius * b.radius) out.push_back(&b);
  }
  return out;
}

double score(const BlurredBallCover& cover, const AugPoint& p) {
  double s = 0.0;
  for (const Ball* b : support(cover, p)) {
    const double norm = b->center.norm();
    if (!(norm > 0.0)) throw std::domain_error("score: supporting ball has a zero center");
    s += center_dot(b->center, p) / norm;
  }
  return s;
}

Label classify(const BlurredBallCover& cover, const AugPoint& query) {
  if (cover.empty()) throw std::logic_error("classify: model has no balls");
  const double vote = score(cover, query) - score(cover, negated(query));
  if (vote > 0.0) return Label::kPositive;
  if (vote < 0.0) return Label::kNegative;

  double fallback = 0.0;
  for (const CoreSet& core : cover.cores()) {
    const double norm = core.ball.center.norm();
    if (norm > 0.0) fallback += center_dot(core.ball.center, query) / norm;
  }
  return fallback < 0.0 ? Label::kNegative : Label::kPositive;
}

Separator separator(const Center& center) {
  const auto& c = center.coords();
  if (c.empty()) return {};
  return Separator{std::vector<double>(c.begin(), c.end() - 1), c.back()};
}

bool halfspace_contains(const Center& center, const AugPoint& p) {
  return center_dot(center, p) - center.norm2() >= 0.0;
}

double margin(const Ball& ball, double kappa) {
  const double gap = kappa * kappa - ball.radius * ball.radius;
  return gap > 0.0 ? std::sqrt(gap) : 0.0;
}

}  // namespace bbsvm
