#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "bbsvm/cover.hpp"
#include "bbsvm/example.hpp"
#include "bbsvm/meb.hpp"

namespace bbsvm {

struct ModelParams {
  double epsilon = 0.001;
  double C = std::numeric_limits<double>::infinity();
  std::size_t lookahead = 10;
  /// Solver quality; epsilon / 2 when unset.
  std::optional<double> delta;
  /// Number of raw features.
  std::size_t dim = 0;

  double effective_delta() const { return delta.value_or(epsilon / 2.0); }
  /// 1 / sqrt(C), zero for C = inf.
  double slack_weight() const;
  /// kappa^2 = 2 + 1/C.
  double kappa2() const;
  double kappa() const;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// Training point [y * x/|x| ; y] with slack weight 1/sqrt(C). Its norm is
/// exactly kappa. Throws DataError for a zero vector or an index past dim.
AugPoint feature_map(const SparseVector& x, Label y, const ModelParams& params, PointId id);

/// Query point [x/|x| ; 1] with no slack component. Features past dim are
/// dropped after normalization.
AugPoint map_test_point(const SparseVector& x, const ModelParams& params);

/// Pull-style source of training examples. next() returns nullptr at the
/// end of the stream.
class ExampleStream {
 public:
  virtual ~ExampleStream() = default;
  virtual const TrainingExample* next() = 0;
};

/// Streams a span, optionally in a given index order.
class SpanStream final : public ExampleStream {
 public:
  explicit SpanStream(std::span<const TrainingExample> examples) : examples_(examples) {}
  SpanStream(std::span<const TrainingExample> examples, std::span<const std::size_t> order)
      : examples_(examples), order_(order), ordered_(true) {}

  const TrainingExample* next() override;

 private:
  std::span<const TrainingExample> examples_;
  std::span<const std::size_t> order_;
  bool ordered_ = false;
  std::size_t pos_ = 0;
};

class Model {
 public:
  explicit Model(ModelParams params);
  Model(ModelParams params, BlurredBallCover cover, PointId next_id);

  const ModelParams& params() const { return params_; }
  const BlurredBallCover& cover() const { return cover_; }
  PointId next_id() const { return next_id_; }

  /// Maps one example with a fresh id and offers it to the cover.
  void learn(const TrainingExample& example);
  /// Runs the final check on a partially filled lookahead buffer.
  void finish();

  Label classify(const SparseVector& x) const;

 private:
  ModelParams params_;
  BlurredBallCover cover_;
  Lookahead buffer_;
  PointId next_id_ = 0;
};

/// Consumes the whole stream then flushes. Errors are rethrown as DataError
/// naming the 0-based stream position.
void train_stream(Model& model, ExampleStream& stream);

/// Balls that contain p (unexpanded, closed).
std::vector<const Ball*> support(const BlurredBallCover& cover, const AugPoint& p);

/// Sum over supporting balls of p . c / |c|. Throws std::domain_error if a
/// supporting ball has a zero center.
double score(const BlurredBallCover& cover, const AugPoint& p);

/// sgn(S(p) - S(-p)). Ties fall back to the sign of p . c/|c| summed over
/// every ball, then to +1. Throws std::logic_error on an empty cover.
Label classify(const BlurredBallCover& cover, const AugPoint& query);

/// Hyperplane read off a center: the first dim coordinates are the normal,
/// the last explicit coordinate is the bias.
struct Separator {
  std::vector<double> normal;
  double bias = 0.0;
};

Separator separator(const Center& center);

/// (p - c) . c >= 0, the halfspace form of ball membership.
bool halfspace_contains(const Center& center, const AugPoint& p);

/// sqrt(kappa^2 - r^2); zero when r >= kappa.
double margin(const Ball& ball, double kappa);

}  // namespace bbsvm
