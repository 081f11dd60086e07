#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "bbsvm/data.hpp"
#include "bbsvm/model.hpp"

namespace bbsvm {

struct RunRecord {
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  double train_seconds = 0.0;
  std::size_t balls = 0;
  std::size_t core_points = 0;
};

struct ExperimentReport {
  std::vector<RunRecord> per_run;  // sorted by seed
  double mean_accuracy = 0.0;
  double accuracy_std = 0.0;  // sample standard deviation, 0 for one run
  double mean_time = 0.0;
  double mean_balls = 0.0;
  double mean_core_points = 0.0;
};

struct ExperimentOptions {
  /// Runs executed concurrently.
  std::size_t jobs = 1;
  /// Called for every example handed to the model: (run index, index into
  /// the training set).
  std::function<void(std::size_t, std::size_t)> on_example;
};

/// Fraction of `test` classified correctly.
double accuracy(const Model& model, const Dataset& test);

/// Builds the report from per-run records; order of `runs` is irrelevant.
ExperimentReport aggregate(std::vector<RunRecord> runs);

/// Trains `runs` models, run k on the training set shuffled with seed
/// base_seed + k, and scores each on `test` in file order. Timing covers
/// training only. params.dim is raised to the training dimension if needed.
ExperimentReport run_experiment(const Dataset& train, const Dataset& test, ModelParams params,
                                std::size_t runs, std::uint64_t base_seed,
                                const ExperimentOptions& options = {});

inline constexpr std::size_t kDefaultLookaheadValues[] = {0, 10};
inline constexpr std::span<const std::size_t> kDefaultLookaheads{kDefaultLookaheadValues};

struct SweepRow {
  double epsilon = 0.0;
  std::size_t lookahead = 0;
  std::size_t runs = 0;
  ExperimentReport report;
};

/// One experiment per (epsilon, lookahead) pair, rows ordered by epsilon
/// then lookahead. Rejects empty or duplicated epsilon/lookahead lists.
/// An explicit params.delta is kept for every row; otherwise each row uses
/// epsilon / 2.
std::vector<SweepRow> epsilon_sweep(const Dataset& train, const Dataset& test,
                                    const ModelParams& params, std::span<const double> epsilons,
                                    std::size_t runs, std::uint64_t base_seed,
                                    std::span<const std::size_t> lookaheads = kDefaultLookaheads,
                                    const ExperimentOptions& options = {});

inline constexpr const char* kReportCsvHeader =
    "epsilon,L,runs,mean_accuracy,std_accuracy,mean_train_seconds,mean_balls,mean_core_points";

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, double epsilon, std::size_t lookahead,
                   const ExperimentReport& report);
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

/// Single-pass mistake-driven perceptron over [x/|x| ; 1].
class Perceptron {
 public:
  explicit Perceptron(std::size_t dim) : weights_(dim + 1, 0.0), dim_(dim) {}

  /// Updates on a mistake (margin <= 0). Returns whether it updated.
  bool learn(const TrainingExample& example);
  /// sgn(w . x), with 0 reported as +1.
  Label predict(const SparseVector& x) const;

  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
  std::size_t dim_;
};

/// Trains a Perceptron on one pass of `stream` and returns its accuracy on
/// `test`.
double perceptron_stream(ExampleStream& stream, const Dataset& test, std::size_t dim);

}  // namespace bbsvm
