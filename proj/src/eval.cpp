#include "bbsvm/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>

#include "bbsvm/float_format.hpp"

namespace bbsvm {

namespace {

// Forwards a SpanStream while reporting each handed-out index.
class ObservedStream final : public ExampleStream {
 public:
  ObservedStream(std::span<const TrainingExample> examples, std::span<const std::size_t> order,
                 std::size_t run, const std::function<void(std::size_t, std::size_t)>& hook)
      : examples_(examples), order_(order), run_(run), hook_(hook) {}

  const TrainingExample* next() override {
    if (pos_ >= order_.size()) return nullptr;
    const std::size_t index = order_[pos_++];
    if (hook_) hook_(run_, index);
    return &examples_[index];
  }

 private:
  std::span<const TrainingExample> examples_;
  std::span<const std::size_t> order_;
  std::size_t run_;
  const std::function<void(std::size_t, std::size_t)>& hook_;
  std::size_t pos_ = 0;
};

RunRecord single_run(const Dataset& train, const Dataset& test, const ModelParams& params,
                     std::size_t run, std::uint64_t seed, const ExperimentOptions& options) {
  const std::vector<std::size_t> order = shuffled_order(train.size(), seed);
  ObservedStream stream(train.examples, order, run, options.on_example);
  Model model(params);

  const auto start = std::chrono::steady_clock::now();
  try {
    train_stream(model, stream);
  } catch (const std::exception& e) {
    throw DataError("run " + std::to_string(run) + ": " + e.what());
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  RunRecord record;
  record.seed = seed;
  record.train_seconds = elapsed.count();
  record.balls = model.cover().ball_count();
  record.core_points = model.cover().stored_points();
  record.accuracy = accuracy(model, test);
  return record;
}

}  // namespace

double accuracy(const Model& model, const Dataset& test) {
  if (test.empty()) throw std::invalid_argument("accuracy: empty test set");
  std::size_t correct = 0;
  for (const TrainingExample& ex : test.examples) {
    if (model.classify(ex.x) == ex.y) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

ExperimentReport aggregate(std::vector<RunRecord> runs) {
  if (runs.empty()) throw std::invalid_argument("aggregate: no runs");
  std::sort(runs.begin(), runs.end(),
            [](const RunRecord& a, const RunRecord& b) { return a.seed < b.seed; });
  ExperimentReport report;
  const double n = static_cast<double>(runs.size());
  for (const RunRecord& r : runs) {
    report.mean_accuracy += r.accuracy;
    report.mean_time += r.train_seconds;
    report.mean_balls += static_cast<double>(r.balls);
    report.mean_core_points += static_cast<double>(r.core_points);
  }
  report.mean_accuracy /= n;
  report.mean_time /= n;
  report.mean_balls /= n;
  report.mean_core_points /= n;
  if (runs.size() > 1) {
    double ss = 0.0;
    for (const RunRecord& r : runs) {
      const double d = r.accuracy - report.mean_accuracy;
      ss += d * d;
    }
    report.accuracy_std = std::sqrt(ss / (n - 1.0));
  }
  report.per_run = std::move(runs);
  return report;
}

ExperimentReport run_experiment(const Dataset& train, const Dataset& test, ModelParams params,
                                std::size_t runs, std::uint64_t base_seed,
                                const ExperimentOptions& options) {
  if (train.empty()) throw std::invalid_argument("run_experiment: empty training set");
  if (test.empty()) throw std::invalid_argument("run_experiment: empty test set");
  if (runs == 0) throw std::invalid_argument("run_experiment: runs must be at least 1");
  params.dim = std::max(params.dim, train.dim);
  params.validate();

  std::vector<RunRecord> records;
  records.reserve(runs);
  const std::size_t jobs = std::max<std::size_t>(1, options.jobs);
  for (std::size_t first = 0; first < runs; first += jobs) {
    const std::size_t last = std::min(runs, first + jobs);
    if (jobs == 1) {
      records.push_back(single_run(train, test, params, first, base_seed + first, options));
      continue;
    }
    std::vector<std::future<RunRecord>> pending;
    for (std::size_t k = first; k < last; ++k) {
      pending.push_back(std::async(std::launch::async, single_run, std::cref(train),
                                   std::cref(test), std::cref(params), k, base_seed + k,
                                   std::cref(options)));
    }
    for (auto& f : pending) records.push_back(f.get());
  }
  return aggregate(std::move(records));
}

std::vector<SweepRow> epsilon_sweep(const Dataset& train, const Dataset& test,
                                    const ModelParams& params, std::span<const double> epsilons,
                                    std::size_t runs, std::uint64_t base_seed,
                                    std::span<const std::size_t> lookaheads,
                                    const ExperimentOptions& options) {
  if (epsilons.empty()) throw std::invalid_argument("epsilon_sweep: no epsilon values");
  if (lookaheads.empty()) throw std::invalid_argument("epsilon_sweep: no lookahead values");
  const std::set<double> eps_sorted(epsilons.begin(), epsilons.end());
  if (eps_sorted.size() != epsilons.size()) {
    throw std::invalid_argument("epsilon_sweep: duplicate epsilon values");
  }
  const std::set<std::size_t> l_sorted(lookaheads.begin(), lookaheads.end());
  if (l_sorted.size() != lookaheads.size()) {
    throw std::invalid_argument("epsilon_sweep: duplicate lookahead values");
  }

  std::vector<SweepRow> rows;
  for (double eps : eps_sorted) {
    for (std::size_t lookahead : l_sorted) {
      ModelParams row_params = params;
      row_params.epsilon = eps;
      row_params.lookahead = lookahead;
      rows.push_back(SweepRow{eps, lookahead, runs,
                              run_experiment(train, test, row_params, runs, base_seed, options)});
    }
  }
  return rows;
}

void write_csv_header(std::ostream& out) { out << kReportCsvHeader << '\n'; }

void write_csv_row(std::ostream& out, double epsilon, std::size_t lookahead,
                   const ExperimentReport& report) {
  out << format_double(epsilon) << ',' << lookahead << ',' << report.per_run.size() << ','
      << format_double(report.mean_accuracy) << ',' << format_double(report.accuracy_std) << ','
      << format_double(report.mean_time) << ',' << format_double(report.mean_balls) << ','
      << format_double(report.mean_core_points) << '\n';
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  write_csv_header(out);
  for (const SweepRow& row : rows) write_csv_row(out, row.epsilon, row.lookahead, row.report);
}

namespace {

// [x/|x| ; 1], extra features dropped after normalization.
std::vector<double> perceptron_input(const SparseVector& x, std::size_t dim) {
  double norm2 = 0.0;
  for (const Feature& f : x) norm2 += f.value * f.value;
  std::vector<double> v(dim + 1, 0.0);
  const double norm = std::sqrt(norm2);
  if (norm > 0.0) {
    for (const Feature& f : x) {
      if (f.index >= 1 && f.index <= dim) v[f.index - 1] = f.value / norm;
    }
  }
  v[dim] = 1.0;
  return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

bool Perceptron::learn(const TrainingExample& example) {
  const std::vector<double> v = perceptron_input(example.x, dim_);
  const double y = sign_of(example.y);
  if (y * dot(weights_, v) > 0.0) return false;
  for (std::size_t k = 0; k < v.size(); ++k) weights_[k] += y * v[k];
  return true;
}

Label Perceptron::predict(const SparseVector& x) const {
  return dot(weights_, perceptron_input(x, dim_)) < 0.0 ? Label::kNegative : Label::kPositive;
}

double perceptron_stream(ExampleStream& stream, const Dataset& test, std::size_t dim) {
  if (test.empty()) throw std::invalid_argument("perceptron_stream: empty test set");
  Perceptron perceptron(dim);
  for (const TrainingExample* ex = stream.next(); ex != nullptr; ex = stream.next()) {
    perceptron.learn(*ex);
  }
  std::size_t correct = 0;
  for (const TrainingExample& ex : test.examples) {
    if (perceptron.predict(ex.x) == ex.y) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

}  // namespace bbsvm
