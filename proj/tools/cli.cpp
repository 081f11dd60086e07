#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bbsvm/data.hpp"
#include "bbsvm/eval.hpp"
#include "bbsvm/float_format.hpp"
#include "bbsvm/model.hpp"
#include "bbsvm/model_io.hpp"

namespace bbsvm::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Destination for command output: a file when a path is given, else `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw DataError("cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

double parse_c(const std::string& text) {
  double c = 0.0;
  try {
    c = parse_double(text);
  } catch (const std::invalid_argument&) {
    throw UsageError("--C expects a positive number or 'inf'");
  }
  if (!(c > 0.0)) throw UsageError("--C must be positive");
  return c;
}

void validate(const Config& cfg) {
  if (!(cfg.epsilon > 0.0)) throw UsageError("--epsilon must be positive");
  if (cfg.delta && !(*cfg.delta > 0.0)) throw UsageError("--delta must be positive");
  if (cfg.runs < 1) throw UsageError("--runs must be at least 1");
  if (cfg.format != "libsvm") throw UsageError("--format supports only 'libsvm'");
}

ModelParams params_from(const Config& cfg, std::size_t dim) {
  ModelParams params;
  params.epsilon = cfg.epsilon;
  params.C = cfg.C;
  params.lookahead = cfg.lookahead;
  params.delta = cfg.delta;
  params.dim = dim;
  return params;
}

Dataset load_nonempty(const std::string& path, const char* what) {
  Dataset data = load_libsvm(path);
  if (data.empty()) throw DataError(std::string(what) + " " + path + " has no examples");
  return data;
}

int cmd_gen(const SyntheticSpec& spec, std::size_t test_n, const std::string& out_path,
            const std::string& test_out) {
  SyntheticSpec all = spec;
  all.n = spec.n + test_n;
  const auto [train, test] = split_dataset(generate_synthetic(all), spec.n);
  {
    std::ofstream out(out_path);
    if (!out) throw DataError("cannot write " + out_path);
    write_libsvm(out, train);
  }
  if (!test_out.empty()) {
    std::ofstream out(test_out);
    if (!out) throw DataError("cannot write " + test_out);
    write_libsvm(out, test);
  }
  return kExitOk;
}

int cmd_train(const Config& cfg, std::ostream& err) {
  const Dataset data = load_nonempty(cfg.data_path, "training file");
  Model model(params_from(cfg, data.dim));
  SpanStream stream(data.examples);
  train_stream(model, stream);
  save_model(cfg.model_path, model);
  err << "trained on " << data.size() << " examples: " << model.cover().ball_count()
      << " balls, " << model.cover().stored_points() << " core points\n";
  return kExitOk;
}

int cmd_predict(const Config& cfg, std::ostream& out, std::ostream& err) {
  const Model model = load_model(cfg.model_path);
  if (model.cover().empty()) throw DataError("model has no balls");
  const std::vector<Query> queries = load_queries(cfg.data_path);
  Sink sink(cfg.out_path, out);
  std::size_t labelled = 0;
  std::size_t correct = 0;
  for (const Query& q : queries) {
    const Label predicted = model.classify(q.x);
    sink.get() << (predicted == Label::kPositive ? "+1" : "-1") << '\n';
    if (q.y) {
      ++labelled;
      if (*q.y == predicted) ++correct;
    }
  }
  if (labelled == queries.size() && labelled > 0) {
    err << "accuracy " << format_double(static_cast<double>(correct) / labelled) << " ("
        << correct << "/" << labelled << ")\n";
  }
  return kExitOk;
}

int cmd_eval(const Config& cfg, std::size_t jobs, bool baseline, std::ostream& out,
             std::ostream& err) {
  const Dataset train = load_nonempty(cfg.train_path, "training file");
  const Dataset test = cfg.test_path.empty() ? train : load_nonempty(cfg.test_path, "test file");
  const ModelParams params = params_from(cfg, std::max(train.dim, test.dim));
  ExperimentOptions options;
  options.jobs = jobs;
  const ExperimentReport report = run_experiment(train, test, params, cfg.runs, cfg.seed, options);
  Sink sink(cfg.out_path, out);
  write_csv_header(sink.get());
  write_csv_row(sink.get(), cfg.epsilon, cfg.lookahead, report);
  if (baseline) {
    double total = 0.0;
    for (std::size_t k = 0; k < cfg.runs; ++k) {
      const auto order = shuffled_order(train.size(), cfg.seed + k);
      SpanStream stream(train.examples, order);
      total += perceptron_stream(stream, test, params.dim);
    }
    err << "perceptron mean_accuracy " << format_double(total / static_cast<double>(cfg.runs))
        << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const Config& cfg, const std::vector<double>& epsilons,
              const std::vector<std::size_t>& lookaheads, std::size_t jobs, std::ostream& out) {
  const Dataset train = load_nonempty(cfg.train_path, "training file");
  const Dataset test = cfg.test_path.empty() ? train : load_nonempty(cfg.test_path, "test file");
  const ModelParams params = params_from(cfg, std::max(train.dim, test.dim));
  ExperimentOptions options;
  options.jobs = jobs;
  std::vector<SweepRow> rows;
  try {
    rows = epsilon_sweep(train, test, params, epsilons, cfg.runs, cfg.seed, lookaheads, options);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Sink sink(cfg.out_path, out);
  write_sweep_csv(sink.get(), rows);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Blurred ball SVM: streaming SVM training by minimum enclosing balls", "bbsvm"};
  app.require_subcommand(1);

  Config cfg;
  std::string c_text = "inf";
  std::size_t jobs = 1;

  auto add_model_flags = [&](CLI::App* sub) {
    sub->add_option("--epsilon", cfg.epsilon, "Cover expansion epsilon")->capture_default_str();
    sub->add_option("--C", c_text, "Slack penalty C, or 'inf' for hard margin")
        ->capture_default_str();
    sub->add_option("--L", cfg.lookahead, "Lookahead buffer size")->capture_default_str();
    sub->add_option("--delta", cfg.delta, "Solver quality (default epsilon/2)");
    sub->add_option("--format", cfg.format, "Input format")->capture_default_str();
  };

  SyntheticSpec gen_spec;
  std::size_t gen_test_n = 0;
  std::string gen_test_out;
  auto* gen = app.add_subcommand("gen", "Write a synthetic separable dataset (LIBSVM format)");
  gen->add_option("--n", gen_spec.n, "Number of examples")->required();
  gen->add_option("--dim", gen_spec.dim, "Feature dimension")->required();
  gen->add_option("--margin", gen_spec.margin, "Minimum |u.x|")->capture_default_str();
  gen->add_option("--noise", gen_spec.noise, "Label flip probability")->capture_default_str();
  gen->add_option("--seed", gen_spec.seed, "Generator seed")->capture_default_str();
  gen->add_option("--out", cfg.out_path, "Output file")->required();
  gen->add_option("--test-n", gen_test_n, "Extra examples written to --test-out");
  gen->add_option("--test-out", gen_test_out, "Held-out split output file");

  auto* train = app.add_subcommand("train", "Train a model from a LIBSVM file");
  train->add_option("--data", cfg.data_path, "Training data")->required();
  train->add_option("--model", cfg.model_path, "Model file to write")->required();
  add_model_flags(train);

  auto* predict = app.add_subcommand("predict", "Label each line of a LIBSVM file");
  predict->add_option("--model", cfg.model_path, "Model file")->required();
  predict->add_option("--data", cfg.data_path, "Data to classify")->required();
  predict->add_option("--out", cfg.out_path, "Write labels here instead of stdout");

  bool baseline = false;
  auto* eval = app.add_subcommand("eval", "Averaged accuracy over shuffled training streams");
  eval->add_option("--train", cfg.train_path, "Training data")->required();
  eval->add_option("--test", cfg.test_path, "Test data (default: the training data)");
  eval->add_option("--runs", cfg.runs, "Number of shuffled runs")->capture_default_str();
  eval->add_option("--seed", cfg.seed, "Base shuffle seed")->capture_default_str();
  eval->add_option("--jobs", jobs, "Concurrent runs")->capture_default_str();
  eval->add_option("--out", cfg.out_path, "CSV output file (default stdout)");
  eval->add_flag("--perceptron", baseline, "Also report the streaming perceptron");
  add_model_flags(eval);

  std::vector<double> epsilons{0.1, 0.01, 0.001};
  std::vector<std::size_t> lookaheads{0, 10};
  auto* sweep = app.add_subcommand("sweep", "Experiments over a list of epsilon values");
  sweep->add_option("--train", cfg.train_path, "Training data")->required();
  sweep->add_option("--test", cfg.test_path, "Test data (default: the training data)");
  sweep->add_option("--epsilons", epsilons, "Comma-separated epsilon values")->delimiter(',');
  sweep->add_option("--lookaheads", lookaheads, "Comma-separated lookahead sizes")->delimiter(',');
  sweep->add_option("--runs", cfg.runs, "Number of shuffled runs")->capture_default_str();
  sweep->add_option("--seed", cfg.seed, "Base shuffle seed")->capture_default_str();
  sweep->add_option("--jobs", jobs, "Concurrent runs")->capture_default_str();
  sweep->add_option("--out", cfg.out_path, "CSV output file (default stdout)");
  sweep->add_option("--C", c_text, "Slack penalty C, or 'inf'")->capture_default_str();
  sweep->add_option("--delta", cfg.delta, "Fixed solver quality (default epsilon/2 per row)");
  sweep->add_option("--format", cfg.format, "Input format")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "bbsvm: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    cfg.C = parse_c(c_text);
    if (jobs == 0) throw UsageError("--jobs must be at least 1");
    CLI::App* chosen = app.get_subcommands().front();
    cfg.command = chosen->get_name();
    validate(cfg);

    if (chosen == gen) return cmd_gen(gen_spec, gen_test_n, cfg.out_path, gen_test_out);
    if (chosen == train) return cmd_train(cfg, err);
    if (chosen == predict) return cmd_predict(cfg, out, err);
    if (chosen == eval) return cmd_eval(cfg, jobs, baseline, out, err);
    return cmd_sweep(cfg, epsilons, lookaheads, jobs, out);
  } catch (const UsageError& e) {
    err << "bbsvm: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    // Parameter ranges checked below the CLI layer (generator, model).
    err << "bbsvm: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "bbsvm: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace bbsvm::cli
