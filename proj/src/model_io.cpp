#include "bbsvm/model_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "bbsvm/float_format.hpp"

namespace bbsvm {

namespace {

void write_floats(std::ostream& out, const std::vector<double>& values) {
  for (double v : values) out << ' ' << format_double(v);
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next line split into tokens; the first must equal `keyword`.
  std::vector<std::string> expect(std::string_view keyword, std::size_t arity) {
    std::vector<std::string> tokens = next_tokens();
    if (tokens.empty() || tokens.front() != keyword) {
      fail("expected '" + std::string(keyword) + "'");
    }
    if (tokens.size() != arity + 1) fail("wrong number of fields after '" + std::string(keyword) + "'");
    tokens.erase(tokens.begin());
    return tokens;
  }

  std::vector<std::string> next_tokens() {
    std::string line;
    ++line_;
    if (!std::getline(in_, line)) fail("unexpected end of file");
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    for (std::string t; ss >> t;) tokens.push_back(std::move(t));
    return tokens;
  }

  // True when nothing but blank lines remain.
  bool at_end() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return false;
    }
    return true;
  }

  double number(const std::string& token) const {
    try {
      return parse_double(token);
    } catch (const std::invalid_argument&) {
      fail("bad number '" + token + "'");
    }
  }

  std::uint64_t count(const std::string& token) const {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) fail("bad integer '" + token + "'");
    return v;
  }

  std::size_t line() const { return line_; }

  [[noreturn]] void fail(const std::string& what) const { fail_at(line_, what); }
  [[noreturn]] void fail_at(std::size_t line, const std::string& what) const {
    throw DataError("model file: " + what, line);
  }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

std::vector<double> floats(const LineReader& reader, std::span<const std::string> tokens) {
  std::vector<double> out;
  out.reserve(tokens.size());
  for (const std::string& t : tokens) out.push_back(reader.number(t));
  return out;
}

}  // namespace

void save_model(std::ostream& out, const Model& model) {
  const ModelParams& params = model.params();
  const auto& cores = model.cover().cores();
  out << "BBSVM " << kModelFormatVersion << '\n';
  out << "kappa " << format_double(params.kappa()) << '\n';
  out << "epsilon " << format_double(params.epsilon) << '\n';
  out << "C " << format_double(params.C) << '\n';
  out << "dim " << params.dim << '\n';
  out << "balls " << cores.size() << '\n';
  for (const CoreSet& core : cores) {
    const Center& c = core.ball.center;
    out << "ball " << format_double(core.ball.radius) << '\n';
    out << "center";
    write_floats(out, c.coords());
    out << '\n';
    out << "slack " << c.slack().size() << '\n';
    for (const auto& [id, coeff] : c.slack()) out << id << ' ' << format_double(coeff) << '\n';
    out << "core " << core.members.size() << '\n';
    for (const AugPoint& p : core.members) {
      out << p.id << ' ' << (p.label ? (*p.label == Label::kPositive ? "+1" : "-1") : "0");
      write_floats(out, p.coords);
      out << ' ' << format_double(p.slack_weight) << '\n';
    }
  }
}

void save_model(const std::filesystem::path& path, const Model& model) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  save_model(out, model);
  if (!out) throw DataError("write failed for " + path.string());
}

Model load_model(std::istream& in) {
  LineReader reader(in);
  {
    const auto header = reader.next_tokens();
    if (header.size() != 2 || header[0] != "BBSVM") reader.fail("not a BBSVM model file");
    if (header[1] != std::to_string(kModelFormatVersion)) {
      reader.fail("unsupported format version " + header[1]);
    }
  }
  const double kappa = reader.number(reader.expect("kappa", 1)[0]);
  const std::size_t kappa_line = reader.line();
  ModelParams params;
  params.epsilon = reader.number(reader.expect("epsilon", 1)[0]);
  params.C = reader.number(reader.expect("C", 1)[0]);
  params.dim = reader.count(reader.expect("dim", 1)[0]);
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    reader.fail(e.what());
  }
  if (std::abs(kappa - params.kappa()) > 1e-12 * params.kappa()) {
    reader.fail_at(kappa_line, "kappa does not match C");
  }
  const std::size_t width = params.dim + 1;

  const std::uint64_t ball_count = reader.count(reader.expect("balls", 1)[0]);
  std::vector<CoreSet> cores;
  PointId next_id = 0;
  for (std::uint64_t b = 0; b < ball_count; ++b) {
    CoreSet core;
    const double radius = reader.number(reader.expect("ball", 1)[0]);
    if (!(radius >= 0.0) || !std::isfinite(radius)) reader.fail("radius must be finite and >= 0");
    const auto center_tokens = reader.expect("center", width);
    std::vector<double> coords = floats(reader, center_tokens);

    const std::uint64_t slack_count = reader.count(reader.expect("slack", 1)[0]);
    std::map<PointId, double> slack;
    for (std::uint64_t i = 0; i < slack_count; ++i) {
      const auto t = reader.next_tokens();
      if (t.size() != 2) reader.fail("slack entry needs `<id> <coefficient>`");
      slack[reader.count(t[0])] = reader.number(t[1]);
    }
    core.ball = Ball{Center(std::move(coords), std::move(slack)), radius};

    const std::uint64_t member_count = reader.count(reader.expect("core", 1)[0]);
    for (std::uint64_t i = 0; i < member_count; ++i) {
      const auto t = reader.next_tokens();
      if (t.size() != width + 3) reader.fail("core member has the wrong number of fields");
      AugPoint p;
      p.id = reader.count(t[0]);
      if (t[1] == "+1" || t[1] == "1") {
        p.label = Label::kPositive;
      } else if (t[1] == "-1") {
        p.label = Label::kNegative;
      } else if (t[1] != "0") {
        reader.fail("bad member label '" + t[1] + "'");
      }
      p.coords = floats(reader, std::span(t).subspan(2, width));
      p.slack_weight = reader.number(t.back());
      next_id = std::max(next_id, p.id + 1);
      core.members.push_back(std::move(p));
    }
    cores.push_back(std::move(core));
  }
  if (!reader.at_end()) reader.fail("trailing content after last ball");

  BlurredBallCover cover = BlurredBallCover::restore(params.epsilon, params.effective_delta(),
                                                     std::move(cores), next_id);
  return Model(params, std::move(cover), next_id);
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file " + path.string());
  return load_model(in);
}

}  // namespace bbsvm
