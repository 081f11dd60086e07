#include "bbsvm/data.hpp"

#include <zlib.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "bbsvm/float_format.hpp"

namespace bbsvm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

Label parse_label(std::string_view token, std::size_t line) {
  double value = 0.0;
  try {
    value = parse_double(token);
  } catch (const std::invalid_argument&) {
    throw DataError("malformed label '" + std::string(token) + "'", line);
  }
  if (value == 1.0) return Label::kPositive;
  if (value == -1.0 || value == 0.0) return Label::kNegative;
  throw DataError("unknown label '" + std::string(token) + "'", line);
}

Feature parse_feature(std::string_view token, std::size_t line) {
  const auto colon = token.find(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw DataError("malformed feature '" + std::string(token) + "'", line);
  }
  Feature f;
  const std::string_view idx = token.substr(0, colon);
  auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), f.index);
  if (ec != std::errc{} || ptr != idx.data() + idx.size() || f.index == 0) {
    throw DataError("malformed feature index in '" + std::string(token) + "'", line);
  }
  try {
    f.value = parse_double(token.substr(colon + 1));
  } catch (const std::invalid_argument&) {
    throw DataError("malformed feature value in '" + std::string(token) + "'", line);
  }
  if (!std::isfinite(f.value)) {
    throw DataError("non-finite feature value in '" + std::string(token) + "'", line);
  }
  return f;
}

std::string read_gzip(const std::filesystem::path& path) {
  gzFile file = gzopen(path.c_str(), "rb");
  if (file == nullptr) throw DataError("cannot open " + path.string());
  std::string out;
  std::string chunk(1 << 16, '\0');
  for (;;) {
    const int got = gzread(file, chunk.data(), static_cast<unsigned>(chunk.size()));
    if (got < 0) {
      gzclose(file);
      throw DataError("gzip decode failed for " + path.string());
    }
    if (got == 0) break;
    out.append(chunk.data(), static_cast<std::size_t>(got));
  }
  gzclose(file);
  return out;
}

}  // namespace

std::vector<Query> parse_queries(std::istream& in) {
  std::vector<Query> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    std::istringstream tokens{std::string(line)};
    std::string token;
    Query q;
    q.line = line_no;
    tokens >> token;
    bool pending = false;
    if (token.find(':') == std::string::npos) {
      q.y = parse_label(token, line_no);
    } else {
      pending = true;
    }
    bool any_nonzero = false;
    while (pending || tokens >> token) {
      pending = false;
      const Feature f = parse_feature(token, line_no);
      if (!q.x.empty() && f.index <= q.x.back().index) {
        throw DataError("feature indices must be strictly increasing", line_no);
      }
      any_nonzero = any_nonzero || f.value != 0.0;
      q.x.push_back(f);
    }
    if (q.x.empty()) throw DataError("example has no features", line_no);
    if (!any_nonzero) throw DataError("example has only zero features", line_no);
    out.push_back(std::move(q));
  }
  return out;
}

Dataset parse_libsvm(std::istream& in) {
  Dataset data;
  for (Query& q : parse_queries(in)) {
    if (!q.y) throw DataError("missing label", q.line);
    data.dim = std::max<std::size_t>(data.dim, q.x.back().index);
    data.examples.push_back(TrainingExample{std::move(q.x), *q.y});
  }
  return data;
}

Dataset parse_libsvm(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_libsvm(in);
}

namespace {

template <typename Parse>
auto load_text(const std::filesystem::path& path, Parse parse) {
  if (!std::filesystem::exists(path)) throw DataError("no such file: " + path.string());
  if (path.extension() == ".gz") {
    std::istringstream in(read_gzip(path));
    return parse(in);
  }
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse(in);
}

}  // namespace

Dataset load_libsvm(const std::filesystem::path& path) {
  return load_text(path, [](std::istream& in) { return parse_libsvm(in); });
}

std::vector<Query> load_queries(const std::filesystem::path& path) {
  return load_text(path, [](std::istream& in) { return parse_queries(in); });
}

void write_libsvm(std::ostream& out, const Dataset& data) {
  for (const TrainingExample& ex : data.examples) {
    out << (ex.y == Label::kPositive ? "+1" : "-1");
    for (const Feature& f : ex.x) out << ' ' << f.index << ':' << format_double(f.value);
    out << '\n';
  }
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data, std::size_t count) {
  count = std::min(count, data.size());
  Dataset head{{data.examples.begin(), data.examples.begin() + static_cast<std::ptrdiff_t>(count)},
               data.dim};
  Dataset tail{{data.examples.begin() + static_cast<std::ptrdiff_t>(count), data.examples.end()},
               data.dim};
  return {std::move(head), std::move(tail)};
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  // Reject draws from the incomplete final block of size 2^64 mod bound.
  const std::uint64_t slop = (0 - bound) % bound;
  std::uint64_t x = rng();
  while (x > ~std::uint64_t{0} - slop) x = rng();
  return x % bound;
}

double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double standard_normal(Rng& rng) {
  const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  const double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

std::vector<TrainingExample> shuffled(const Dataset& data, std::uint64_t seed) {
  std::vector<TrainingExample> out;
  out.reserve(data.size());
  for (std::size_t i : shuffled_order(data.size(), seed)) out.push_back(data.examples[i]);
  return out;
}

namespace {

std::vector<double> unit_gaussian_direction(Rng& rng, std::size_t dim) {
  std::vector<double> v(dim);
  for (;;) {
    double norm2 = 0.0;
    for (double& x : v) {
      x = standard_normal(rng);
      norm2 += x * x;
    }
    if (norm2 > 0.0) {
      const double norm = std::sqrt(norm2);
      for (double& x : v) x /= norm;
      return v;
    }
  }
}

}  // namespace

std::vector<double> synthetic_normal(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  return unit_gaussian_direction(rng, dim);
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.dim < 2) throw std::invalid_argument("synthetic: dim must be at least 2");
  if (!(spec.margin >= 0.0 && spec.margin < 1.0)) {
    throw std::invalid_argument("synthetic: margin must lie in [0, 1)");
  }
  if (!(spec.noise >= 0.0 && spec.noise <= 1.0)) {
    throw std::invalid_argument("synthetic: noise must lie in [0, 1]");
  }

  Rng rng(spec.seed);
  const std::vector<double> normal = unit_gaussian_direction(rng, spec.dim);

  Dataset data;
  data.examples.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    std::vector<double> x;
    double side = 0.0;
    do {
      x = unit_gaussian_direction(rng, spec.dim);
      side = 0.0;
      for (std::size_t k = 0; k < spec.dim; ++k) side += normal[k] * x[k];
    } while (std::abs(side) < spec.margin);

    TrainingExample ex;
    ex.y = side < 0.0 ? Label::kNegative : Label::kPositive;
    if (uniform_unit(rng) < spec.noise) ex.y = flipped(ex.y);
    for (std::size_t k = 0; k < spec.dim; ++k) {
      if (x[k] != 0.0) ex.x.push_back(Feature{static_cast<std::uint32_t>(k + 1), x[k]});
    }
    data.examples.push_back(std::move(ex));
  }
  data.dim = spec.n == 0 ? 0 : spec.dim;
  return data;
}

}  // namespace bbsvm
