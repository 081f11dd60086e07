#include "doctest.h"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "bbsvm/data.hpp"

using namespace bbsvm;

namespace {

std::string to_text(const Dataset& data) {
  std::ostringstream out;
  write_libsvm(out, data);
  return out.str();
}

std::size_t error_line(std::string_view text) {
  try {
    parse_libsvm(text);
  } catch (const DataError& e) {
    return e.line();
  }
  return 0;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("bbsvm_test_data_" + name);
}

}  // namespace

TEST_CASE("parse_libsvm") {
  SUBCASE("basic line") {
    const Dataset d = parse_libsvm("+1 1:0.5 3:2.0\n");
    REQUIRE(d.size() == 1);
    CHECK(d.examples[0].y == Label::kPositive);
    CHECK(d.examples[0].x == SparseVector{{1, 0.5}, {3, 2.0}});
    CHECK(d.dim == 3);
  }
  SUBCASE("label conventions") {
    const Dataset d = parse_libsvm("0 2:1\n1 1:1\n-1 4:1\n");
    REQUIRE(d.size() == 3);
    CHECK(d.examples[0].y == Label::kNegative);
    CHECK(d.examples[1].y == Label::kPositive);
    CHECK(d.examples[2].y == Label::kNegative);
    CHECK(d.dim == 4);
  }
  SUBCASE("comments and blank lines") {
    const Dataset d = parse_libsvm("# header\n\n+1 1:1 # trailing\n   \n-1 2:3\r\n");
    REQUIRE(d.size() == 2);
    CHECK(d.examples[1].x == SparseVector{{2, 3.0}});
  }
  SUBCASE("empty input") { CHECK(parse_libsvm("").empty()); }
  SUBCASE("errors report the line") {
    CHECK(error_line("abc 1:1") == 1);
    CHECK(error_line("+1 1:1\n2 1:1\n") == 2);
    CHECK(error_line("+1 1:1\n\n+1 2:1 2:3\n") == 3);
    CHECK(error_line("+1 3:1 2:1") == 1);
    CHECK(error_line("+1") == 1);
    CHECK(error_line("+1 1:0 2:0") == 1);
    CHECK(error_line("+1 0:1") == 1);
    CHECK(error_line("+1 x:1") == 1);
    CHECK(error_line("+1 1:y") == 1);
    CHECK(error_line("+1 1") == 1);
    CHECK(error_line("1:1 2:1") == 1);
  }
  SUBCASE("unlabelled lines are accepted as queries") {
    const auto q = parse_queries(*std::make_unique<std::istringstream>("1:1 2:1\n-1 3:1\n"));
    REQUIRE(q.size() == 2);
    CHECK_FALSE(q[0].y.has_value());
    CHECK(q[0].x.size() == 2);
    CHECK(q[1].y == Label::kNegative);
  }
}

TEST_CASE("text round trip") {
  std::mt19937_64 rng(314);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::exponential_distribution<double> tiny(1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Dataset d;
    const std::size_t n = rng() % 20;
    for (std::size_t i = 0; i < n; ++i) {
      TrainingExample ex;
      ex.y = rng() % 2 ? Label::kPositive : Label::kNegative;
      std::uint32_t index = 0;
      const std::size_t nnz = 1 + rng() % 8;
      for (std::size_t k = 0; k < nnz; ++k) {
        index += 1 + static_cast<std::uint32_t>(rng() % 5);
        const double v = k % 3 == 0 ? u(rng) : tiny(rng) * 1e-200 + u(rng) * 1e-7;
        ex.x.push_back({index, v == 0.0 ? 1.0 : v});
      }
      d.dim = std::max<std::size_t>(d.dim, index);
      d.examples.push_back(std::move(ex));
    }
    const std::string text = to_text(d);
    const Dataset back = parse_libsvm(text);
    CHECK(back.examples == d.examples);
    CHECK(back.dim == d.dim);
    CHECK(to_text(back) == text);
  }
}

TEST_CASE("gzip input") {
  const std::string text = "+1 1:0.25 2:1\n-1 2:4\n";
  const auto gz = temp_file("in.txt.gz");
  {
    gzFile f = gzopen(gz.c_str(), "wb");
    REQUIRE(f != nullptr);
    gzwrite(f, text.data(), static_cast<unsigned>(text.size()));
    gzclose(f);
  }
  const auto plain = temp_file("in.txt");
  std::ofstream(plain) << text;

  const Dataset a = load_libsvm(gz);
  const Dataset b = load_libsvm(plain);
  CHECK(a.examples == b.examples);
  CHECK(a.size() == 2);
  CHECK_THROWS_AS(load_libsvm(temp_file("missing.txt")), DataError);
  std::filesystem::remove(gz);
  std::filesystem::remove(plain);
}

TEST_CASE("generate_synthetic") {
  SUBCASE("empty") { CHECK(generate_synthetic({.n = 0, .dim = 3}).empty()); }
  SUBCASE("same seed, same bytes") {
    const SyntheticSpec spec{.n = 200, .dim = 7, .margin = 0.1, .noise = 0.2, .seed = 42};
    CHECK(to_text(generate_synthetic(spec)) == to_text(generate_synthetic(spec)));
    SyntheticSpec other = spec;
    other.seed = 43;
    CHECK(to_text(generate_synthetic(spec)) != to_text(generate_synthetic(other)));
  }
  SUBCASE("noise-free labels follow the normal, with the requested margin") {
    const SyntheticSpec spec{.n = 2000, .dim = 12, .margin = 0.2, .noise = 0.0, .seed = 9};
    const auto u = synthetic_normal(spec.dim, spec.seed);
    double un = 0.0;
    for (double v : u) un += v * v;
    CHECK(std::sqrt(un) == doctest::Approx(1.0));
    const Dataset d = generate_synthetic(spec);
    REQUIRE(d.size() == spec.n);
    CHECK(d.dim == spec.dim);
    for (const auto& ex : d.examples) {
      double side = 0.0, norm2 = 0.0;
      for (const Feature& f : ex.x) {
        side += u[f.index - 1] * f.value;
        norm2 += f.value * f.value;
      }
      CHECK(std::sqrt(norm2) == doctest::Approx(1.0));
      CHECK(std::abs(side) >= spec.margin);
      CHECK(ex.y == (side >= 0.0 ? Label::kPositive : Label::kNegative));
    }
  }
  SUBCASE("noise rate") {
    const SyntheticSpec spec{.n = 4000, .dim = 5, .margin = 0.0, .noise = 0.25, .seed = 3};
    const auto u = synthetic_normal(spec.dim, spec.seed);
    std::size_t flipped_count = 0;
    for (const auto& ex : generate_synthetic(spec).examples) {
      double side = 0.0;
      for (const Feature& f : ex.x) side += u[f.index - 1] * f.value;
      flipped_count += ex.y != (side >= 0.0 ? Label::kPositive : Label::kNegative);
    }
    CHECK(flipped_count > 850);
    CHECK(flipped_count < 1150);
    SyntheticSpec all = spec;
    all.noise = 1.0;
    for (const auto& ex : generate_synthetic(all).examples) {
      double side = 0.0;
      for (const Feature& f : ex.x) side += u[f.index - 1] * f.value;
      CHECK(ex.y == (side >= 0.0 ? Label::kNegative : Label::kPositive));
    }
  }
  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(generate_synthetic({.n = 1, .dim = 1}), std::invalid_argument);
    CHECK_THROWS_AS(generate_synthetic({.n = 1, .dim = 3, .margin = 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(generate_synthetic({.n = 1, .dim = 3, .margin = -0.1}), std::invalid_argument);
    CHECK_THROWS_AS(generate_synthetic({.n = 1, .dim = 3, .noise = 1.5}), std::invalid_argument);
  }
}

TEST_CASE("shuffling") {
  SUBCASE("generator is the standard 64-bit Mersenne Twister") {
    Rng rng;
    rng.discard(9999);
    CHECK(rng() == 9981545732273789042ULL);
  }
  SUBCASE("pinned orders") {
    // Computed with an independent MT19937-64 + Fisher-Yates implementation.
    CHECK(shuffled_order(20, 1) == std::vector<std::size_t>{7, 10, 17, 1, 14, 2, 18, 11, 5, 13,
                                                            12, 16, 4, 6, 9, 19, 15, 0, 3, 8});
    CHECK(shuffled_order(20, 2) == std::vector<std::size_t>{7, 10, 17, 19, 3, 2, 14, 0, 9, 13,
                                                            15, 6, 4, 11, 5, 16, 12, 18, 1, 8});
    CHECK(shuffled_order(7, 12345) == std::vector<std::size_t>{4, 1, 6, 2, 0, 5, 3});
  }
  SUBCASE("singleton and empty") {
    CHECK(shuffled_order(1, 77) == std::vector<std::size_t>{0});
    CHECK(shuffled_order(0, 77).empty());
    const Dataset one = parse_libsvm("+1 1:1\n");
    CHECK(shuffled(one, 5) == one.examples);
  }
  SUBCASE("permutation, seed-determined") {
    CHECK(shuffled_order(100, 10) == shuffled_order(100, 10));
    CHECK(shuffled_order(100, 10) != shuffled_order(100, 11));
    auto order = shuffled_order(1000, 6);
    std::sort(order.begin(), order.end());
    for (std::size_t i = 0; i < order.size(); ++i) CHECK(order[i] == i);
  }
  SUBCASE("uniform_below stays in range") {
    Rng rng(1);
    for (std::uint64_t bound : {1ULL, 2ULL, 3ULL, 1000ULL, (1ULL << 63) + 5}) {
      for (int i = 0; i < 100; ++i) CHECK(uniform_below(rng, bound) < bound);
    }
  }
}
