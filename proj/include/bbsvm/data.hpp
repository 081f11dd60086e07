#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "bbsvm/example.hpp"

namespace bbsvm {

struct Dataset {
  std::vector<TrainingExample> examples;
  /// Largest feature index present (0 for an empty set).
  std::size_t dim = 0;

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
};

/// Reads `<label> <idx>:<val> ...` lines. Labels +1/1 map to +1, -1 and 0
/// map to -1. Indices are 1-based and strictly increasing; `#` starts a
/// comment. Throws DataError with the offending line number.
Dataset parse_libsvm(std::istream& in);
Dataset parse_libsvm(std::string_view text);

/// Loads a LIBSVM file; names ending in `.gz` are decompressed.
Dataset load_libsvm(const std::filesystem::path& path);

/// A line of a file to classify; the label is optional (a line whose first
/// token is `idx:val` has none).
struct Query {
  SparseVector x;
  std::optional<Label> y;
  std::size_t line = 0;
};

std::vector<Query> parse_queries(std::istream& in);
std::vector<Query> load_queries(const std::filesystem::path& path);

/// Canonical text form: `+1`/`-1` labels and shortest round-trip floats.
void write_libsvm(std::ostream& out, const Dataset& data);

/// First `count` examples and the rest, dims kept.
std::pair<Dataset, Dataset> split_dataset(const Dataset& data, std::size_t count);

/// The generator behind shuffling and synthesis: 64-bit Mersenne Twister
/// (std::mt19937_64, standard seeding from a single 64-bit seed).
using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) from raw 64-bit draws with rejection of
/// the top partial range; bound must be positive.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform_unit(Rng& rng);

/// Standard normal via Box-Muller (cosine branch, two draws per sample).
double standard_normal(Rng& rng);

/// Permutation of 0..n-1 by Fisher-Yates: for i = n-1 down to 1, swap i
/// with uniform_below(rng, i + 1), rng = Rng(seed).
std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t seed);

/// Examples of `data` in shuffled_order(data.size(), seed).
std::vector<TrainingExample> shuffled(const Dataset& data, std::uint64_t seed);

struct SyntheticSpec {
  std::size_t n = 0;
  std::size_t dim = 2;
  double margin = 0.0;
  double noise = 0.0;
  std::uint64_t seed = 0;
};

/// The unit normal used by generate_synthetic for this dim and seed.
std::vector<double> synthetic_normal(std::size_t dim, std::uint64_t seed);

/// n points uniform on the unit sphere with |u . x| >= margin (rejection),
/// labelled sgn(u . x) and flipped with probability `noise`. Throws
/// std::invalid_argument for out-of-range parameters.
Dataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace bbsvm
