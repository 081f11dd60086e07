#pragma once

#include <filesystem>
#include <iosfwd>

#include "bbsvm/model.hpp"

namespace bbsvm {

/// Line-oriented text model file, version 1:
///
///   BBSVM 1
///   kappa <f>
///   epsilon <f>
///   C <f|inf>
///   dim <d>
///   balls <k>
///   then per ball:
///     ball <radius>
///     center <d+1 floats>
///     slack <m>       followed by m lines `<id> <coefficient>`
///     core <s>        followed by s lines `<id> <label> <d+1 floats> <slack_weight>`
///
/// Floats use the shortest round-trip decimal form. Member labels are
/// `+1`, `-1`, or `0` when unknown.
inline constexpr int kModelFormatVersion = 1;

void save_model(std::ostream& out, const Model& model);
void save_model(const std::filesystem::path& path, const Model& model);

/// Throws DataError (with line number) on a malformed file or a version
/// other than kModelFormatVersion. Lookahead and delta take their defaults.
Model load_model(std::istream& in);
Model load_model(const std::filesystem::path& path);

}  // namespace bbsvm
