#pragma once

#include <filesystem>
#include <iosfwd>

#include "shapehmm/hmm.hpp"

namespace shapehmm {

inline constexpr int kModelFormatVersion = 1;

/// JSON model file:
///   {"format_version": 1, "alpha": a, "states": [...], "vocab": [...],
///    "pi": [...], "a": [[...]], "b": [[...]], "b_unseen": [...],
///    "counts": {"initial": [...], "transition": [[...]], "emission": [[...]]}}
/// b is K x M; b_unseen carries each state's unseen-symbol mass. counts is
/// optional. Probabilities are written with round-trip precision, so
/// load_model(save_model(m)) reproduces every entry bit for bit.
void save_model(const Model& model, std::ostream& out);
void save_model(const Model& model, const std::filesystem::path& path);

/// Throws Error(MalformedModelFile) naming the offending field or parse offset.
Model load_model(std::istream& in);
Model load_model(const std::filesystem::path& path);

}  // namespace shapehmm
