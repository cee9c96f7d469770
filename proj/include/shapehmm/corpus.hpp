#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "shapehmm/hmm.hpp"

namespace shapehmm {

struct FrequencyEntry {
  std::u32string word;
  std::uint64_t count;

  friend bool operator==(const FrequencyEntry&, const FrequencyEntry&) = default;
};

struct FrequencyList {
  /// Sorted by descending count; equal counts keep file order.
  std::vector<FrequencyEntry> entries;
  /// Lines whose word contained a scalar outside the alphabet.
  std::size_t dropped = 0;
};

/// Reads "word<TAB>count" lines (UTF-8, LF or CRLF). Blank lines are skipped.
/// Throws MalformedLine (with line number) for missing/invalid counts or
/// duplicate words, and EmptyList when no word survives filtering.
FrequencyList load_frequency_list(std::istream& in);
FrequencyList load_frequency_list(const std::filesystem::path& path);

/// One pair per line: `sym (" " sym)* " | " st (" " st)*`, LF endings.
void write_training_file(std::span<const TrainingPair> pairs, std::ostream& out);
void write_training_file(std::span<const TrainingPair> pairs, const std::filesystem::path& path);

/// Inverse of write_training_file. A side consisting of a single blank is the
/// blank token. Throws MalformedLine or LengthMismatch with the line number.
std::vector<TrainingPair> parse_training_file(std::istream& in);
std::vector<TrainingPair> parse_training_file(const std::filesystem::path& path);

/// The blank seed pair ([" "], [" "]).
TrainingPair blank_pair();
bool is_blank_pair(const TrainingPair& pair);

inline constexpr std::size_t kDefaultTrainWords = 89;
inline constexpr std::size_t kDefaultTestWords = 32;

struct CorpusSplit {
  std::vector<std::u32string> train;
  std::vector<std::u32string> test;
};

/// Train is the `n_train` most frequent words; test is `n_test` words drawn
/// uniformly without replacement from the rest with a seeded mt19937_64.
/// Throws InsufficientWords.
CorpusSplit split(const FrequencyList& list, std::size_t n_train, std::size_t n_test, std::uint64_t seed);

}  // namespace shapehmm
