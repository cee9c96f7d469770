#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "shapehmm/hmm.hpp"

namespace shapehmm {

struct UnseenFlags {
  bool emission = false;
  bool transition = false;

  bool any() const noexcept { return emission || transition; }
  friend bool operator==(const UnseenFlags&, const UnseenFlags&) = default;
};

/// Whether the gold labelling at `position` relies on combinations absent from
/// training: the (gold state, symbol) emission, and the (previous gold state,
/// gold state) transition. At position 0 the transition flag refers to the
/// gold state never having started a word.
UnseenFlags flag_unseen(const ModelBuilder& counts, const TrainingPair& gold, std::size_t position);
/// Same, from the counts a model was finalized with. All flags are false when
/// the model carries no counts.
UnseenFlags flag_unseen(const Model& model, const TrainingPair& gold, std::size_t position);

struct WordResult {
  std::string word;
  std::vector<StateId> predicted;
  std::vector<StateId> gold;
  std::vector<bool> correct;
  std::vector<UnseenFlags> flags;
};

struct ErrorDiagnostic {
  std::string word;
  std::size_t position = 0;
  StateId gold;
  StateId predicted;
  bool unseen_emission = false;
  bool unseen_transition = false;

  friend bool operator==(const ErrorDiagnostic&, const ErrorDiagnostic&) = default;
};

struct EvalReport {
  std::size_t total_chars = 0;
  std::size_t correct_chars = 0;
  double accuracy = 0.0;
  std::vector<WordResult> words;
  std::vector<ErrorDiagnostic> errors;
  bool counts_available = false;

  std::size_t errors_with_unseen = 0;
  std::size_t correct_with_unseen = 0;

  /// Share of error positions with an unseen flag (0 when there are none).
  double unseen_rate_among_errors() const noexcept;
  /// Share of correct positions with an unseen flag (0 when there are none).
  double unseen_rate_among_correct() const noexcept;
};

/// Decodes every test word with the boundary-aware decoder and compares it
/// position by position with the gold states. The blank seed pair is skipped.
/// Throws EmptyTestSet and LengthMismatch.
EvalReport evaluate(const Model& model, std::span<const TrainingPair> test_pairs);

enum class ReportFormat { Text, Delimited };

void render_report(const EvalReport& report, std::ostream& out, ReportFormat format);

/// Parses the delimited format back into diagnostics.
std::vector<ErrorDiagnostic> parse_delimited_report(std::istream& in);

}  // namespace shapehmm
