#pragma once

// Rule-based contextual shaping for the 32-letter Persian alphabet. This is
// the ground truth the HMM is trained on and scored against.

#include <array>
#include <compare>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shapehmm/hmm.hpp"

namespace shapehmm {

enum class PresentationForm { Isolated, Initial, Medial, Final };

enum class JoiningClass { DualJoining, RightJoining, NonJoining };

inline constexpr std::array<PresentationForm, 4> kAllForms = {PresentationForm::Isolated, PresentationForm::Initial,
                                                              PresentationForm::Medial, PresentationForm::Final};

/// "ISO", "INI", "MED", "FIN".
std::string_view form_tag(PresentationForm form) noexcept;
std::optional<PresentationForm> parse_form_tag(std::string_view tag) noexcept;

/// "D", "R", "U" (the Unicode joining-type letters).
std::string_view joining_tag(JoiningClass cls) noexcept;
std::optional<JoiningClass> parse_joining_tag(std::string_view tag) noexcept;

bool form_allowed(JoiningClass cls, PresentationForm form) noexcept;

struct Letter {
  char32_t codepoint;
  std::string name;
  JoiningClass joining;
  /// Indexed by PresentationForm; empty where the joining class forbids the form.
  std::array<std::optional<char32_t>, 4> forms;

  friend bool operator==(const Letter&, const Letter&) = default;
};

/// The alphabet in conventional Persian order.
const std::vector<Letter>& farsi_alphabet();

const Letter* find_letter(char32_t cp) noexcept;
bool is_alphabet_letter(char32_t cp) noexcept;

/// Throws Error(UnknownLetter) outside the alphabet.
JoiningClass joining_class(char32_t cp);

struct ShapeState {
  char32_t letter;
  PresentationForm form;

  friend bool operator==(const ShapeState&, const ShapeState&) = default;
  friend auto operator<=>(const ShapeState&, const ShapeState&) = default;
};

/// Standard cursive joining. A letter joins its predecessor when the
/// predecessor is dual-joining, and joins its successor when it is itself
/// dual-joining and a successor exists. Throws UnknownLetter / EmptySequence.
std::vector<ShapeState> shape_word(std::u32string_view word);

/// Presentation-form code point for a state (Forms-A for the Persian-specific
/// letters, Forms-B for the rest).
char32_t to_presentation_codepoint(ShapeState state);

std::u32string strip_forms(std::span<const ShapeState> states);

/// Every (letter, form) pair admitted by the joining classes.
std::vector<ShapeState> all_shape_states();

/// Separator between the letter and the form tag in a state token (U+2011).
inline constexpr std::u32string_view kStateTokenSeparator = U"‑";

/// The blank word-boundary token, used both as a symbol and as a state.
inline constexpr std::string_view kBlankToken = " ";

/// "ش‑INI": letter, non-breaking hyphen, form tag.
StateId to_state_id(ShapeState state);
Symbol to_symbol(char32_t letter);

/// Accepts U+2011 or an ASCII hyphen as the separator. Returns nullopt for
/// tokens that do not name an admissible (letter, form) pair.
std::optional<ShapeState> parse_state_id(const StateId& id);

/// (word letters, oracle states) as HMM tokens.
TrainingPair make_training_pair(std::u32string_view word);

/// Reads the tab-separated alphabet table shipped in data/. Columns:
/// letter, codepoint, name, joining, isolated, initial, medial, final; absent
/// forms are "-". Lines starting with '#' are comments.
std::vector<Letter> read_alphabet_table(std::istream& in);

}  // namespace shapehmm
