#include "shapehmm/shaping.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <sstream>

#include "shapehmm/error.hpp"
#include "shapehmm/utf8.hpp"

namespace shapehmm {

namespace {

constexpr std::optional<char32_t> kNone = std::nullopt;
constexpr JoiningClass D = JoiningClass::DualJoining;
constexpr JoiningClass R = JoiningClass::RightJoining;

// Forms are listed as {isolated, initial, medial, final}.
std::vector<Letter> build_alphabet() {
  return {
      {0x0627, "alef", R, {0xFE8D, kNone, kNone, 0xFE8E}},
      {0x0628, "be", D, {0xFE8F, 0xFE91, 0xFE92, 0xFE90}},
      {0x067E, "pe", D, {0xFB56, 0xFB58, 0xFB59, 0xFB57}},
      {0x062A, "te", D, {0xFE95, 0xFE97, 0xFE98, 0xFE96}},
      {0x062B, "se", D, {0xFE99, 0xFE9B, 0xFE9C, 0xFE9A}},
      {0x062C, "jim", D, {0xFE9D, 0xFE9F, 0xFEA0, 0xFE9E}},
      {0x0686, "che", D, {0xFB7A, 0xFB7C, 0xFB7D, 0xFB7B}},
      {0x062D, "he-jimi", D, {0xFEA1, 0xFEA3, 0xFEA4, 0xFEA2}},
      {0x062E, "khe", D, {0xFEA5, 0xFEA7, 0xFEA8, 0xFEA6}},
      {0x062F, "dal", R, {0xFEA9, kNone, kNone, 0xFEAA}},
      {0x0630, "zal", R, {0xFEAB, kNone, kNone, 0xFEAC}},
      {0x0631, "re", R, {0xFEAD, kNone, kNone, 0xFEAE}},
      {0x0632, "ze", R, {0xFEAF, kNone, kNone, 0xFEB0}},
      {0x0698, "zhe", R, {0xFB8A, kNone, kNone, 0xFB8B}},
      {0x0633, "sin", D, {0xFEB1, 0xFEB3, 0xFEB4, 0xFEB2}},
      {0x0634, "shin", D, {0xFEB5, 0xFEB7, 0xFEB8, 0xFEB6}},
      {0x0635, "sad", D, {0xFEB9, 0xFEBB, 0xFEBC, 0xFEBA}},
      {0x0636, "zad", D, {0xFEBD, 0xFEBF, 0xFEC0, 0xFEBE}},
      {0x0637, "ta", D, {0xFEC1, 0xFEC3, 0xFEC4, 0xFEC2}},
      {0x0638, "za", D, {0xFEC5, 0xFEC7, 0xFEC8, 0xFEC6}},
      {0x0639, "eyn", D, {0xFEC9, 0xFECB, 0xFECC, 0xFECA}},
      {0x063A, "gheyn", D, {0xFECD, 0xFECF, 0xFED0, 0xFECE}},
      {0x0641, "fe", D, {0xFED1, 0xFED3, 0xFED4, 0xFED2}},
      {0x0642, "qaf", D, {0xFED5, 0xFED7, 0xFED8, 0xFED6}},
      {0x06A9, "kaf", D, {0xFB8E, 0xFB90, 0xFB91, 0xFB8F}},
      {0x06AF, "gaf", D, {0xFB92, 0xFB94, 0xFB95, 0xFB93}},
      {0x0644, "lam", D, {0xFEDD, 0xFEDF, 0xFEE0, 0xFEDE}},
      {0x0645, "mim", D, {0xFEE1, 0xFEE3, 0xFEE4, 0xFEE2}},
      {0x0646, "nun", D, {0xFEE5, 0xFEE7, 0xFEE8, 0xFEE6}},
      {0x0648, "vav", R, {0xFEED, kNone, kNone, 0xFEEE}},
      {0x0647, "he", D, {0xFEE9, 0xFEEB, 0xFEEC, 0xFEEA}},
      {0x06CC, "ye", D, {0xFBFC, 0xFBFE, 0xFBFF, 0xFBFD}},
  };
}

std::string hex(char32_t cp) {
  std::ostringstream os;
  os << "U+" << std::uppercase << std::hex << static_cast<std::uint32_t>(cp);
  return os.str();
}

[[noreturn]] void unknown_letter(char32_t cp) {
  throw Error(Errc::UnknownLetter, hex(cp) + " is not a letter of the Persian alphabet");
}

}  // namespace

std::string_view form_tag(PresentationForm form) noexcept {
  switch (form) {
    case PresentationForm::Isolated: return "ISO";
    case PresentationForm::Initial: return "INI";
    case PresentationForm::Medial: return "MED";
    case PresentationForm::Final: return "FIN";
  }
  return "???";
}

std::optional<PresentationForm> parse_form_tag(std::string_view tag) noexcept {
  for (auto f : kAllForms)
    if (form_tag(f) == tag) return f;
  return std::nullopt;
}

std::string_view joining_tag(JoiningClass cls) noexcept {
  switch (cls) {
    case JoiningClass::DualJoining: return "D";
    case JoiningClass::RightJoining: return "R";
    case JoiningClass::NonJoining: return "U";
  }
  return "?";
}

std::optional<JoiningClass> parse_joining_tag(std::string_view tag) noexcept {
  for (auto c : {JoiningClass::DualJoining, JoiningClass::RightJoining, JoiningClass::NonJoining})
    if (joining_tag(c) == tag) return c;
  return std::nullopt;
}

bool form_allowed(JoiningClass cls, PresentationForm form) noexcept {
  switch (cls) {
    case JoiningClass::DualJoining: return true;
    case JoiningClass::RightJoining: return form == PresentationForm::Isolated || form == PresentationForm::Final;
    case JoiningClass::NonJoining: return form == PresentationForm::Isolated;
  }
  return false;
}

const std::vector<Letter>& farsi_alphabet() {
  static const std::vector<Letter> table = build_alphabet();
  return table;
}

const Letter* find_letter(char32_t cp) noexcept {
  const auto& table = farsi_alphabet();
  auto it = std::find_if(table.begin(), table.end(), [cp](const Letter& l) { return l.codepoint == cp; });
  return it == table.end() ? nullptr : &*it;
}

bool is_alphabet_letter(char32_t cp) noexcept { return find_letter(cp) != nullptr; }

JoiningClass joining_class(char32_t cp) {
  const Letter* l = find_letter(cp);
  if (!l) unknown_letter(cp);
  return l->joining;
}

std::vector<ShapeState> shape_word(std::u32string_view word) {
  if (word.empty()) throw Error(Errc::EmptySequence, "cannot shape an empty word");
  std::vector<JoiningClass> classes;
  classes.reserve(word.size());
  for (char32_t cp : word) classes.push_back(joining_class(cp));

  std::vector<ShapeState> out;
  out.reserve(word.size());
  for (std::size_t t = 0; t < word.size(); ++t) {
    const bool joins = classes[t] != JoiningClass::NonJoining;
    const bool prev = joins && t > 0 && classes[t - 1] == JoiningClass::DualJoining;
    const bool next = classes[t] == JoiningClass::DualJoining && t + 1 < word.size() &&
                      classes[t + 1] != JoiningClass::NonJoining;
    PresentationForm form = PresentationForm::Isolated;
    if (prev && next)
      form = PresentationForm::Medial;
    else if (prev)
      form = PresentationForm::Final;
    else if (next)
      form = PresentationForm::Initial;
    out.push_back({word[t], form});
  }
  return out;
}

char32_t to_presentation_codepoint(ShapeState state) {
  const Letter* l = find_letter(state.letter);
  if (!l) unknown_letter(state.letter);
  // Unreachable for well-formed states; fall back to the base letter.
  return l->forms[static_cast<std::size_t>(state.form)].value_or(state.letter);
}

std::u32string strip_forms(std::span<const ShapeState> states) {
  if (states.empty()) throw Error(Errc::EmptySequence, "cannot strip an empty state sequence");
  std::u32string out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.letter);
  return out;
}

std::vector<ShapeState> all_shape_states() {
  std::vector<ShapeState> out;
  for (const auto& l : farsi_alphabet())
    for (auto f : kAllForms)
      if (form_allowed(l.joining, f)) out.push_back({l.codepoint, f});
  return out;
}

StateId to_state_id(ShapeState state) {
  return StateId{utf8::encode(state.letter) + utf8::encode(kStateTokenSeparator) + std::string(form_tag(state.form))};
}

Symbol to_symbol(char32_t letter) { return Symbol{utf8::encode(letter)}; }

std::optional<ShapeState> parse_state_id(const StateId& id) {
  std::u32string cps;
  try {
    cps = utf8::decode(id.token);
  } catch (const Error&) {
    return std::nullopt;
  }
  if (cps.size() != 5) return std::nullopt;
  if (cps[1] != kStateTokenSeparator[0] && cps[1] != U'-') return std::nullopt;
  const Letter* l = find_letter(cps[0]);
  if (!l) return std::nullopt;
  const std::string tag = utf8::encode(std::u32string_view(cps).substr(2));
  auto form = parse_form_tag(tag);
  if (!form || !form_allowed(l->joining, *form)) return std::nullopt;
  return ShapeState{cps[0], *form};
}

TrainingPair make_training_pair(std::u32string_view word) {
  const auto shaped = shape_word(word);
  TrainingPair pair;
  pair.symbols.reserve(word.size());
  pair.states.reserve(word.size());
  for (std::size_t t = 0; t < word.size(); ++t) {
    pair.symbols.push_back(to_symbol(word[t]));
    pair.states.push_back(to_state_id(shaped[t]));
  }
  return pair;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

std::optional<char32_t> parse_codepoint(const std::string& field, std::size_t line_no) {
  if (field == "-") return std::nullopt;
  if (field.size() < 3 || field.compare(0, 2, "U+") != 0)
    throw Error(Errc::MalformedLine, "expected U+XXXX, found '" + field + "'", line_no);
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data() + 2, field.data() + field.size(), value, 16);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw Error(Errc::MalformedLine, "bad code point '" + field + "'", line_no);
  return static_cast<char32_t>(value);
}

}  // namespace

std::vector<Letter> read_alphabet_table(std::istream& in) {
  std::vector<Letter> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto cols = split_tabs(line);
    if (cols.size() != 8)
      throw Error(Errc::MalformedLine, "expected 8 tab-separated columns, found " + std::to_string(cols.size()),
                  line_no);
    const auto glyph = utf8::decode(cols[0]);
    const auto cp = parse_codepoint(cols[1], line_no);
    if (glyph.size() != 1 || !cp || glyph[0] != *cp)
      throw Error(Errc::MalformedLine, "letter column does not match its code point", line_no);
    const auto cls = parse_joining_tag(cols[3]);
    if (!cls) throw Error(Errc::MalformedLine, "unknown joining type '" + cols[3] + "'", line_no);
    Letter letter{*cp, cols[2], *cls, {}};
    for (std::size_t f = 0; f < 4; ++f) {
      letter.forms[f] = parse_codepoint(cols[4 + f], line_no);
      if (letter.forms[f].has_value() != form_allowed(*cls, kAllForms[f]))
        throw Error(Errc::MalformedLine,
                    std::string("form ") + std::string(form_tag(kAllForms[f])) + " disagrees with joining type",
                    line_no);
    }
    out.push_back(std::move(letter));
  }
  return out;
}

}  // namespace shapehmm
