#include "shapehmm/eval.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

#include "shapehmm/corpus.hpp"
#include "shapehmm/error.hpp"
#include "shapehmm/pipeline.hpp"

namespace shapehmm {

namespace {

template <typename Lookup>
UnseenFlags flags_from(const Lookup& lookup, const TrainingPair& gold, std::size_t position) {
  UnseenFlags flags;
  const auto& state = gold.states[position];
  flags.emission = lookup.emission(state, gold.symbols[position]) == 0;
  flags.transition =
      position == 0 ? lookup.initial(state) == 0 : lookup.transition(gold.states[position - 1], state) == 0;
  return flags;
}

struct BuilderLookup {
  const ModelBuilder& b;
  Count emission(const StateId& s, const Symbol& w) const { return b.emission_count(s, w); }
  Count initial(const StateId& s) const { return b.initial_count(s); }
  Count transition(const StateId& p, const StateId& s) const { return b.transition_count(p, s); }
};

struct ModelLookup {
  const Model& m;
  const TrainingCounts& c;
  Count emission(const StateId& s, const Symbol& w) const {
    auto i = m.state_index(s);
    auto j = m.symbol_index(w);
    return i && j ? c.emission(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(*j)) : 0;
  }
  Count initial(const StateId& s) const {
    auto i = m.state_index(s);
    return i ? c.initial(static_cast<Eigen::Index>(*i)) : 0;
  }
  Count transition(const StateId& p, const StateId& s) const {
    auto i = m.state_index(p);
    auto j = m.state_index(s);
    return i && j ? c.transition(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(*j)) : 0;
  }
};

void check_position(const TrainingPair& gold, std::size_t position) {
  if (gold.symbols.size() != gold.states.size())
    throw Error(Errc::LengthMismatch, "gold pair has unequal symbol and state counts");
  if (position >= gold.states.size()) throw Error(Errc::EmptySequence, "position outside the word");
}

std::string join_tokens(const std::vector<Symbol>& symbols) {
  std::string out;
  for (const auto& s : symbols) out += s.token;
  return out;
}

std::string join_states(const std::vector<StateId>& states) {
  std::string out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i) out += ' ';
    out += states[i].token;
  }
  return out;
}

std::string fixed4(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

UnseenFlags flag_unseen(const ModelBuilder& counts, const TrainingPair& gold, std::size_t position) {
  check_position(gold, position);
  return flags_from(BuilderLookup{counts}, gold, position);
}

UnseenFlags flag_unseen(const Model& model, const TrainingPair& gold, std::size_t position) {
  check_position(gold, position);
  if (!model.counts()) return {};
  return flags_from(ModelLookup{model, *model.counts()}, gold, position);
}

double EvalReport::unseen_rate_among_errors() const noexcept {
  return ratio(errors_with_unseen, total_chars - correct_chars);
}

double EvalReport::unseen_rate_among_correct() const noexcept { return ratio(correct_with_unseen, correct_chars); }

EvalReport evaluate(const Model& model, std::span<const TrainingPair> test_pairs) {
  EvalReport report;
  report.counts_available = model.counts().has_value();
  for (const auto& pair : test_pairs) {
    if (is_blank_pair(pair)) continue;
    if (pair.symbols.size() != pair.states.size())
      throw Error(Errc::LengthMismatch, "test pair has unequal symbol and state counts");
    if (pair.symbols.empty()) throw Error(Errc::EmptySequence, "empty test word");

    const auto decoded = decode_word(model, pair.symbols);
    WordResult word{join_tokens(pair.symbols), decoded.states, pair.states, {}, {}};
    for (std::size_t t = 0; t < pair.states.size(); ++t) {
      const bool ok = decoded.states[t] == pair.states[t];
      const UnseenFlags flags = flag_unseen(model, pair, t);
      word.correct.push_back(ok);
      word.flags.push_back(flags);
      ++report.total_chars;
      if (ok) {
        ++report.correct_chars;
        if (flags.any()) ++report.correct_with_unseen;
      } else {
        if (flags.any()) ++report.errors_with_unseen;
        report.errors.push_back({word.word, t, pair.states[t], decoded.states[t], flags.emission, flags.transition});
      }
    }
    report.words.push_back(std::move(word));
  }
  if (report.words.empty()) throw Error(Errc::EmptyTestSet, "no test words to evaluate");
  report.accuracy = static_cast<double>(report.correct_chars) / static_cast<double>(report.total_chars);
  return report;
}

void render_report(const EvalReport& report, std::ostream& out, ReportFormat format) {
  if (format == ReportFormat::Delimited) {
    for (const auto& e : report.errors)
      out << e.word << '\t' << e.position << '\t' << e.gold.token << '\t' << e.predicted.token << '\t'
          << (e.unseen_emission ? 1 : 0) << '\t' << (e.unseen_transition ? 1 : 0) << '\n';
    return;
  }

  const std::size_t n_errors = report.total_chars - report.correct_chars;
  out << "words: " << report.words.size() << '\n';
  out << "characters: " << report.total_chars << '\n';
  out << "correct: " << report.correct_chars << '\n';
  out << "accuracy: " << fixed4(report.accuracy) << '\n';
  if (report.counts_available) {
    out << "errors with unseen combination: " << report.errors_with_unseen << '/' << n_errors << " ("
        << fixed4(report.unseen_rate_among_errors()) << ")\n";
    out << "correct with unseen combination: " << report.correct_with_unseen << '/' << report.correct_chars << " ("
        << fixed4(report.unseen_rate_among_correct()) << ")\n";
  } else {
    out << "unseen-combination analysis: unavailable (model has no training counts)\n";
  }

  out << "\nwords:\n";
  for (const auto& w : report.words) {
    std::size_t wrong = 0;
    for (bool ok : w.correct) wrong += ok ? 0 : 1;
    out << w.word << '\t' << (wrong == 0 ? "ok" : std::to_string(wrong) + " wrong") << '\t' << join_states(w.predicted);
    if (wrong) out << "\t(gold: " << join_states(w.gold) << ')';
    out << '\n';
  }

  out << "\ndiagnostics:\n";
  if (!report.errors.empty()) {
    out << "word\tpos\tgold\tpredicted\tunseen_emission\tunseen_transition\n";
    for (const auto& e : report.errors)
      out << e.word << '\t' << e.position << '\t' << e.gold.token << '\t' << e.predicted.token << '\t'
          << (e.unseen_emission ? "yes" : "no") << '\t' << (e.unseen_transition ? "yes" : "no") << '\n';
  }
}

std::vector<ErrorDiagnostic> parse_delimited_report(std::istream& in) {
  std::vector<ErrorDiagnostic> out;
  std::string line;
  std::size_t line_no = 0;
  auto flag = [&line_no](const std::string& f) {
    if (f == "0") return false;
    if (f == "1") return true;
    throw Error(Errc::MalformedLine, "flag must be 0 or 1, found '" + f + "'", line_no);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 6) throw Error(Errc::MalformedLine, "expected 6 tab-separated fields", line_no);
    ErrorDiagnostic d;
    d.word = cols[0];
    try {
      d.position = std::stoul(cols[1]);
    } catch (const std::exception&) {
      throw Error(Errc::MalformedLine, "bad position '" + cols[1] + "'", line_no);
    }
    d.gold = StateId{cols[2]};
    d.predicted = StateId{cols[3]};
    d.unseen_emission = flag(cols[4]);
    d.unseen_transition = flag(cols[5]);
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace shapehmm
