#include <doctest.h>

#include <sstream>

#include "shapehmm/corpus.hpp"
#include "shapehmm/eval.hpp"
#include "shapehmm/pipeline.hpp"
#include "shapehmm/shaping.hpp"
#include "test_support.hpp"

using namespace shapehmm;

namespace {

std::vector<TrainingPair> pairs_of(std::initializer_list<std::u32string_view> words) {
  std::vector<TrainingPair> out;
  for (auto w : words) out.push_back(make_training_pair(w));
  return out;
}

Model train(const std::vector<TrainingPair>& pairs, double alpha) {
  ModelBuilder b;
  train_words(b, pairs);
  return finalize(b, alpha);
}

std::vector<TrainingPair> bundled_top(std::size_t n) {
  const auto list = load_frequency_list(test::data_dir() / "persian_words.tsv");
  std::vector<TrainingPair> out{blank_pair()};
  for (std::size_t i = 0; i < n; ++i) out.push_back(make_training_pair(list.entries[i].word));
  return out;
}

void check_invariants(const EvalReport& r) {
  CHECK(r.accuracy == static_cast<double>(r.correct_chars) / static_cast<double>(r.total_chars));
  CHECK(r.errors.size() == r.total_chars - r.correct_chars);
  CHECK((r.accuracy == 1.0) == r.errors.empty());
  std::size_t errors = 0;
  for (const auto& w : r.words)
    for (std::size_t t = 0; t < w.correct.size(); ++t)
      if (!w.correct[t]) {
        REQUIRE(errors < r.errors.size());
        CHECK(r.errors[errors].word == w.word);
        CHECK(r.errors[errors].position == t);
        ++errors;
      }
  CHECK(errors == r.errors.size());
}

}  // namespace

TEST_CASE("memorization at alpha 0") {
  const auto pairs = bundled_top(150);
  const Model m = train(pairs, 0.0);
  const EvalReport r = evaluate(m, pairs);
  CHECK(r.accuracy == 1.0);
  CHECK(r.errors.empty());
  check_invariants(r);
}

TEST_CASE("word ends are decided by the boundary") {
  // n after b is medial twice and final once in training; the bare word must
  // still end in a final form.
  const auto pairs = pairs_of({U"بن", U"بنا", U"بنی"});
  const Model m = train(pairs, 0.0);
  const auto decoded = decode_word(m, test::letters(U"بن"));
  CHECK(decoded.states == test::sts({"ب‑INI", "ن‑FIN"}));
  CHECK(evaluate(m, pairs).accuracy == 1.0);
}

TEST_CASE("single letters") {
  // A lone dual-joining letter that never started a word on its own costs one
  // unseen event either way (isolated at word start, or initial at word end),
  // so only letters with isolated word-initial evidence are pinned to ISO.
  ModelBuilder b;
  train_words(b, bundled_top(89));
  const Model m = finalize(b, 0.01);
  std::size_t pinned = 0;
  for (const auto& w : m.vocab()) {
    if (w.token == kBlankToken) continue;
    const auto d = decode_word(m, std::vector<Symbol>{w});
    const auto s = parse_state_id(d.states[0]);
    REQUIRE(s.has_value());
    CHECK(s->form != PresentationForm::Medial);
    const char32_t letter = utf8::decode(w.token)[0];
    const bool right_joining = joining_class(letter) == JoiningClass::RightJoining;
    if (right_joining || b.initial_count(to_state_id({letter, PresentationForm::Isolated})) > 0) {
      CHECK(s->form == PresentationForm::Isolated);
      ++pinned;
    }
  }
  CHECK(pinned > 0);
}

TEST_CASE("one wrong character out of four") {
  const Model m = train(pairs_of({U"شغال"}), 0.01);
  TrainingPair gold = make_training_pair(U"شغال");
  gold.states[3] = StateId{"ل‑FIN"};
  const std::vector<TrainingPair> test{gold};
  const EvalReport r = evaluate(m, test);
  CHECK(r.total_chars == 4);
  CHECK(r.correct_chars == 3);
  CHECK(r.accuracy == 0.75);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].position == 3);
  CHECK(r.errors[0].predicted == StateId{"ل‑ISO"});
  check_invariants(r);
}

TEST_CASE("flag_unseen") {
  ModelBuilder b;
  train_words(b, pairs_of({U"شغال", U"بابا"}));

  const auto seen = make_training_pair(U"شغال");
  for (std::size_t t = 0; t < 4; ++t) CHECK(flag_unseen(b, seen, t) == UnseenFlags{});

  // ت never follows ا in training.
  const auto novel = make_training_pair(U"بات");
  CHECK(flag_unseen(b, novel, 1) == UnseenFlags{});
  const auto f = flag_unseen(b, novel, 2);
  CHECK(f.transition);
  CHECK(f.emission);  // ت is a new letter altogether

  // Known letters in a new order.
  const auto reordered = make_training_pair(U"غب");
  CHECK(flag_unseen(b, reordered, 0).transition);
  CHECK(flag_unseen(b, reordered, 1).transition);
  CHECK(flag_unseen(b, make_training_pair(U"ب"), 0).emission);  // ب only ever seen as INI
  CHECK(flag_unseen(b, make_training_pair(U"با"), 0) == UnseenFlags{});

  // The model-based overload agrees with the builder-based one.
  const Model m = finalize(b, 0.01);
  for (std::size_t t = 0; t < 3; ++t) CHECK(flag_unseen(m, novel, t) == flag_unseen(b, novel, t));
}

TEST_CASE("errors at an excluded bigram are all flagged") {
  // Training has no ت directly after ش; the test words all contain it.
  const auto train_pairs =
      pairs_of({U"شما", U"تا", U"است", U"شب", U"کشور", U"شهر", U"دست", U"بیت", U"رشد", U"شاد", U"تن"});
  ModelBuilder b;
  train_words(b, train_pairs);
  CHECK(b.transition_count(StateId{"ش‑INI"}, StateId{"ت‑MED"}) == 0);
  CHECK(b.transition_count(StateId{"ش‑MED"}, StateId{"ت‑MED"}) == 0);
  CHECK(b.transition_count(StateId{"ش‑INI"}, StateId{"ت‑FIN"}) == 0);
  const Model m = finalize(b, 0.01);
  const auto test_pairs = pairs_of({U"اشتر", U"هشت", U"کشتی", U"زشتی"});
  const EvalReport r = evaluate(m, test_pairs);
  check_invariants(r);
  for (const auto& e : r.errors) {
    const auto& w = test::letters(utf8::decode(e.word));
    if (e.position > 0 && w[e.position - 1].token == "ش" && w[e.position].token == "ت") CHECK(e.unseen_transition);
  }
  for (const auto& w : r.words)
    for (std::size_t t = 1; t < w.gold.size(); ++t)
      if (utf8::decode(w.word)[t - 1] == U'ش' && utf8::decode(w.word)[t] == U'ت') CHECK(w.flags[t].transition);
}

TEST_CASE("empty test set") {
  const Model m = train(pairs_of({U"شغال"}), 0.01);
  const std::vector<TrainingPair> none;
  CHECK_THROWS_AS((void)evaluate(m, none), Error);
  const std::vector<TrainingPair> only_blank{blank_pair()};
  try {
    (void)evaluate(m, only_blank);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyTestSet);
  }
}

TEST_CASE("text report") {
  EvalReport r;
  r.total_chars = 350;
  r.correct_chars = 329;
  r.accuracy = 329.0 / 350.0;
  std::ostringstream out;
  render_report(r, out, ReportFormat::Text);
  CHECK(out.str().find("accuracy: 0.9400") != std::string::npos);

  const Model m = train(pairs_of({U"شغال", U"بابا"}), 0.01);
  const auto perfect = evaluate(m, pairs_of({U"شغال"}));
  std::ostringstream clean;
  render_report(perfect, clean, ReportFormat::Text);
  const std::string text = clean.str();
  CHECK(text.find("accuracy: 1.0000") != std::string::npos);
  const auto diag = text.find("diagnostics:\n");
  REQUIRE(diag != std::string::npos);
  CHECK(diag + std::string("diagnostics:\n").size() == text.size());
}

TEST_CASE("delimited report round-trips") {
  const Model m = train(bundled_top(40), 0.01);
  const auto list = load_frequency_list(test::data_dir() / "persian_words.tsv");
  std::vector<TrainingPair> test;
  for (std::size_t i = 200; i < 260; ++i) test.push_back(make_training_pair(list.entries[i].word));
  const EvalReport r = evaluate(m, test);
  REQUIRE_FALSE(r.errors.empty());
  std::ostringstream out;
  render_report(r, out, ReportFormat::Delimited);
  std::istringstream in(out.str());
  const auto parsed = parse_delimited_report(in);
  CHECK(parsed.size() == r.errors.size());
  CHECK(parsed == r.errors);
  check_invariants(r);
}
