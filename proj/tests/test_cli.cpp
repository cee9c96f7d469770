#include <doctest.h>

#include <algorithm>
#include <regex>
#include <set>

#include "shapehmm/corpus.hpp"
#include "shapehmm/eval.hpp"
#include "test_support.hpp"

using namespace shapehmm;
using test::run_cli;

namespace {

std::string bundled() { return "'" + (test::data_dir() / "persian_words.tsv").string() + "'"; }

std::size_t line_count(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

void write_pairs(const std::filesystem::path& p, std::initializer_list<std::u32string_view> words) {
  std::vector<TrainingPair> pairs{blank_pair()};
  for (auto w : words) pairs.push_back(make_training_pair(w));
  write_training_file(pairs, p);
}

}  // namespace

TEST_SUITE("gen") {
  TEST_CASE("default split sizes") {
    const auto dir = test::scratch_dir("cli_gen");
    const auto r = run_cli(dir, "gen " + bundled() + " train.txt test.txt");
    REQUIRE(r.status == 0);
    const std::string train = test::slurp(dir / "train.txt");
    CHECK(line_count(train) == 90);
    CHECK(train.rfind("  |  \n", 0) == 0);
    CHECK(line_count(test::slurp(dir / "test.txt")) == 32);
    CHECK(r.out.find("train: 89 words") != std::string::npos);
    CHECK(r.out.find("test: 32 words") != std::string::npos);
  }

  TEST_CASE("same seed, same bytes") {
    const auto dir = test::scratch_dir("cli_gen_seed");
    REQUIRE(run_cli(dir, "gen " + bundled() + " a1.txt b1.txt --seed 11").status == 0);
    REQUIRE(run_cli(dir, "gen " + bundled() + " a2.txt b2.txt --seed 11").status == 0);
    REQUIRE(run_cli(dir, "gen " + bundled() + " a3.txt b3.txt --seed 12").status == 0);
    CHECK(test::slurp(dir / "a1.txt") == test::slurp(dir / "a2.txt"));
    CHECK(test::slurp(dir / "b1.txt") == test::slurp(dir / "b2.txt"));
    CHECK(test::slurp(dir / "b1.txt") != test::slurp(dir / "b3.txt"));
  }

  TEST_CASE("more words than the list holds") {
    const auto dir = test::scratch_dir("cli_gen_big");
    const auto r = run_cli(dir, "gen " + bundled() + " a.txt b.txt --n-train 5000");
    CHECK(r.status == 2);
    CHECK(r.err.find("insufficient words") != std::string::npos);
  }
}

TEST_SUITE("train") {
  TEST_CASE("vocabulary is the distinct training letters plus blank") {
    const auto dir = test::scratch_dir("cli_train");
    REQUIRE(run_cli(dir, "gen " + bundled() + " train.txt test.txt").status == 0);
    std::set<Symbol> seen;
    for (const auto& p : parse_training_file(dir / "train.txt")) seen.insert(p.symbols.begin(), p.symbols.end());
    const auto r = run_cli(dir, "train train.txt model.json");
    REQUIRE(r.status == 0);
    CHECK(r.out.find("pairs: 90\n") != std::string::npos);
    CHECK(r.out.find("vocabulary: " + std::to_string(seen.size()) + "\n") != std::string::npos);
  }

  TEST_CASE("full alphabet gives 33 symbols") {
    const auto dir = test::scratch_dir("cli_train_full");
    std::vector<TrainingPair> pairs{blank_pair()};
    for (const auto& l : farsi_alphabet()) pairs.push_back(make_training_pair(std::u32string(1, l.codepoint)));
    write_training_file(pairs, dir / "train.txt");
    const auto r = run_cli(dir, "train train.txt model.json");
    REQUIRE(r.status == 0);
    CHECK(r.out.find("vocabulary: 33\n") != std::string::npos);
  }

  TEST_CASE("model files are deterministic") {
    const auto dir = test::scratch_dir("cli_train_det");
    REQUIRE(run_cli(dir, "gen " + bundled() + " train.txt test.txt").status == 0);
    REQUIRE(run_cli(dir, "train train.txt m1.json").status == 0);
    REQUIRE(run_cli(dir, "train train.txt m2.json").status == 0);
    CHECK(test::slurp(dir / "m1.json") == test::slurp(dir / "m2.json"));
  }

  TEST_CASE("data errors exit 2") {
    const auto dir = test::scratch_dir("cli_train_err");
    write(dir / "empty.txt", "");
    auto r = run_cli(dir, "train empty.txt model.json");
    CHECK(r.status == 2);
    CHECK(r.err.find("EmptyModel") != std::string::npos);

    write(dir / "bad.txt", "  |  \nش غ | ش‑INI\n");
    r = run_cli(dir, "train bad.txt model.json");
    CHECK(r.status == 2);
    CHECK(r.err.find("line 2") != std::string::npos);
  }

  TEST_CASE("usage errors exit 1") {
    const auto dir = test::scratch_dir("cli_usage");
    write_pairs(dir / "train.txt", {U"شغال"});
    CHECK(run_cli(dir, "").status == 1);
    CHECK(run_cli(dir, "train train.txt model.json --alpha -1").status == 1);
    CHECK(run_cli(dir, "frobnicate").status == 1);
    const auto missing = run_cli(dir, "train no_such_file.txt model.json");
    CHECK(missing.status != 0);
    CHECK(missing.err.find("no_such_file.txt") != std::string::npos);
  }
}

TEST_SUITE("decode") {
  TEST_CASE("jackal") {
    const auto dir = test::scratch_dir("cli_decode");
    write_pairs(dir / "train.txt", {U"شغال", U"بابا", U"سلام"});
    REQUIRE(run_cli(dir, "train train.txt model.json").status == 0);

    auto r = run_cli(dir, "decode model.json شغال");
    CHECK(r.status == 0);
    CHECK(r.out == "ش‑INI غ‑MED ا‑FIN ل‑ISO\n");

    r = run_cli(dir, "decode model.json --presentation", "شغال\n");
    CHECK(r.status == 0);
    CHECK(r.out == utf8::encode(std::u32string{0xFEB7, 0xFED0, 0xFE8E, 0xFEDD}) + "\n");
  }

  TEST_CASE("one line per word, unseen letters flagged") {
    const auto dir = test::scratch_dir("cli_decode_unseen");
    write_pairs(dir / "train.txt", {U"شغال"});
    REQUIRE(run_cli(dir, "train train.txt model.json").status == 0);
    const auto r = run_cli(dir, "decode model.json", "شغال شپ\n");
    CHECK(r.status == 0);
    const auto nl = r.out.find('\n');
    REQUIRE(nl != std::string::npos);
    CHECK(r.out.substr(0, nl) == "ش‑INI غ‑MED ا‑FIN ل‑ISO");
    CHECK(r.out.substr(nl + 1).find("[unseen: 1]\n") != std::string::npos);
    CHECK(line_count(r.out) == 2);
  }
}

TEST_SUITE("eval") {
  TEST_CASE("accuracy with four decimals") {
    const auto dir = test::scratch_dir("cli_eval");
    REQUIRE(run_cli(dir, "gen " + bundled() + " train.txt test.txt").status == 0);
    REQUIRE(run_cli(dir, "train train.txt model.json").status == 0);
    const auto r = run_cli(dir, "eval model.json test.txt");
    CHECK(r.status == 0);
    CHECK(std::regex_search(r.out, std::regex("accuracy: [01]\\.[0-9]{4}\n")));
  }

  TEST_CASE("memorization through the CLI") {
    const auto dir = test::scratch_dir("cli_eval_memo");
    REQUIRE(run_cli(dir, "gen " + bundled() + " train.txt test.txt").status == 0);
    REQUIRE(run_cli(dir, "train train.txt model.json --alpha 0").status == 0);
    const auto r = run_cli(dir, "eval model.json train.txt");
    CHECK(r.status == 0);
    CHECK(r.out.find("accuracy: 1.0000\n") != std::string::npos);
  }

  TEST_CASE("delimited format has one line per error") {
    const auto dir = test::scratch_dir("cli_eval_delim");
    REQUIRE(run_cli(dir, "gen " + bundled() + " train.txt test.txt").status == 0);
    REQUIRE(run_cli(dir, "train train.txt model.json").status == 0);
    const auto text = run_cli(dir, "eval model.json test.txt");
    const auto delim = run_cli(dir, "eval model.json test.txt --format delimited");
    REQUIRE(delim.status == 0);
    std::smatch m;
    REQUIRE(std::regex_search(text.out, m, std::regex("characters: ([0-9]+)\ncorrect: ([0-9]+)")));
    const std::size_t errors = std::stoul(m[1]) - std::stoul(m[2]);
    std::istringstream in(delim.out);
    CHECK(parse_delimited_report(in).size() == errors);
    CHECK(run_cli(dir, "eval model.json test.txt --format xml").status == 1);
  }

  TEST_CASE("end-to-end reports are byte-identical") {
    std::string first;
    for (int run = 0; run < 2; ++run) {
      const auto dir = test::scratch_dir("cli_e2e");
      REQUIRE(run_cli(dir, "gen " + bundled() + " train.txt test.txt --seed 3").status == 0);
      REQUIRE(run_cli(dir, "train train.txt model.json --alpha 0.01").status == 0);
      const auto r = run_cli(dir, "eval model.json test.txt");
      REQUIRE(r.status == 0);
      if (run == 0) first = r.out;
      else CHECK(r.out == first);
    }
  }
}

TEST_CASE("inspect") {
  const auto dir = test::scratch_dir("cli_inspect");
  write_pairs(dir / "train.txt", {U"شغال"});
  REQUIRE(run_cli(dir, "train train.txt model.json").status == 0);
  const auto r = run_cli(dir, "inspect model.json --top 2");
  CHECK(r.status == 0);
  CHECK(r.out.find("states: 5\n") != std::string::npos);
  CHECK(r.out.find("vocabulary: 5\n") != std::string::npos);
  CHECK(r.out.find("training counts: present") != std::string::npos);
  CHECK(r.out.find("ش‑INI\t") != std::string::npos);

  write(dir / "broken.json", "{");
  CHECK(run_cli(dir, "inspect broken.json").status == 2);
}
