// shapehmm: generate oracle-labelled data, train, decode, evaluate and inspect
// contextual-shaping HMMs.
//
// Exit status: 0 success, 1 usage error, 2 data error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shapehmm/corpus.hpp"
#include "shapehmm/error.hpp"
#include "shapehmm/eval.hpp"
#include "shapehmm/model_io.hpp"
#include "shapehmm/pipeline.hpp"
#include "shapehmm/shaping.hpp"
#include "shapehmm/utf8.hpp"

namespace fs = std::filesystem;
using namespace shapehmm;

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct GenOptions {
  std::string freq_list;
  std::string train_out;
  std::string test_out;
  std::size_t n_train = kDefaultTrainWords;
  std::size_t n_test = kDefaultTestWords;
  std::uint64_t seed = 7;
};

struct TrainOptions {
  std::string training;
  std::string model_out;
  double alpha = kDefaultAlpha;
};

struct DecodeOptions {
  std::string model;
  std::vector<std::string> text;
  bool presentation = false;
};

struct EvalOptions {
  std::string model;
  std::string test;
  std::string format = "text";
};

struct InspectOptions {
  std::string model;
  std::size_t top = 3;
};

std::size_t char_count(const std::vector<std::u32string>& words) {
  return std::accumulate(words.begin(), words.end(), std::size_t{0},
                         [](std::size_t n, const std::u32string& w) { return n + w.size(); });
}

int run_gen(const GenOptions& opt) {
  const FrequencyList list = load_frequency_list(fs::path(opt.freq_list));
  if (list.dropped > 0)
    std::cerr << "dropped " << list.dropped << " word(s) containing letters outside the alphabet\n";
  const CorpusSplit parts = split(list, opt.n_train, opt.n_test, opt.seed);

  std::vector<TrainingPair> train{blank_pair()};
  for (const auto& w : parts.train) train.push_back(make_training_pair(w));
  std::vector<TrainingPair> test;
  for (const auto& w : parts.test) test.push_back(make_training_pair(w));

  write_training_file(train, fs::path(opt.train_out));
  write_training_file(test, fs::path(opt.test_out));
  std::cout << "train: " << parts.train.size() << " words, " << char_count(parts.train) << " characters -> "
            << opt.train_out << '\n';
  std::cout << "test: " << parts.test.size() << " words, " << char_count(parts.test) << " characters -> "
            << opt.test_out << '\n';
  return 0;
}

int run_train(const TrainOptions& opt) {
  const auto pairs = parse_training_file(fs::path(opt.training));
  ModelBuilder builder;
  train_words(builder, pairs);
  const Model model = finalize(builder, opt.alpha);
  save_model(model, fs::path(opt.model_out));
  std::cout << "pairs: " << pairs.size() << '\n';
  std::cout << "states: " << model.num_states() << '\n';
  std::cout << "vocabulary: " << model.vocab_size() << '\n';
  return 0;
}

std::string decode_run_tokens(const Model& model, const std::u32string& run) {
  std::vector<Symbol> symbols;
  for (char32_t cp : run) symbols.push_back(to_symbol(cp));
  const auto decoded = decode_word(model, symbols);
  std::string out;
  for (std::size_t i = 0; i < decoded.states.size(); ++i) {
    if (i) out += ' ';
    out += decoded.states[i].token;
  }
  if (!decoded.unseen_symbol_positions.empty()) {
    out += " [unseen:";
    for (auto p : decoded.unseen_symbol_positions) out += ' ' + std::to_string(p);
    out += ']';
  }
  return out;
}

std::u32string decode_run_presentation(const Model& model, const std::u32string& run) {
  std::vector<Symbol> symbols;
  for (char32_t cp : run) symbols.push_back(to_symbol(cp));
  const auto decoded = decode_word(model, symbols);
  std::u32string out;
  for (std::size_t i = 0; i < run.size(); ++i) {
    const auto state = parse_state_id(decoded.states[i]);
    out.push_back(state && state->letter == run[i] ? to_presentation_codepoint(*state) : run[i]);
  }
  return out;
}

// Splits `text` into maximal runs of alphabet letters and everything else.
template <typename OnRun>
void for_each_run(const std::u32string& text, OnRun on_run) {
  std::size_t i = 0;
  while (i < text.size()) {
    const bool letter = is_alphabet_letter(text[i]);
    std::size_t j = i;
    while (j < text.size() && is_alphabet_letter(text[j]) == letter) ++j;
    on_run(text.substr(i, j - i), letter);
    i = j;
  }
}

void decode_line(const Model& model, const std::string& line, bool presentation) {
  const std::u32string text = utf8::decode(line);
  if (presentation) {
    std::u32string out;
    for_each_run(text, [&](const std::u32string& run, bool letter) {
      out += letter ? decode_run_presentation(model, run) : run;
    });
    std::cout << utf8::encode(out) << '\n';
    return;
  }
  std::istringstream words(line);
  std::string word;
  while (words >> word) {
    std::string out;
    for_each_run(utf8::decode(word), [&](const std::u32string& run, bool letter) {
      if (!out.empty()) out += ' ';
      out += letter ? decode_run_tokens(model, run) : utf8::encode(run);
    });
    std::cout << out << '\n';
  }
}

int run_decode(const DecodeOptions& opt) {
  const Model model = load_model(fs::path(opt.model));
  if (!opt.text.empty()) {
    std::string joined;
    for (const auto& t : opt.text) joined += (joined.empty() ? "" : " ") + t;
    decode_line(model, joined, opt.presentation);
    return 0;
  }
  std::string line;
  while (std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    decode_line(model, line, opt.presentation);
  }
  return 0;
}

int run_eval(const EvalOptions& opt) {
  const Model model = load_model(fs::path(opt.model));
  const auto pairs = parse_training_file(fs::path(opt.test));
  const EvalReport report = evaluate(model, pairs);
  render_report(report, std::cout, opt.format == "delimited" ? ReportFormat::Delimited : ReportFormat::Text);
  return 0;
}

std::string display(const std::string& token) { return token == kBlankToken ? "<blank>" : token; }

int run_inspect(const InspectOptions& opt) {
  const Model model = load_model(fs::path(opt.model));
  std::cout << "alpha: " << model.alpha() << '\n';
  std::cout << "states: " << model.num_states() << '\n';
  std::cout << "vocabulary: " << model.vocab_size() << '\n';
  std::cout << "training counts: " << (model.counts() ? "present" : "absent") << '\n';

  std::cout << "\nvocab:";
  for (const auto& w : model.vocab()) std::cout << ' ' << display(w.token);
  std::cout << "\n\nstate\tpi\ttop transitions\n";

  const auto k = model.num_states();
  const std::size_t top = std::min<std::size_t>(opt.top, static_cast<std::size_t>(k));
  std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
  char buf[32];
  for (Eigen::Index i = 0; i < k; ++i) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return model.a()(i, x) > model.a()(i, y); });
    std::snprintf(buf, sizeof buf, "%.6f", model.pi()(i));
    std::cout << display(model.states()[static_cast<std::size_t>(i)].token) << '\t' << buf << '\t';
    for (std::size_t r = 0; r < top; ++r) {
      const auto j = order[r];
      std::snprintf(buf, sizeof buf, "%.4f", model.a()(i, j));
      std::cout << (r ? "  " : "") << display(model.states()[static_cast<std::size_t>(j)].token) << '=' << buf;
    }
    std::cout << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextual shaping of Persian text with a first-order HMM"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Split a frequency list and write oracle-labelled train/test files");
  gen_cmd->add_option("freq_list", gen.freq_list, "word<TAB>count frequency list")->required()->check(CLI::ExistingFile);
  gen_cmd->add_option("train_out", gen.train_out, "training file to write")->required();
  gen_cmd->add_option("test_out", gen.test_out, "test file to write")->required();
  gen_cmd->add_option("--n-train", gen.n_train, "number of most frequent words to train on")->capture_default_str();
  gen_cmd->add_option("--n-test", gen.n_test, "number of held-out test words")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "seed for test-word sampling")->capture_default_str();

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train a model from a training file");
  train_cmd->add_option("training", train.training, "training file")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("model_out", train.model_out, "model file to write")->required();
  train_cmd->add_option("--alpha", train.alpha, "additive smoothing constant")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);

  DecodeOptions decode;
  auto* decode_cmd = app.add_subcommand("decode", "Decode presentation forms for text (arguments or stdin)");
  decode_cmd->add_option("model", decode.model, "model file")->required()->check(CLI::ExistingFile);
  decode_cmd->add_option("text", decode.text, "text to decode; reads stdin when omitted");
  decode_cmd->add_flag("--presentation", decode.presentation, "emit presentation-form code points");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model on an oracle-labelled test file");
  eval_cmd->add_option("model", eval.model, "model file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("test", eval.test, "test file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--format", eval.format, "report format")
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "delimited"}));

  InspectOptions inspect;
  auto* inspect_cmd = app.add_subcommand("inspect", "Summarize a model file");
  inspect_cmd->add_option("model", inspect.model, "model file")->required()->check(CLI::ExistingFile);
  inspect_cmd->add_option("--top", inspect.top, "transitions listed per state")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*train_cmd) return run_train(train);
    if (*decode_cmd) return run_decode(decode);
    if (*eval_cmd) return run_eval(eval);
    if (*inspect_cmd) return run_inspect(inspect);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}
