#include "shapehmm/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_set>

#include "shapehmm/error.hpp"
#include "shapehmm/shaping.hpp"
#include "shapehmm/utf8.hpp"

namespace shapehmm {

namespace {

void chomp(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  return out;
}

std::u32string decode_line(const std::string& text, std::size_t line_no) {
  try {
    return utf8::decode(text);
  } catch (const Error& e) {
    throw Error(Errc::MalformedLine, e.what(), line_no);
  }
}

std::vector<std::string> split_side(std::string_view side, std::size_t line_no) {
  if (side == kBlankToken) return {std::string(kBlankToken)};
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto sp = side.find(' ', start);
    auto token = side.substr(start, sp == std::string_view::npos ? std::string_view::npos : sp - start);
    if (token.empty()) throw Error(Errc::MalformedLine, "empty token", line_no);
    out.emplace_back(token);
    if (sp == std::string_view::npos) break;
    start = sp + 1;
  }
  return out;
}

template <typename Token>
void write_side(std::ostream& out, const std::vector<Token>& tokens) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out << ' ';
    out << tokens[i].token;
  }
}

}  // namespace

FrequencyList load_frequency_list(std::istream& in) {
  FrequencyList list;
  std::unordered_set<std::u32string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    chomp(line);
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error(Errc::MalformedLine, "expected word<TAB>count", line_no);
    const std::string_view count_text = std::string_view(line).substr(tab + 1);
    std::uint64_t count = 0;
    auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
    if (count_text.empty() || ec != std::errc{} || ptr != count_text.data() + count_text.size())
      throw Error(Errc::MalformedLine, "count '" + std::string(count_text) + "' is not a nonnegative integer", line_no);
    if (count == 0) throw Error(Errc::MalformedLine, "count must be positive", line_no);

    std::u32string word = decode_line(line.substr(0, tab), line_no);
    if (word.empty()) throw Error(Errc::MalformedLine, "empty word", line_no);
    if (!std::all_of(word.begin(), word.end(), is_alphabet_letter)) {
      ++list.dropped;
      continue;
    }
    if (!seen.insert(word).second) throw Error(Errc::MalformedLine, "duplicate word " + utf8::encode(word), line_no);
    list.entries.push_back({std::move(word), count});
  }
  if (list.entries.empty()) throw Error(Errc::EmptyList, "frequency list has no usable words");
  std::stable_sort(list.entries.begin(), list.entries.end(),
                   [](const FrequencyEntry& x, const FrequencyEntry& y) { return x.count > y.count; });
  return list;
}

FrequencyList load_frequency_list(const std::filesystem::path& path) {
  auto in = open_input(path);
  return load_frequency_list(in);
}

void write_training_file(std::span<const TrainingPair> pairs, std::ostream& out) {
  for (const auto& pair : pairs) {
    write_side(out, pair.symbols);
    out << " | ";
    write_side(out, pair.states);
    out << '\n';
  }
  if (!out) throw Error(Errc::Io, "failed to write training file");
}

void write_training_file(std::span<const TrainingPair> pairs, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_training_file(pairs, out);
}

std::vector<TrainingPair> parse_training_file(std::istream& in) {
  std::vector<TrainingPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    chomp(line);
    if (line.empty()) continue;
    decode_line(line, line_no);
    const auto bar = line.find(" | ");
    if (bar == std::string::npos) throw Error(Errc::MalformedLine, "missing ' | ' separator", line_no);
    const std::string_view view(line);
    const auto symbols = split_side(view.substr(0, bar), line_no);
    const auto states = split_side(view.substr(bar + 3), line_no);
    if (symbols.size() != states.size())
      throw Error(Errc::LengthMismatch,
                  std::to_string(symbols.size()) + " symbols vs " + std::to_string(states.size()) + " states", line_no);
    pairs.push_back({to_symbols(symbols), to_states(states)});
  }
  return pairs;
}

std::vector<TrainingPair> parse_training_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_training_file(in);
}

TrainingPair blank_pair() {
  return {{Symbol{std::string(kBlankToken)}}, {StateId{std::string(kBlankToken)}}};
}

bool is_blank_pair(const TrainingPair& pair) { return pair == blank_pair(); }

CorpusSplit split(const FrequencyList& list, std::size_t n_train, std::size_t n_test, std::uint64_t seed) {
  const std::size_t available = list.entries.size();
  if (n_train > available || n_test > available - n_train)
    throw Error(Errc::InsufficientWords, "insufficient words: requested " + std::to_string(n_train) + " train + " +
                                             std::to_string(n_test) + " test, list has " + std::to_string(available));
  CorpusSplit out;
  out.train.reserve(n_train);
  for (std::size_t i = 0; i < n_train; ++i) out.train.push_back(list.entries[i].word);

  // Partial Fisher-Yates over the remainder. Draws use rejection sampling on
  // raw engine output so the split is identical across standard libraries.
  std::vector<std::size_t> pool(available - n_train);
  std::iota(pool.begin(), pool.end(), n_train);
  std::mt19937_64 rng(seed);
  auto draw_below = [&rng](std::uint64_t bound) {
    const std::uint64_t limit = std::mt19937_64::max() - (std::mt19937_64::max() % bound) - 1;
    std::uint64_t x = rng();
    while (x > limit) x = rng();
    return x % bound;
  };
  out.test.reserve(n_test);
  for (std::size_t i = 0; i < n_test; ++i) {
    const auto j = i + static_cast<std::size_t>(draw_below(pool.size() - i));
    std::swap(pool[i], pool[j]);
    out.test.push_back(list.entries[pool[i]].word);
  }
  return out;
}

}  // namespace shapehmm
