#include "shapehmm/pipeline.hpp"

#include <string>

#include "shapehmm/corpus.hpp"
#include "shapehmm/shaping.hpp"

namespace shapehmm {

TrainingPair with_boundary(const TrainingPair& pair) {
  if (is_blank_pair(pair)) return pair;
  TrainingPair out = pair;
  out.symbols.push_back(Symbol{std::string(kBlankToken)});
  out.states.push_back(StateId{std::string(kBlankToken)});
  return out;
}

void train_words(ModelBuilder& builder, std::span<const TrainingPair> pairs) {
  for (const auto& pair : pairs) {
    const auto bounded = with_boundary(pair);
    builder.train_pair(bounded.symbols, bounded.states);
  }
}

WordDecode decode_word(const Model& model, std::span<const Symbol> symbols) {
  if (symbols.empty()) throw Error(Errc::EmptySequence, "cannot decode an empty word");
  std::vector<Symbol> bounded(symbols.begin(), symbols.end());
  bounded.push_back(Symbol{std::string(kBlankToken)});

  auto result = viterbi(model, std::span<const Symbol>(bounded));
  WordDecode out;
  out.states.assign(result.path.begin(), result.path.end() - 1);
  out.log_prob = result.log_prob;
  for (auto pos : result.unseen_symbol_positions)
    if (pos < symbols.size()) out.unseen_symbol_positions.push_back(pos);
  return out;
}

}  // namespace shapehmm
