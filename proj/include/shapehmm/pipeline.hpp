#pragma once

// Word-level training and decoding for the shaping model.
//
// Each word is submitted with a trailing blank boundary token, so the model
// sees which states end a word (a final or isolated form) and which never do.

#include <span>
#include <vector>

#include "shapehmm/hmm.hpp"

namespace shapehmm {

/// `pair` followed by the blank boundary; the blank seed pair is returned as is.
TrainingPair with_boundary(const TrainingPair& pair);

void train_words(ModelBuilder& builder, std::span<const TrainingPair> pairs);

struct WordDecode {
  std::vector<StateId> states;
  double log_prob = 0.0;
  std::vector<std::size_t> unseen_symbol_positions;
};

/// Viterbi over the word plus boundary; the boundary state is dropped from
/// the result. Throws EmptySequence.
WordDecode decode_word(const Model& model, std::span<const Symbol> symbols);

}  // namespace shapehmm
