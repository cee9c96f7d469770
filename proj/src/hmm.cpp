#include "shapehmm/hmm.hpp"

namespace shapehmm {

namespace {

template <typename Derived>
void grow_zeroed(Eigen::PlainObjectBase<Derived>& m, Eigen::Index rows, Eigen::Index cols) {
  const Eigen::Index old_rows = m.rows();
  const Eigen::Index old_cols = m.cols();
  m.conservativeResize(rows, cols);
  if (rows > old_rows) m.bottomRows(rows - old_rows).setZero();
  if (cols > old_cols) m.topRightCorner(old_rows, cols - old_cols).setZero();
}

}  // namespace

std::size_t ModelBuilder::add_state(const StateId& s) {
  auto [idx, added] = states_.insert(s);
  if (added) {
    const auto k = static_cast<Eigen::Index>(states_.size());
    const auto m = static_cast<Eigen::Index>(vocab_.size());
    grow_zeroed(counts_.initial, k, 1);
    grow_zeroed(counts_.transition, k, k);
    grow_zeroed(counts_.emission, k, m);
  }
  return idx;
}

std::size_t ModelBuilder::add_symbol(const Symbol& w) {
  auto [idx, added] = vocab_.insert(w);
  if (added) {
    grow_zeroed(counts_.emission, static_cast<Eigen::Index>(states_.size()), static_cast<Eigen::Index>(vocab_.size()));
  }
  return idx;
}

void ModelBuilder::train_pair(std::span<const Symbol> symbols, std::span<const StateId> states) {
  if (symbols.size() != states.size())
    throw Error(Errc::LengthMismatch, std::to_string(symbols.size()) + " symbols vs " + std::to_string(states.size()) +
                                          " states");
  if (symbols.empty()) throw Error(Errc::EmptySequence, "training pair is empty");

  std::size_t prev = 0;
  for (std::size_t t = 0; t < states.size(); ++t) {
    const auto s = static_cast<Eigen::Index>(add_state(states[t]));
    const auto w = static_cast<Eigen::Index>(add_symbol(symbols[t]));
    if (t == 0)
      counts_.initial(s) += 1;
    else
      counts_.transition(static_cast<Eigen::Index>(prev), s) += 1;
    counts_.emission(s, w) += 1;
    prev = static_cast<std::size_t>(s);
  }
}

Count ModelBuilder::initial_count(const StateId& s) const {
  auto i = states_.find(s);
  return i ? counts_.initial(static_cast<Eigen::Index>(*i)) : 0;
}

Count ModelBuilder::transition_count(const StateId& from, const StateId& to) const {
  auto i = states_.find(from);
  auto j = states_.find(to);
  return i && j ? counts_.transition(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(*j)) : 0;
}

Count ModelBuilder::emission_count(const StateId& s, const Symbol& w) const {
  auto i = states_.find(s);
  auto j = vocab_.find(w);
  return i && j ? counts_.emission(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(*j)) : 0;
}

std::vector<Symbol> to_symbols(std::span<const std::string> tokens) {
  std::vector<Symbol> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(Symbol{t});
  return out;
}

std::vector<StateId> to_states(std::span<const std::string> tokens) {
  std::vector<StateId> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(StateId{t});
  return out;
}

}  // namespace shapehmm
