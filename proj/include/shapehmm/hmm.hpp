#pragma once

// First-order hidden Markov model over opaque string tokens.
//
// Training is supervised: callers submit aligned (symbol, state) sequences to
// a ModelBuilder, which grows its state set and vocabulary in first-seen order
// and accumulates raw counts. finalize() turns the counts into a BasicModel
// with additive smoothing. Decoding (viterbi, brute_force_decode) and scoring
// (sequence_log_prob) run entirely in natural-log space.

#include <Eigen/Core>

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shapehmm/error.hpp"

namespace shapehmm {

/// One emission token. Identity is exact byte equality.
struct Symbol {
  std::string token;

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

/// One hidden-state token. Identity is exact byte equality.
struct StateId {
  std::string token;

  friend bool operator==(const StateId&, const StateId&) = default;
  friend auto operator<=>(const StateId&, const StateId&) = default;
};

}  // namespace shapehmm

template <>
struct std::hash<shapehmm::Symbol> {
  std::size_t operator()(const shapehmm::Symbol& s) const noexcept { return std::hash<std::string>{}(s.token); }
};

template <>
struct std::hash<shapehmm::StateId> {
  std::size_t operator()(const shapehmm::StateId& s) const noexcept { return std::hash<std::string>{}(s.token); }
};

namespace shapehmm {

/// One aligned supervised example.
struct TrainingPair {
  std::vector<Symbol> symbols;
  std::vector<StateId> states;

  friend bool operator==(const TrainingPair&, const TrainingPair&) = default;
};

using Count = std::int64_t;
using CountVector = Eigen::Matrix<Count, Eigen::Dynamic, 1>;
using CountMatrix = Eigen::Matrix<Count, Eigen::Dynamic, Eigen::Dynamic>;

/// Insertion-ordered set with O(1) index lookup.
template <typename T>
class OrderedIndex {
 public:
  OrderedIndex() = default;
  /// Throws std::invalid_argument on duplicate items.
  explicit OrderedIndex(std::vector<T> items) {
    for (auto& item : items)
      if (!insert(std::move(item)).second) throw std::invalid_argument("duplicate entry in ordered index");
  }

  /// Returns the index of `item`, appending it if new.
  std::pair<std::size_t, bool> insert(T item) {
    auto it = index_.find(item);
    if (it != index_.end()) return {it->second, false};
    const std::size_t pos = items_.size();
    index_.emplace(item, pos);
    items_.push_back(std::move(item));
    return {pos, true};
  }

  std::optional<std::size_t> find(const T& item) const {
    auto it = index_.find(item);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<T>& items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }

 private:
  std::vector<T> items_;
  std::unordered_map<T, std::size_t> index_;
};

/// Raw supervised counts, indexed in the builder's state/vocab order.
/// transition(i, j) counts i -> j; emission(i, w) counts state i emitting w.
struct TrainingCounts {
  CountVector initial;
  CountMatrix transition;
  CountMatrix emission;

  friend bool operator==(const TrainingCounts& x, const TrainingCounts& y) {
    return x.initial == y.initial && x.transition == y.transition && x.emission == y.emission;
  }
};

class ModelBuilder {
 public:
  ModelBuilder() = default;

  /// Adds one aligned observation. Throws EmptySequence / LengthMismatch.
  void train_pair(std::span<const Symbol> symbols, std::span<const StateId> states);

  const std::vector<StateId>& states() const noexcept { return states_.items(); }
  const std::vector<Symbol>& vocab() const noexcept { return vocab_.items(); }
  std::optional<std::size_t> state_index(const StateId& s) const { return states_.find(s); }
  std::optional<std::size_t> symbol_index(const Symbol& w) const { return vocab_.find(w); }
  const TrainingCounts& counts() const noexcept { return counts_; }

  Count initial_count(const StateId& s) const;
  Count transition_count(const StateId& from, const StateId& to) const;
  Count emission_count(const StateId& s, const Symbol& w) const;

  bool empty() const noexcept { return states_.empty(); }

 private:
  std::size_t add_state(const StateId& s);
  std::size_t add_symbol(const Symbol& w);

  OrderedIndex<StateId> states_;
  OrderedIndex<Symbol> vocab_;
  TrainingCounts counts_;
};

/// A finalized, immutable HMM.
///
/// b() holds P(w | s) for the M known symbols; b_unseen() holds the mass each
/// state reserves for symbols outside the vocabulary. For every state the row
/// of b() plus its b_unseen() entry sums to one.
template <typename Scalar>
class BasicModel {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  /// Throws std::invalid_argument if the shapes disagree or a distribution is
  /// out of range.
  BasicModel(std::vector<StateId> states, std::vector<Symbol> vocab, Vector pi, Matrix a, Matrix b,
             Vector b_unseen, double alpha, std::optional<TrainingCounts> counts = std::nullopt)
      : states_(std::move(states)),
        vocab_(std::move(vocab)),
        pi_(std::move(pi)),
        a_(std::move(a)),
        b_(std::move(b)),
        b_unseen_(std::move(b_unseen)),
        alpha_(alpha),
        counts_(std::move(counts)) {
    validate();
    log_pi_ = pi_.array().log().matrix();
    log_a_ = a_.array().log().matrix();
    log_b_.resize(b_.rows(), b_.cols() + 1);
    log_b_.leftCols(b_.cols()) = b_.array().log().matrix();
    log_b_.col(b_.cols()) = b_unseen_.array().log().matrix();
  }

  Eigen::Index num_states() const noexcept { return static_cast<Eigen::Index>(states_.size()); }
  Eigen::Index vocab_size() const noexcept { return static_cast<Eigen::Index>(vocab_.size()); }

  const std::vector<StateId>& states() const noexcept { return states_.items(); }
  const std::vector<Symbol>& vocab() const noexcept { return vocab_.items(); }
  std::optional<std::size_t> state_index(const StateId& s) const { return states_.find(s); }
  std::optional<std::size_t> symbol_index(const Symbol& w) const { return vocab_.find(w); }

  const Vector& pi() const noexcept { return pi_; }
  const Matrix& a() const noexcept { return a_; }
  const Matrix& b() const noexcept { return b_; }
  const Vector& b_unseen() const noexcept { return b_unseen_; }
  double alpha() const noexcept { return alpha_; }

  /// Training counts the model was finalized from, when known.
  const std::optional<TrainingCounts>& counts() const noexcept { return counts_; }

  const Vector& log_pi() const noexcept { return log_pi_; }
  const Matrix& log_a() const noexcept { return log_a_; }
  /// K x (M + 1); the last column is the unseen-symbol log mass.
  const Matrix& log_b() const noexcept { return log_b_; }

  /// Emission column for `w`: its vocab index, or vocab_size() when unseen.
  Eigen::Index column_of(const Symbol& w) const {
    auto idx = vocab_.find(w);
    return idx ? static_cast<Eigen::Index>(*idx) : vocab_size();
  }

 private:
  void validate() const {
    const Eigen::Index k = num_states();
    const Eigen::Index m = vocab_size();
    if (k == 0) throw std::invalid_argument("model has no states");
    if (m == 0) throw std::invalid_argument("model has no vocabulary");
    if (pi_.size() != k) throw std::invalid_argument("pi length does not match state count");
    if (a_.rows() != k || a_.cols() != k) throw std::invalid_argument("a is not K x K");
    if (b_.rows() != k || b_.cols() != m) throw std::invalid_argument("b is not K x M");
    if (b_unseen_.size() != k) throw std::invalid_argument("b_unseen length does not match state count");
    if (!(alpha_ >= 0.0)) throw std::invalid_argument("alpha must be nonnegative");
    auto in_unit = [](const auto& x) { return ((x.array() >= Scalar(0)) && (x.array() <= Scalar(1))).all(); };
    if (!in_unit(pi_) || !in_unit(a_) || !in_unit(b_) || !in_unit(b_unseen_))
      throw std::invalid_argument("probability outside [0, 1]");
    const Scalar tol = std::sqrt(std::numeric_limits<Scalar>::epsilon());
    auto near_one = [tol](Scalar x) { return std::abs(x - Scalar(1)) <= tol; };
    if (!near_one(pi_.sum())) throw std::invalid_argument("pi does not sum to 1");
    for (Eigen::Index i = 0; i < k; ++i) {
      if (!near_one(a_.row(i).sum())) throw std::invalid_argument("row " + std::to_string(i) + " of a does not sum to 1");
      if (!near_one(b_.row(i).sum() + b_unseen_(i)))
        throw std::invalid_argument("row " + std::to_string(i) + " of b does not sum to 1");
    }
    if (counts_) {
      if (counts_->initial.size() != k || counts_->transition.rows() != k || counts_->transition.cols() != k ||
          counts_->emission.rows() != k || counts_->emission.cols() != m)
        throw std::invalid_argument("counts do not match model dimensions");
    }
  }

  OrderedIndex<StateId> states_;
  OrderedIndex<Symbol> vocab_;
  Vector pi_;
  Matrix a_;
  Matrix b_;
  Vector b_unseen_;
  double alpha_;
  std::optional<TrainingCounts> counts_;

  Vector log_pi_;
  Matrix log_a_;
  Matrix log_b_;
};

using Model = BasicModel<double>;

template <typename Scalar>
struct DecodeResult {
  std::vector<StateId> path;
  std::vector<std::size_t> state_indices;
  Scalar log_prob = Scalar(0);
  std::vector<std::size_t> unseen_symbol_positions;
};

inline constexpr double kDefaultAlpha = 0.01;
inline constexpr std::uint64_t kBruteForceLimit = 10'000'000;

/// Maximum-likelihood estimates with additive smoothing:
///   a[i][j] = (n(i->j) + alpha) / (out(i) + alpha K)
///   b[i][w] = (n(i, w) + alpha) / (emit(i) + alpha (M + 1))
///   pi[i]   = (n0(i) + alpha) / (N0 + alpha K)
/// The (M + 1)-th emission slot is the unseen-symbol mass. A state with no
/// outgoing transitions gets a uniform row.
template <typename Scalar = double>
BasicModel<Scalar> finalize(const ModelBuilder& builder, double alpha = kDefaultAlpha) {
  if (builder.states().empty() || builder.vocab().empty())
    throw Error(Errc::EmptyModel, "cannot finalize a model with no training data");
  if (!(alpha >= 0.0)) throw Error(Errc::NegativeAlpha, "smoothing alpha must be >= 0, got " + std::to_string(alpha));

  using Vector = typename BasicModel<Scalar>::Vector;
  using Matrix = typename BasicModel<Scalar>::Matrix;
  const TrainingCounts& c = builder.counts();
  const auto k = static_cast<Eigen::Index>(builder.states().size());
  const auto m = static_cast<Eigen::Index>(builder.vocab().size());

  const Eigen::VectorXd initial = c.initial.cast<double>();
  const double pi_den = initial.sum() + alpha * static_cast<double>(k);
  Eigen::VectorXd pi = pi_den > 0.0 ? Eigen::VectorXd((initial.array() + alpha) / pi_den)
                                    : Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));

  Eigen::MatrixXd a(k, k);
  const Eigen::MatrixXd trans = c.transition.cast<double>();
  for (Eigen::Index i = 0; i < k; ++i) {
    const double den = trans.row(i).sum() + alpha * static_cast<double>(k);
    if (trans.row(i).sum() == 0.0 || den <= 0.0)
      a.row(i).setConstant(1.0 / static_cast<double>(k));
    else
      a.row(i) = (trans.row(i).array() + alpha) / den;
  }

  Eigen::MatrixXd b(k, m);
  Eigen::VectorXd unseen(k);
  const Eigen::MatrixXd emit = c.emission.cast<double>();
  for (Eigen::Index i = 0; i < k; ++i) {
    const double den = emit.row(i).sum() + alpha * static_cast<double>(m + 1);
    if (den <= 0.0) {
      b.row(i).setConstant(1.0 / static_cast<double>(m + 1));
      unseen(i) = 1.0 / static_cast<double>(m + 1);
    } else {
      b.row(i) = (emit.row(i).array() + alpha) / den;
      unseen(i) = alpha / den;
    }
  }

  return BasicModel<Scalar>(builder.states(), builder.vocab(), Vector(pi.cast<Scalar>()), Matrix(a.cast<Scalar>()),
                            Matrix(b.cast<Scalar>()), Vector(unseen.cast<Scalar>()), alpha, c);
}

namespace detail {

template <typename Scalar>
std::vector<Eigen::Index> observation_columns(const BasicModel<Scalar>& model, std::span<const Symbol> symbols,
                                              std::vector<std::size_t>& unseen) {
  std::vector<Eigen::Index> cols;
  cols.reserve(symbols.size());
  for (std::size_t t = 0; t < symbols.size(); ++t) {
    const Eigen::Index col = model.column_of(symbols[t]);
    if (col == model.vocab_size()) unseen.push_back(t);
    cols.push_back(col);
  }
  return cols;
}

template <typename Scalar>
DecodeResult<Scalar> make_result(const BasicModel<Scalar>& model, std::vector<std::size_t> indices, Scalar log_prob,
                                 std::vector<std::size_t> unseen) {
  DecodeResult<Scalar> out;
  out.path.reserve(indices.size());
  for (auto i : indices) out.path.push_back(model.states()[i]);
  out.state_indices = std::move(indices);
  out.log_prob = log_prob;
  out.unseen_symbol_positions = std::move(unseen);
  return out;
}

}  // namespace detail

/// Most likely state path for `symbols`.
///
/// Scores accumulate left to right as ((score + log a) + log b), the same
/// order sequence_log_prob uses, so the reported log_prob matches a rescoring
/// of the path exactly. Ties go to the lowest state index, resolved from the
/// last position backwards. Symbols outside the vocabulary are scored with each
/// state's unseen mass and reported in unseen_symbol_positions.
template <typename Scalar>
DecodeResult<Scalar> viterbi(const BasicModel<Scalar>& model, std::span<const Symbol> symbols) {
  if (symbols.empty()) throw Error(Errc::EmptySequence, "cannot decode an empty sequence");
  using Vector = typename BasicModel<Scalar>::Vector;

  std::vector<std::size_t> unseen;
  const auto cols = detail::observation_columns(model, symbols, unseen);
  const Eigen::Index k = model.num_states();
  const auto n = static_cast<Eigen::Index>(symbols.size());
  const auto& log_a = model.log_a();
  const auto& log_b = model.log_b();

  Vector delta = model.log_pi() + log_b.col(cols[0]);
  Vector next(k);
  Eigen::Matrix<Eigen::Index, Eigen::Dynamic, Eigen::Dynamic> back(k, n);
  back.col(0).setZero();

  for (Eigen::Index t = 1; t < n; ++t) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const Scalar emit = log_b(j, cols[t]);
      Eigen::Index best_k = 0;
      Scalar best = (delta(0) + log_a(0, j)) + emit;
      for (Eigen::Index p = 1; p < k; ++p) {
        const Scalar cand = (delta(p) + log_a(p, j)) + emit;
        if (cand > best) {
          best = cand;
          best_k = p;
        }
      }
      next(j) = best;
      back(j, t) = best_k;
    }
    delta.swap(next);
  }

  Eigen::Index last = 0;
  for (Eigen::Index j = 1; j < k; ++j)
    if (delta(j) > delta(last)) last = j;

  std::vector<std::size_t> path(static_cast<std::size_t>(n), 0);
  // With every path at probability zero all of them tie, and the all-zero
  // path is the lowest under the tie-break.
  if (delta(last) > -std::numeric_limits<Scalar>::infinity()) {
    path.back() = static_cast<std::size_t>(last);
    for (Eigen::Index t = n - 1; t > 0; --t) {
      last = back(last, t);
      path[static_cast<std::size_t>(t - 1)] = static_cast<std::size_t>(last);
    }
  }
  const Scalar log_prob = delta(static_cast<Eigen::Index>(path.back()));
  return detail::make_result(model, std::move(path), log_prob, std::move(unseen));
}

/// Exhaustive decoder over all K^n paths; the reference Viterbi is checked
/// against. Paths are enumerated with the last position as the most
/// significant digit and only a strictly better score replaces the incumbent,
/// which yields the same tie-break as viterbi(). Throws TooLarge when K^n
/// exceeds `limit`.
template <typename Scalar>
DecodeResult<Scalar> brute_force_decode(const BasicModel<Scalar>& model, std::span<const Symbol> symbols,
                                        std::uint64_t limit = kBruteForceLimit) {
  if (symbols.empty()) throw Error(Errc::EmptySequence, "cannot decode an empty sequence");
  const auto k = static_cast<std::uint64_t>(model.num_states());
  const std::size_t n = symbols.size();

  std::uint64_t total = 1;
  for (std::size_t t = 0; t < n; ++t) {
    if (total > limit / k)
      throw Error(Errc::TooLarge, std::to_string(k) + "^" + std::to_string(n) + " paths exceed the enumeration limit");
    total *= k;
  }
  if (total > limit)
    throw Error(Errc::TooLarge, std::to_string(k) + "^" + std::to_string(n) + " paths exceed the enumeration limit");

  std::vector<std::size_t> unseen;
  const auto cols = detail::observation_columns(model, symbols, unseen);
  const auto& log_pi = model.log_pi();
  const auto& log_a = model.log_a();
  const auto& log_b = model.log_b();

  std::vector<std::size_t> current(n, 0);
  std::vector<std::size_t> best_path = current;
  Scalar best = -std::numeric_limits<Scalar>::infinity();
  bool have_best = false;

  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t rest = code;
    for (std::size_t t = 0; t < n; ++t) {
      current[t] = static_cast<std::size_t>(rest % k);
      rest /= k;
    }
    const auto s0 = static_cast<Eigen::Index>(current[0]);
    Scalar score = log_pi(s0) + log_b(s0, cols[0]);
    for (std::size_t t = 1; t < n; ++t) {
      const auto prev = static_cast<Eigen::Index>(current[t - 1]);
      const auto cur = static_cast<Eigen::Index>(current[t]);
      score = (score + log_a(prev, cur)) + log_b(cur, cols[t]);
    }
    if (!have_best || score > best) {
      best = score;
      best_path = current;
      have_best = true;
    }
  }
  return detail::make_result(model, std::move(best_path), best, std::move(unseen));
}

/// log pi(s1) + sum log a(s_t-1, s_t) + sum log b(s_t, w_t). States absent
/// from the model contribute -inf; unknown symbols use the unseen mass.
template <typename Scalar>
Scalar sequence_log_prob(const BasicModel<Scalar>& model, std::span<const Symbol> symbols,
                         std::span<const StateId> states) {
  if (symbols.empty() || states.empty()) throw Error(Errc::EmptySequence, "cannot score an empty sequence");
  if (symbols.size() != states.size())
    throw Error(Errc::LengthMismatch, std::to_string(symbols.size()) + " symbols vs " + std::to_string(states.size()) +
                                          " states");
  constexpr Scalar kNegInf = -std::numeric_limits<Scalar>::infinity();

  std::vector<Eigen::Index> idx;
  idx.reserve(states.size());
  for (const auto& s : states) {
    auto i = model.state_index(s);
    if (!i) return kNegInf;
    idx.push_back(static_cast<Eigen::Index>(*i));
  }

  const auto& log_b = model.log_b();
  Scalar score = model.log_pi()(idx[0]) + log_b(idx[0], model.column_of(symbols[0]));
  for (std::size_t t = 1; t < symbols.size(); ++t)
    score = (score + model.log_a()(idx[t - 1], idx[t])) + log_b(idx[t], model.column_of(symbols[t]));
  return score;
}

/// Convenience for building token sequences in tests and tools.
std::vector<Symbol> to_symbols(std::span<const std::string> tokens);
std::vector<StateId> to_states(std::span<const std::string> tokens);

}  // namespace shapehmm
