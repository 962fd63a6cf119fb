#pragma once
// Mini-batch hinge-loss specialisation of a word-vector space. Constraint
// pairs are pulled together until they clear a margin over their in-batch
// negatives; an L2 pull toward the initial vectors preserves the original
// distributional information. Updates use per-coordinate AdaGrad.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "xverb/constraints.hpp"
#include "xverb/embedding.hpp"
#include "xverb/rng.hpp"

namespace xverb {

struct SpecializationConfig {
  double attract_margin = 0.6;
  double regularization_constant = 1e-9;
  std::size_t batch_size = 50;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  std::uint64_t rng_seed = 1;
  bool squared_regularizer = false;  // distance squared instead of the norm
  bool renormalize_each_epoch = true;
  double adagrad_epsilon = 1e-8;
};

struct OrientedPair {
  Token left;
  Token right;
};

struct Batch {
  std::vector<OrientedPair> pairs;

  // Distinct words of the batch, sorted by rendered token.
  std::vector<Token> vocabulary() const {
    std::set<Token> distinct;
    for (const auto& p : pairs) {
      distinct.insert(p.left);
      distinct.insert(p.right);
    }
    return {distinct.begin(), distinct.end()};
  }
};

// Expands each undirected pair to one oriented pair with random orientation,
// shuffles, and slices into consecutive batches of at most k. The last batch
// of an epoch may be smaller.
inline std::vector<Batch> make_batches(const ConstraintSet& set,
                                       std::size_t k, SplitRng& rng) {
  if (k < 2)
    throw std::invalid_argument(
        "batch size must be >= 2 (negative selection needs another word)");
  std::vector<OrientedPair> oriented;
  oriented.reserve(set.size());
  for (const auto& pair : set.pairs()) {
    if (rng.coin_flip())
      oriented.push_back({pair.right, pair.left});
    else
      oriented.push_back({pair.left, pair.right});
  }
  rng.shuffle(oriented);
  std::vector<Batch> batches;
  for (std::size_t start = 0; start < oriented.size(); start += k) {
    Batch b;
    std::size_t end = std::min(start + k, oriented.size());
    b.pairs.assign(oriented.begin() + static_cast<std::ptrdiff_t>(start),
                   oriented.begin() + static_cast<std::ptrdiff_t>(end));
    batches.push_back(std::move(b));
  }
  return batches;
}

// Negative example for one side of a pair; absent when the batch holds no
// word other than the pair itself.
struct NegativeChoice {
  std::optional<Token> left;
  std::optional<Token> right;
};

// For each word of each pair, picks the in-batch word with the highest dot
// product, excluding the word itself and its partner. Ties go to the
// lexicographically smaller rendered token.
inline std::vector<NegativeChoice> select_negatives(
    const Batch& batch, const WordVectorStore& store) {
  if (batch.pairs.empty())
    throw std::invalid_argument("select_negatives: empty batch");
  const auto vocab = batch.vocabulary();  // sorted, so first win = tie rule
  std::vector<const Eigen::VectorXd*> vecs;
  vecs.reserve(vocab.size());
  for (const auto& t : vocab) vecs.push_back(&store.vector(t));

  auto pick = [&](const Token& word, const Token& partner)
      -> std::optional<Token> {
    const Eigen::VectorXd& x = store.vector(word);
    std::optional<Token> best;
    double best_dot = 0.0;
    for (std::size_t c = 0; c < vocab.size(); ++c) {
      if (vocab[c] == word || vocab[c] == partner) continue;
      double d = x.dot(*vecs[c]);
      if (!best || d > best_dot) {
        best = vocab[c];
        best_dot = d;
      }
    }
    return best;
  };

  std::vector<NegativeChoice> out;
  out.reserve(batch.pairs.size());
  for (const auto& p : batch.pairs)
    out.push_back({pick(p.left, p.right), pick(p.right, p.left)});
  return out;
}

inline double hinge(double x) { return x > 0.0 ? x : 0.0; }

// Sum over pairs of tau(margin + x_l.t_l - x_l.x_r) + tau(margin + x_r.t_r
// - x_l.x_r); a term with no negative contributes 0.
inline double attract_cost(const Batch& batch,
                           const std::vector<NegativeChoice>& negatives,
                           double attract_margin,
                           const WordVectorStore& store) {
  if (negatives.size() != batch.pairs.size())
    throw std::logic_error("negatives do not match batch");
  double cost = 0.0;
  for (std::size_t s = 0; s < batch.pairs.size(); ++s) {
    const auto& p = batch.pairs[s];
    const auto& xl = store.vector(p.left);
    const auto& xr = store.vector(p.right);
    const double dot_lr = xl.dot(xr);
    if (negatives[s].left)
      cost += hinge(attract_margin + xl.dot(store.vector(*negatives[s].left)) -
                    dot_lr);
    if (negatives[s].right)
      cost += hinge(attract_margin + xr.dot(store.vector(*negatives[s].right)) -
                    dot_lr);
  }
  return cost;
}

struct EpochLog {
  std::size_t epoch;
  double mean_batch_cost;
  double active_hinge_fraction;
};

// Owns the store for the duration of one training run; freezes the initial
// snapshot on construction and keeps the AdaGrad accumulators.
class TrainingState {
 public:
  explicit TrainingState(WordVectorStore store) : store_(std::move(store)) {
    store_.freeze_snapshot();
    accumulators_.assign(store_.size(),
                         Eigen::VectorXd::Zero(
                             static_cast<Eigen::Index>(store_.dimension())));
  }

  WordVectorStore& store() { return store_; }
  const WordVectorStore& store() const { return store_; }

  Eigen::VectorXd& accumulator(std::size_t i) { return accumulators_[i]; }
  const Eigen::VectorXd& accumulator(std::size_t i) const {
    return accumulators_[i];
  }

  std::vector<EpochLog>& log() { return log_; }
  const std::vector<EpochLog>& log() const { return log_; }

 private:
  WordVectorStore store_;
  std::vector<Eigen::VectorXd> accumulators_;
  std::vector<EpochLog> log_;
};

// Pull toward the initial snapshot over the words of the batch; the plain
// L2 norm by default, squared distance when configured.
inline double regularization_cost(const Batch& batch,
                                  const TrainingState& state,
                                  double regularization_constant,
                                  bool squared = false) {
  double cost = 0.0;
  for (const auto& t : batch.vocabulary()) {
    const auto& x = state.store().vector(t);
    const auto& x0 = state.store().initial_vector(t);
    const double n = (x0 - x).norm();
    cost += regularization_constant * (squared ? n * n : n);
  }
  return cost;
}

struct BatchObjective {
  double cost = 0.0;
  // Rendered token -> accumulated subgradient over every term touching it.
  std::map<std::string, Eigen::VectorXd> gradients;
  std::size_t active_hinge_terms = 0;
  std::size_t total_hinge_terms = 0;
};

// Cost plus subgradient of the batch objective with negatives held fixed.
// The hinge subgradient at a kink is taken as 0, and so is the norm
// subgradient at zero displacement.
inline BatchObjective cost_and_subgradient(
    const Batch& batch, const std::vector<NegativeChoice>& negatives,
    const SpecializationConfig& config, const TrainingState& state) {
  if (negatives.size() != batch.pairs.size())
    throw std::logic_error("negatives do not match batch");
  const auto& store = state.store();
  const Eigen::Index dim = static_cast<Eigen::Index>(store.dimension());

  BatchObjective out;
  auto grad = [&](const Token& t) -> Eigen::VectorXd& {
    auto [it, inserted] =
        out.gradients.try_emplace(t.rendered(), Eigen::VectorXd::Zero(dim));
    return it->second;
  };

  for (std::size_t s = 0; s < batch.pairs.size(); ++s) {
    const auto& p = batch.pairs[s];
    const auto& xl = store.vector(p.left);
    const auto& xr = store.vector(p.right);
    const double dot_lr = xl.dot(xr);
    out.total_hinge_terms += 2;

    if (negatives[s].left) {
      const auto& tl = store.vector(*negatives[s].left);
      const double arg = config.attract_margin + xl.dot(tl) - dot_lr;
      if (arg > 0.0) {
        out.cost += arg;
        ++out.active_hinge_terms;
        grad(p.left) += tl - xr;
        grad(*negatives[s].left) += xl;
        grad(p.right) -= xl;
      }
    }
    if (negatives[s].right) {
      const auto& tr = store.vector(*negatives[s].right);
      const double arg = config.attract_margin + xr.dot(tr) - dot_lr;
      if (arg > 0.0) {
        out.cost += arg;
        ++out.active_hinge_terms;
        grad(p.right) += tr - xl;
        grad(*negatives[s].right) += xr;
        grad(p.left) -= xr;
      }
    }
  }

  const double lambda = config.regularization_constant;
  for (const auto& t : batch.vocabulary()) {
    const auto& x = store.vector(t);
    const auto& x0 = store.initial_vector(t);
    const Eigen::VectorXd diff = x - x0;
    const double n = diff.norm();
    if (config.squared_regularizer) {
      out.cost += lambda * n * n;
      if (n > 0.0) grad(t) += 2.0 * lambda * diff;
    } else {
      out.cost += lambda * n;
      if (n > 0.0) grad(t) += (lambda / n) * diff;
    }
  }
  return out;
}

// Per coordinate: G += g^2 then x -= lr/(sqrt(G)+eps) * g. All gradients
// are computed before any update, so negatives stay frozen within a step.
inline void adagrad_step(TrainingState& state,
                         const std::map<std::string, Eigen::VectorXd>& grads,
                         double learning_rate, double epsilon = 1e-8) {
  auto& store = state.store();
  for (const auto& [rendered, g] : grads) {
    auto idx = store.index_of(rendered);
    if (!idx)
      throw std::runtime_error("gradient for unknown token: '" + rendered +
                               "'");
    if (g.size() != static_cast<Eigen::Index>(store.dimension()))
      throw std::invalid_argument("gradient dimension mismatch for '" +
                                  rendered + "'");
    auto& acc = state.accumulator(*idx);
    acc.array() += g.array().square();
    Eigen::VectorXd x = store.vector_at(*idx);
    x.array() -= learning_rate * g.array() / (acc.array().sqrt() + epsilon);
    store.set_vector(*idx, std::move(x));
  }
}

struct SpecializeResult {
  WordVectorStore store;
  std::vector<EpochLog> log;
};

// Full training loop: epochs x (make_batches -> select_negatives ->
// cost_and_subgradient -> adagrad_step), renormalizing touched vectors at
// the end of each epoch. Deterministic given the seed; words outside the
// constraint set are never modified.
inline SpecializeResult specialize_with_log(const WordVectorStore& store,
                                            const ConstraintSet& set,
                                            const SpecializationConfig& config) {
  if (config.batch_size < 2)
    throw std::invalid_argument("batch size must be >= 2");
  for (const auto& pair : set.pairs()) {
    if (!store.contains(pair.left))
      throw std::runtime_error(
          "constraint references token missing from store: '" +
          pair.left.rendered() + "' (filter constraints by vocabulary first)");
    if (!store.contains(pair.right))
      throw std::runtime_error(
          "constraint references token missing from store: '" +
          pair.right.rendered() + "' (filter constraints by vocabulary first)");
  }

  TrainingState state(store);
  SplitRng rng(config.rng_seed);
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    auto batches = make_batches(set, config.batch_size, rng);
    double cost_sum = 0.0;
    std::size_t active = 0, total = 0;
    std::set<std::size_t> touched;
    for (const auto& batch : batches) {
      auto negatives = select_negatives(batch, state.store());
      auto obj = cost_and_subgradient(batch, negatives, config, state);
      adagrad_step(state, obj.gradients, config.learning_rate,
                   config.adagrad_epsilon);
      cost_sum += obj.cost;
      active += obj.active_hinge_terms;
      total += obj.total_hinge_terms;
      for (const auto& [rendered, g] : obj.gradients)
        touched.insert(*state.store().index_of(rendered));
    }
    if (config.renormalize_each_epoch) {
      for (std::size_t idx : touched) {
        double n = state.store().vector_at(idx).norm();
        if (n > 0.0)
          state.store().set_vector(idx, state.store().vector_at(idx) / n);
      }
    }
    state.log().push_back(
        {epoch, batches.empty() ? 0.0 : cost_sum / double(batches.size()),
         total == 0 ? 0.0 : double(active) / double(total)});
  }
  return {std::move(state.store()), std::move(state.log())};
}

inline WordVectorStore specialize(const WordVectorStore& store,
                                  const ConstraintSet& set,
                                  const SpecializationConfig& config) {
  return specialize_with_log(store, set, config).store;
}

}  // namespace xverb
