#pragma once
// Verb clustering: locally-scaled Gaussian affinity, multiway normalized-cut
// spectral clustering on the random-walk matrix, self-tuning estimation of
// the cluster count via eigenvector rotation, plus K-means and Ward
// agglomerative baselines. Everything is deterministic given a seed; ties
// are broken by index or rendered-token order.

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "xverb/embedding.hpp"
#include "xverb/rng.hpp"
#include "xverb/types.hpp"

namespace xverb {

struct AffinityMatrix {
  std::vector<Token> tokens;
  Eigen::MatrixXd values;  // symmetric, entries in [0,1], unit diagonal
};

struct ClusteringConfig {
  enum class Algorithm { mncut_spectral, kmeans, ward };
  Algorithm algorithm = Algorithm::mncut_spectral;
  std::optional<int> num_clusters;  // absent => self-tune
  int k_max = 20;
  int local_scale_neighbor = 7;
  int kmeans_restarts = 10;
  int kmeans_max_iterations = 100;
  std::uint64_t rng_seed = 1;
};

inline const char* algorithm_name(ClusteringConfig::Algorithm a) {
  switch (a) {
    case ClusteringConfig::Algorithm::mncut_spectral: return "mncut_spectral";
    case ClusteringConfig::Algorithm::kmeans: return "kmeans";
    case ClusteringConfig::Algorithm::ward: return "ward";
  }
  return "?";
}

inline std::optional<ClusteringConfig::Algorithm> algorithm_from_name(
    const std::string& s) {
  if (s == "mncut_spectral") return ClusteringConfig::Algorithm::mncut_spectral;
  if (s == "kmeans") return ClusteringConfig::Algorithm::kmeans;
  if (s == "ward") return ClusteringConfig::Algorithm::ward;
  return std::nullopt;
}

struct ClusterAssignment {
  std::vector<Token> tokens;
  std::vector<int> labels;  // parallel to tokens, values in [0, num_clusters)
  int num_clusters = 0;

  int label_of(const Token& t) const {
    for (std::size_t i = 0; i < tokens.size(); ++i)
      if (tokens[i] == t) return labels[i];
    throw std::out_of_range("token not in assignment: '" + t.rendered() + "'");
  }

  std::vector<std::vector<Token>> clusters() const {
    std::vector<std::vector<Token>> out(
        static_cast<std::size_t>(num_clusters));
    for (std::size_t i = 0; i < tokens.size(); ++i)
      out[static_cast<std::size_t>(labels[i])].push_back(tokens[i]);
    return out;
  }
};

namespace detail {

// Renumbers labels by first occurrence so equal partitions compare equal.
inline void canonical_relabel(std::vector<int>& labels, int& num_clusters) {
  std::map<int, int> remap;
  int next = 0;
  for (int& l : labels) {
    auto [it, inserted] = remap.try_emplace(l, next);
    if (inserted) ++next;
    l = it->second;
  }
  num_clusters = next;
}

struct KmeansRun {
  std::vector<int> labels;
  double distortion = std::numeric_limits<double>::infinity();
};

// Lloyd iterations with k-means++ seeding. Empty clusters are repaired by
// reseeding from the point farthest from its centroid. Ties everywhere go
// to the smallest index.
inline KmeansRun kmeans_once(const Eigen::MatrixXd& points, int k,
                             int max_iterations, SplitRng& rng) {
  const auto n = points.rows();
  const auto d = points.cols();
  Eigen::MatrixXd centers(k, d);

  // k-means++ seeding
  std::vector<double> dist2(static_cast<std::size_t>(n),
                            std::numeric_limits<double>::infinity());
  std::vector<char> chosen(static_cast<std::size_t>(n), 0);
  Eigen::Index first = static_cast<Eigen::Index>(
      rng.uniform_index(static_cast<std::size_t>(n)));
  centers.row(0) = points.row(first);
  chosen[static_cast<std::size_t>(first)] = 1;
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double d2 = (points.row(i) - centers.row(c - 1)).squaredNorm();
      auto ui = static_cast<std::size_t>(i);
      if (d2 < dist2[ui]) dist2[ui] = d2;
      total += dist2[ui];
    }
    Eigen::Index pick = -1;
    if (total > 0.0) {
      double r = rng.uniform_real() * total;
      double cum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        cum += dist2[static_cast<std::size_t>(i)];
        if (cum > r) {
          pick = i;
          break;
        }
      }
      if (pick < 0) pick = n - 1;
    } else {
      // all points coincide with existing centers; take first unchosen
      for (Eigen::Index i = 0; i < n && pick < 0; ++i)
        if (!chosen[static_cast<std::size_t>(i)]) pick = i;
      if (pick < 0) pick = 0;
    }
    centers.row(c) = points.row(pick);
    chosen[static_cast<std::size_t>(pick)] = 1;
  }

  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  for (int iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d2 = (points.row(i) - centers.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        double d2 = (points.row(i) - centers.row(c)).squaredNorm();
        if (d2 < best_d2) {
          best_d2 = d2;
          best = c;
        }
      }
      if (labels[static_cast<std::size_t>(i)] != best) {
        labels[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }

    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, d);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(labels[static_cast<std::size_t>(i)]) += points.row(i);
      ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) =
            sums.row(c) / double(counts[static_cast<std::size_t>(c)]);
      } else {
        // reseed from the point farthest from its centroid
        Eigen::Index far = 0;
        double far_d2 = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          double d2 =
              (points.row(i) -
               centers.row(labels[static_cast<std::size_t>(i)]))
                  .squaredNorm();
          if (d2 > far_d2) {
            far_d2 = d2;
            far = i;
          }
        }
        centers.row(c) = points.row(far);
        labels[static_cast<std::size_t>(far)] = c;
        changed = true;
      }
    }
    if (!changed) break;
  }

  KmeansRun run;
  run.labels = std::move(labels);
  run.distortion = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    run.distortion +=
        (points.row(i) - centers.row(run.labels[static_cast<std::size_t>(i)]))
            .squaredNorm();
  return run;
}

inline KmeansRun kmeans_best_of(const Eigen::MatrixXd& points, int k,
                                int restarts, int max_iterations,
                                SplitRng& rng) {
  if (k < 1) throw std::invalid_argument("kmeans: K must be >= 1");
  if (points.rows() < k)
    throw std::invalid_argument("kmeans: K exceeds number of points");
  KmeansRun best;
  for (int r = 0; r < std::max(1, restarts); ++r) {
    KmeansRun run = kmeans_once(points, k, max_iterations, rng);
    if (run.distortion < best.distortion) best = std::move(run);
  }
  return best;
}

}  // namespace detail

// Locally-scaled Gaussian affinity: A_ij = exp(-d(i,j)^2 / (sigma_i
// sigma_j)) over unit-normalized vectors, where sigma_i is the distance
// from point i to its m-th nearest neighbor. Diagonal forced to 1.
inline AffinityMatrix build_affinity(const WordVectorStore& store,
                                     const std::vector<Token>& tokens,
                                     int local_scale_neighbor = 7) {
  const std::size_t n = tokens.size();
  if (n < 2)
    throw std::invalid_argument("build_affinity: need at least 2 tokens");
  if (local_scale_neighbor < 1)
    throw std::invalid_argument("build_affinity: neighbor index must be >= 1");

  std::vector<Eigen::VectorXd> unit(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& v = store.vector(tokens[i]);  // throws on missing token
    double norm = v.norm();
    if (norm == 0.0)
      throw std::invalid_argument("build_affinity: zero vector for '" +
                                  tokens[i].rendered() + "'");
    unit[i] = v / norm;
  }

  Eigen::MatrixXd d2(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    d2(i, i) = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = (unit[i] - unit[j]).squaredNorm();
      d2(i, j) = v;
      d2(j, i) = v;
    }
  }

  // sigma_i: distance to the m-th nearest other point, m clamped to n-1
  const std::size_t m =
      std::min<std::size_t>(static_cast<std::size_t>(local_scale_neighbor),
                            n - 1);
  std::vector<double> sigma(n);
  std::vector<double> dists(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t w = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) dists[w++] = std::sqrt(d2(i, j));
    std::nth_element(dists.begin(),
                     dists.begin() + static_cast<std::ptrdiff_t>(m - 1),
                     dists.end());
    sigma[i] = std::max(dists[m - 1], 1e-12);
  }

  AffinityMatrix out;
  out.tokens = tokens;
  out.values = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    out.values(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      double a = std::exp(-d2(i, j) / (sigma[i] * sigma[j]));
      out.values(i, j) = a;
      out.values(j, i) = a;
    }
  }
  return out;
}

namespace detail {

// Eigenvectors of D^{-1/2} A D^{-1/2} for the largest eigenvalues, columns
// ordered by descending eigenvalue, each column's dominant entry made
// positive so results do not depend on solver sign conventions.
inline Eigen::MatrixXd top_symmetric_eigenvectors(const Eigen::MatrixXd& a,
                                                  int k,
                                                  Eigen::VectorXd* degrees) {
  const auto n = a.rows();
  Eigen::VectorXd d = a.rowwise().sum();
  Eigen::VectorXd d_inv_sqrt(n);
  for (Eigen::Index i = 0; i < n; ++i)
    d_inv_sqrt[i] = 1.0 / std::sqrt(std::max(d[i], 1e-300));
  Eigen::MatrixXd sym = d_inv_sqrt.asDiagonal() * a * d_inv_sqrt.asDiagonal();
  // enforce exact symmetry before the solver
  sym = 0.5 * (sym + sym.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  Eigen::MatrixXd vecs(n, k);
  for (int c = 0; c < k; ++c) {
    Eigen::VectorXd col = solver.eigenvectors().col(n - 1 - c);
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(col[i]) > best) {
        best = std::abs(col[i]);
        arg = i;
      }
    if (col[arg] < 0.0) col = -col;
    vecs.col(c) = col;
  }
  if (degrees) *degrees = std::move(d);
  return vecs;
}

}  // namespace detail

// Multiway normalized-cut spectral clustering: eigenvectors of the
// row-stochastic P = D^{-1} A (computed through the symmetric equivalence),
// K-means on the embedding rows. Rows with no off-diagonal affinity are
// split off as singleton clusters before the decomposition.
inline ClusterAssignment mncut_spectral_cluster(const AffinityMatrix& affinity,
                                                int k,
                                                const ClusteringConfig& config) {
  const auto n = affinity.values.rows();
  if (k < 2 || k > n)
    throw std::invalid_argument("mncut_spectral_cluster: need 2 <= K <= n");

  ClusterAssignment out;
  out.tokens = affinity.tokens;
  out.labels.assign(static_cast<std::size_t>(n), -1);

  if (k == n) {  // every point its own cluster; distortion 0 attainable
    for (Eigen::Index i = 0; i < n; ++i)
      out.labels[static_cast<std::size_t>(i)] = static_cast<int>(i);
    out.num_clusters = static_cast<int>(n);
    return out;
  }

  // isolate degenerate rows (all-zero off-diagonal)
  std::vector<Eigen::Index> live;
  int next_label = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) off = std::max(off, affinity.values(i, j));
    if (off == 0.0)
      out.labels[static_cast<std::size_t>(i)] = next_label++;
    else
      live.push_back(i);
  }

  if (!live.empty()) {
    int k_live = k - next_label;
    k_live = std::max(1, std::min<int>(k_live, static_cast<int>(live.size())));
    Eigen::MatrixXd sub(live.size(), live.size());
    for (std::size_t a = 0; a < live.size(); ++a)
      for (std::size_t b = 0; b < live.size(); ++b)
        sub(a, b) = affinity.values(live[a], live[b]);

    std::vector<int> sub_labels;
    if (k_live == 1) {
      sub_labels.assign(live.size(), 0);
    } else {
      Eigen::VectorXd degrees;
      Eigen::MatrixXd u =
          detail::top_symmetric_eigenvectors(sub, k_live, &degrees);
      // map back to eigenvectors of P = D^{-1} A
      Eigen::MatrixXd embed(u.rows(), u.cols());
      for (Eigen::Index i = 0; i < u.rows(); ++i)
        embed.row(i) = u.row(i) / std::sqrt(std::max(degrees[i], 1e-300));
      SplitRng rng(config.rng_seed);
      auto run = detail::kmeans_best_of(embed, k_live, config.kmeans_restarts,
                                        config.kmeans_max_iterations, rng);
      sub_labels = std::move(run.labels);
    }
    for (std::size_t a = 0; a < live.size(); ++a)
      out.labels[static_cast<std::size_t>(live[a])] =
          next_label + sub_labels[a];
  }

  detail::canonical_relabel(out.labels, out.num_clusters);
  return out;
}

namespace detail {

// Alignment cost of an eigenvector matrix under a rotation parameterized by
// Givens angles: sum over rows of sum_j Z_ij^2 / max_j Z_ij^2. A perfectly
// cluster-indicating basis rotates to one nonzero per row, cost n. The sum
// is deliberately not divided by n: the cost of one superfluous eigenvector
// is a constant in row-sum units, which keeps the near-tie window of the
// K-selection rule meaningful at any point count.
class GivensAligner {
 public:
  explicit GivensAligner(const Eigen::MatrixXd& x)
      : x_(x), k_(static_cast<int>(x.cols())) {
    for (int i = 0; i < k_; ++i)
      for (int j = i + 1; j < k_; ++j) planes_.emplace_back(i, j);
  }

  std::size_t num_angles() const { return planes_.size(); }

  Eigen::MatrixXd rotation(const std::vector<double>& theta) const {
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(k_, k_);
    for (std::size_t l = 0; l < planes_.size(); ++l)
      apply_right(r, l, theta[l]);
    return r;
  }

  double cost(const std::vector<double>& theta) const {
    return cost_of(x_ * rotation(theta));
  }

  // Gradient with the current per-row maxima treated as smooth, as in the
  // classic rotation-based estimator.
  std::vector<double> gradient(const std::vector<double>& theta) const {
    const std::size_t L = planes_.size();
    // prefix[l] = G_0 ... G_{l-1}, suffix[l] = G_l ... G_{L-1}
    std::vector<Eigen::MatrixXd> prefix(L + 1), suffix(L + 1);
    prefix[0] = Eigen::MatrixXd::Identity(k_, k_);
    for (std::size_t l = 0; l < L; ++l) {
      prefix[l + 1] = prefix[l];
      apply_right(prefix[l + 1], l, theta[l]);
    }
    suffix[L] = Eigen::MatrixXd::Identity(k_, k_);
    for (std::size_t l = L; l-- > 0;) {
      suffix[l] = givens(l, theta[l]) * suffix[l + 1];
    }

    const Eigen::MatrixXd z = x_ * prefix[L];
    const auto n = z.rows();
    Eigen::VectorXd max_abs(n);
    std::vector<Eigen::Index> arg(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double best = -1.0;
      Eigen::Index bi = 0;
      for (Eigen::Index j = 0; j < z.cols(); ++j)
        if (std::abs(z(i, j)) > best) {
          best = std::abs(z(i, j));
          bi = j;
        }
      max_abs[i] = std::max(best, 1e-300);
      arg[i] = bi;
    }

    std::vector<double> grad(L, 0.0);
    for (std::size_t l = 0; l < L; ++l) {
      Eigen::MatrixXd dr = prefix[l] * givens_derivative(l, theta[l]) *
                           suffix[l + 1];
      Eigen::MatrixXd dz = x_ * dr;
      double g = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double m2 = max_abs[i] * max_abs[i];
        const double dm = dz(i, arg[i]) * z(i, arg[i]);
        for (Eigen::Index j = 0; j < z.cols(); ++j) {
          g += 2.0 * z(i, j) * dz(i, j) / m2 -
               2.0 * z(i, j) * z(i, j) * dm / (m2 * m2);
        }
      }
      grad[l] = g;
    }
    return grad;
  }

  // Gradient descent along the normalized gradient, step measured in angle
  // space so behavior is independent of the cost scale. Each iteration runs
  // a fresh backtracking-plus-expansion line search; 200-iteration cap,
  // stop after two consecutive improvements below the 1e-6 tolerance.
  double minimize(std::vector<double> theta) const {
    if (planes_.empty()) return cost(theta);
    double current = cost(theta);
    double last_step = 0.2;
    int small_improvements = 0;
    for (int iter = 0; iter < 200; ++iter) {
      auto grad = gradient(theta);
      double norm = 0.0;
      for (double g : grad) norm += g * g;
      norm = std::sqrt(norm);
      if (norm < 1e-12) break;

      auto at = [&](double s) {
        std::vector<double> trial(theta.size());
        for (std::size_t l = 0; l < theta.size(); ++l)
          trial[l] = theta[l] - s * grad[l] / norm;
        return trial;
      };

      double step = std::min(1.0, std::max(4.0 * last_step, 1e-4));
      bool accepted = false;
      while (step > 1e-10) {
        auto trial = at(step);
        double c = cost(trial);
        if (c < current) {
          // expand while it keeps helping
          while (step < 1.0) {
            auto wider = at(step * 2.0);
            double cw = cost(wider);
            if (cw >= c) break;
            step *= 2.0;
            trial = std::move(wider);
            c = cw;
          }
          double improvement = current - c;
          theta = std::move(trial);
          current = c;
          last_step = step;
          accepted = true;
          small_improvements = improvement < 1e-6 ? small_improvements + 1 : 0;
          break;
        }
        step *= 0.5;
      }
      if (!accepted || small_improvements >= 2) break;
    }
    return current;
  }

  static double cost_of(const Eigen::MatrixXd& z) {
    const auto n = z.rows();
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double m = 0.0;
      for (Eigen::Index j = 0; j < z.cols(); ++j)
        m = std::max(m, std::abs(z(i, j)));
      if (m <= 0.0) {
        total += 1.0;  // empty row counts as aligned
        continue;
      }
      total += z.row(i).squaredNorm() / (m * m);
    }
    return total;
  }

 private:
  Eigen::MatrixXd givens(std::size_t l, double t) const {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(k_, k_);
    auto [i, j] = planes_[l];
    const double c = std::cos(t), s = std::sin(t);
    g(i, i) = c;
    g(j, j) = c;
    g(i, j) = s;
    g(j, i) = -s;
    return g;
  }

  Eigen::MatrixXd givens_derivative(std::size_t l, double t) const {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(k_, k_);
    auto [i, j] = planes_[l];
    const double c = std::cos(t), s = std::sin(t);
    g(i, i) = -s;
    g(j, j) = -s;
    g(i, j) = c;
    g(j, i) = -c;
    return g;
  }

  // right-multiply m by the Givens rotation in plane l
  void apply_right(Eigen::MatrixXd& m, std::size_t l, double t) const {
    auto [i, j] = planes_[l];
    const double c = std::cos(t), s = std::sin(t);
    Eigen::VectorXd ci = m.col(i), cj = m.col(j);
    m.col(i) = c * ci - s * cj;
    m.col(j) = s * ci + c * cj;
  }

  const Eigen::MatrixXd& x_;
  int k_;
  std::vector<std::pair<int, int>> planes_;
};

}  // namespace detail

struct ClusterCountEstimate {
  int k = 2;
  std::vector<double> costs;  // costs[i] is the cost at K = i + 2
  bool degenerate = false;
  std::vector<std::string> warnings;
};

// Self-tuning choice of the cluster count: for each K take the top-K
// eigenvectors of the symmetric-normalized affinity, minimize the rotation
// alignment cost, and return the largest K whose cost is within 0.01 of
// the minimum.
inline ClusterCountEstimate estimate_num_clusters_detailed(
    const AffinityMatrix& affinity, int k_max, const ClusteringConfig& config) {
  const auto n = affinity.values.rows();
  if (n < 2)
    throw std::invalid_argument("estimate_num_clusters: need at least 2 points");
  if (k_max < 2)
    throw std::invalid_argument("estimate_num_clusters: K_max must be >= 2");

  ClusterCountEstimate est;

  double min_off = 1.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) min_off = std::min(min_off, affinity.values(i, j));
  if (min_off >= 1.0 - 1e-12) {
    est.k = 2;
    est.degenerate = true;
    est.warnings.push_back(
        "degenerate all-ones affinity: rotation cost is trivially minimal "
        "for every K; returning smallest allowed K=2");
    return est;
  }

  // Coincident points (affinity within 1e-12 of 1) are collapsed first:
  // the cluster count does not depend on point multiplicity, and exact
  // duplicates spawn null eigenvectors whose rows rotate to near-perfect
  // alignment for every K, washing out the cost signal.
  std::vector<Eigen::Index> reps;
  {
    std::vector<char> merged(static_cast<std::size_t>(n), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (merged[static_cast<std::size_t>(i)]) continue;
      reps.push_back(i);
      for (Eigen::Index j = i + 1; j < n; ++j)
        if (affinity.values(i, j) >= 1.0 - 1e-12)
          merged[static_cast<std::size_t>(j)] = 1;
    }
  }
  Eigen::MatrixXd distinct(reps.size(), reps.size());
  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = 0; b < reps.size(); ++b)
      distinct(a, b) = affinity.values(reps[a], reps[b]);
  if (reps.size() < static_cast<std::size_t>(n))
    est.warnings.push_back("merged " +
                           std::to_string(n - static_cast<Eigen::Index>(
                                                  reps.size())) +
                           " coincident points before estimation");
  if (reps.size() < 2) {
    est.k = 2;
    est.degenerate = true;
    est.warnings.push_back(
        "all points coincide; returning smallest allowed K=2");
    return est;
  }

  const int k_top = std::min<int>(k_max, static_cast<int>(reps.size()));
  Eigen::MatrixXd vecs =
      detail::top_symmetric_eigenvectors(distinct, k_top, nullptr);

  for (int k = 2; k <= k_top; ++k) {
    Eigen::MatrixXd x = vecs.leftCols(k);
    detail::GivensAligner aligner(x);
    std::vector<double> zero(aligner.num_angles(), 0.0);
    double best = aligner.minimize(zero);
    SplitRng rng(SplitRng::derive_seed(config.rng_seed,
                                       static_cast<std::uint64_t>(k)));
    std::vector<double> random_start(aligner.num_angles());
    for (auto& t : random_start)
      t = (rng.uniform_real() - 0.5) * M_PI / 2.0;
    best = std::min(best, aligner.minimize(random_start));
    est.costs.push_back(best);
  }

  double min_cost = *std::min_element(est.costs.begin(), est.costs.end());
  for (std::size_t i = 0; i < est.costs.size(); ++i)
    if (est.costs[i] <= min_cost + 0.01) est.k = static_cast<int>(i) + 2;
  return est;
}

inline int estimate_num_clusters(const AffinityMatrix& affinity, int k_max,
                                 const ClusteringConfig& config) {
  return estimate_num_clusters_detailed(affinity, k_max, config).k;
}

// Plain K-means over the raw point vectors; best of `restarts` runs by
// distortion.
inline ClusterAssignment kmeans_cluster(const std::vector<Token>& tokens,
                                        const std::vector<Eigen::VectorXd>& points,
                                        int k, const ClusteringConfig& config) {
  if (tokens.size() != points.size())
    throw std::invalid_argument("kmeans_cluster: tokens/points size mismatch");
  if (points.empty()) throw std::invalid_argument("kmeans_cluster: no points");
  Eigen::MatrixXd m(points.size(), points[0].size());
  for (std::size_t i = 0; i < points.size(); ++i) m.row(i) = points[i];
  SplitRng rng(config.rng_seed);
  auto run = detail::kmeans_best_of(m, k, config.kmeans_restarts,
                                    config.kmeans_max_iterations, rng);
  ClusterAssignment out;
  out.tokens = tokens;
  out.labels = std::move(run.labels);
  detail::canonical_relabel(out.labels, out.num_clusters);
  return out;
}

// Bottom-up Ward agglomeration via the Lance-Williams update on squared
// Euclidean distances, cut at K clusters. Merge ties pick the smallest pair
// of active slot indices.
inline ClusterAssignment ward_cluster(const std::vector<Token>& tokens,
                                      const std::vector<Eigen::VectorXd>& points,
                                      int k) {
  const std::size_t n = points.size();
  if (tokens.size() != n)
    throw std::invalid_argument("ward_cluster: tokens/points size mismatch");
  if (n == 0) throw std::invalid_argument("ward_cluster: no points");
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw std::invalid_argument("ward_cluster: need 1 <= K <= n");

  std::vector<double> size(n, 1.0);
  std::vector<char> active(n, 1);
  std::vector<int> member(n);  // point -> slot
  for (std::size_t i = 0; i < n; ++i) member[i] = static_cast<int>(i);

  Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double d2 = (points[i] - points[j]).squaredNorm();
      dist(i, j) = d2;
      dist(j, i) = d2;
    }

  std::size_t clusters = n;
  while (clusters > static_cast<std::size_t>(k)) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        if (dist(i, j) < best) {
          best = dist(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    // merge bj into bi (bi < bj); update Lance-Williams distances
    const double ni = size[bi], nj = size[bj];
    for (std::size_t h = 0; h < n; ++h) {
      if (!active[h] || h == bi || h == bj) continue;
      const double nh = size[h];
      const double d = ((ni + nh) * dist(h, bi) + (nj + nh) * dist(h, bj) -
                        nh * dist(bi, bj)) /
                       (ni + nj + nh);
      dist(h, bi) = d;
      dist(bi, h) = d;
    }
    size[bi] += size[bj];
    active[bj] = 0;
    for (std::size_t p = 0; p < n; ++p)
      if (member[p] == static_cast<int>(bj)) member[p] = static_cast<int>(bi);
    --clusters;
  }

  ClusterAssignment out;
  out.tokens = tokens;
  out.labels = std::move(member);
  detail::canonical_relabel(out.labels, out.num_clusters);
  return out;
}

// ---- cluster file I/O --------------------------------------------------
// one "token<TAB>index" line per token, preceded by comment lines recording
// algorithm, K and seed.

inline void write_cluster_file(const ClusterAssignment& assignment,
                               const std::filesystem::path& path,
                               const std::string& algorithm,
                               std::uint64_t seed) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << "# algorithm: " << algorithm << '\n';
  out << "# k: " << assignment.num_clusters << '\n';
  out << "# seed: " << seed << '\n';
  for (std::size_t i = 0; i < assignment.tokens.size(); ++i)
    out << assignment.tokens[i].rendered() << '\t' << assignment.labels[i]
        << '\n';
}

inline ClusterAssignment read_cluster_file(const std::filesystem::path& path) {
  ClusterAssignment out;
  auto lines = read_lines(path);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    auto line = trim(lines[li]);
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_on(lines[li], '\t');
    long long label = 0;
    if (cols.size() != 2 || !parse_long(trim(cols[1]), label) || label < 0)
      throw std::runtime_error(path.string() + ": line " +
                               std::to_string(li + 1) +
                               ": expected 'token<TAB>cluster_index'");
    out.tokens.push_back(Token::parse(trim(cols[0])));
    out.labels.push_back(static_cast<int>(label));
  }
  int max_label = -1;
  for (int l : out.labels) max_label = std::max(max_label, l);
  out.num_clusters = max_label + 1;
  return out;
}

}  // namespace xverb
