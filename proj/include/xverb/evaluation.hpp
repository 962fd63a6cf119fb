#pragma once
// Scoring of induced verb clusters against a gold standard: modified purity
// (precision-like, singleton credits discarded), weighted class accuracy
// (recall-like), their harmonic mean, and vocabulary coverage. Also Spearman
// rank correlation of vector cosines against human similarity judgements.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "xverb/clustering.hpp"
#include "xverb/embedding.hpp"
#include "xverb/types.hpp"
#include "xverb/util.hpp"

namespace xverb {

// Gold class membership; every verb belongs to exactly one class.
struct GoldStandard {
  LanguageTag language;
  std::vector<std::pair<std::string, std::vector<Token>>> classes;
  std::unordered_map<std::string, std::string> membership;  // rendered -> id

  std::size_t total_verbs() const { return membership.size(); }

  std::optional<std::string> class_of(const Token& t) const {
    auto it = membership.find(t.rendered());
    if (it == membership.end()) return std::nullopt;
    return it->second;
  }

  void validate() const {
    if (classes.empty())
      throw std::invalid_argument("empty gold standard");
  }
};

// Same file format as the verb-class lexicon: "class_id<TAB>verb1 verb2 ...".
// A verb listed under two classes is rejected.
inline GoldStandard load_gold_standard(const std::filesystem::path& path,
                                       const LanguageTag& language) {
  GoldStandard gold{language, {}, {}};
  std::map<std::string, std::size_t> class_index;
  auto lines = read_lines(path);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    auto cols = split_on(lines[li], '\t');
    if (cols.size() != 2)
      throw std::runtime_error(path.string() + ": line " +
                               std::to_string(li + 1) +
                               ": expected 'class_id<TAB>members'");
    auto id = trim(cols[0]);
    auto members = split_whitespace(cols[1]);
    if (id.empty() || members.empty())
      throw std::runtime_error(path.string() + ": line " +
                               std::to_string(li + 1) +
                               ": empty class id or member list");
    auto [it, inserted] = class_index.try_emplace(id, gold.classes.size());
    if (inserted) gold.classes.emplace_back(id, std::vector<Token>{});
    auto& dest = gold.classes[it->second].second;
    for (auto& m : members) {
      Token token(language, ascii_lower(m));
      auto [mit, fresh] = gold.membership.try_emplace(token.rendered(), id);
      if (!fresh) {
        if (mit->second == id) continue;  // repeated listing in same class
        throw std::runtime_error(path.string() + ": line " +
                                 std::to_string(li + 1) + ": verb '" +
                                 token.rendered() +
                                 "' already assigned to class '" +
                                 mit->second + "'");
      }
      dest.push_back(std::move(token));
    }
  }
  gold.validate();
  return gold;
}

enum class Denominator { all_gold, clustered };

namespace detail {

struct MetricCounts {
  // per induced cluster: largest intersection with any single gold class
  std::vector<std::size_t> prevalent;                 // n_prev(C)
  std::vector<std::vector<std::string>> prevalent_ties;
  std::vector<std::size_t> gold_members_per_cluster;
  // per gold class (by position): largest intersection with any cluster
  std::vector<std::size_t> dominant;                  // n_dom(C)
  std::vector<std::vector<int>> dominant_ties;
  std::vector<std::string> skipped_tokens;            // not in the gold
  std::size_t clustered_gold = 0;
};

inline MetricCounts intersection_counts(const ClusterAssignment& assignment,
                                        const GoldStandard& gold) {
  gold.validate();
  MetricCounts counts;
  const std::size_t num_clusters =
      static_cast<std::size_t>(std::max(assignment.num_clusters, 0));

  std::map<std::string, std::size_t> class_pos;
  for (std::size_t c = 0; c < gold.classes.size(); ++c)
    class_pos[gold.classes[c].first] = c;

  // cluster x class intersection table
  std::vector<std::map<std::string, std::size_t>> table(num_clusters);
  counts.gold_members_per_cluster.assign(num_clusters, 0);
  for (std::size_t i = 0; i < assignment.tokens.size(); ++i) {
    auto cls = gold.class_of(assignment.tokens[i]);
    if (!cls) {
      counts.skipped_tokens.push_back(assignment.tokens[i].rendered());
      continue;
    }
    ++counts.clustered_gold;
    auto label = static_cast<std::size_t>(assignment.labels[i]);
    ++table[label][*cls];
    ++counts.gold_members_per_cluster[label];
  }

  counts.prevalent.assign(num_clusters, 0);
  counts.prevalent_ties.assign(num_clusters, {});
  for (std::size_t c = 0; c < num_clusters; ++c) {
    std::size_t best = 0;
    for (const auto& [id, k] : table[c]) best = std::max(best, k);
    counts.prevalent[c] = best;
    if (best > 0)
      for (const auto& [id, k] : table[c])
        if (k == best) counts.prevalent_ties[c].push_back(id);
  }

  counts.dominant.assign(gold.classes.size(), 0);
  counts.dominant_ties.assign(gold.classes.size(), {});
  for (std::size_t c = 0; c < num_clusters; ++c) {
    for (const auto& [id, k] : table[c]) {
      auto pos = class_pos[id];
      if (k > counts.dominant[pos]) {
        counts.dominant[pos] = k;
        counts.dominant_ties[pos] = {static_cast<int>(c)};
      } else if (k == counts.dominant[pos]) {
        counts.dominant_ties[pos].push_back(static_cast<int>(c));
      }
    }
  }
  return counts;
}

inline double denominator_value(const MetricCounts& counts,
                                const GoldStandard& gold, Denominator mode) {
  std::size_t d = mode == Denominator::all_gold ? gold.total_verbs()
                                                : counts.clustered_gold;
  return static_cast<double>(d);
}

}  // namespace detail

// Sum of n_prev(C) over induced clusters, with singleton credits discarded
// (n_prev = 1 contributes nothing), divided by the number of test verbs.
inline double modified_purity(const ClusterAssignment& assignment,
                              const GoldStandard& gold,
                              Denominator mode = Denominator::all_gold) {
  auto counts = detail::intersection_counts(assignment, gold);
  double denom = detail::denominator_value(counts, gold, mode);
  if (denom == 0.0) return 0.0;
  std::size_t sum = 0;
  for (std::size_t c = 0; c < counts.prevalent.size(); ++c)
    if (counts.prevalent[c] > 1) sum += counts.prevalent[c];
  return static_cast<double>(sum) / denom;
}

// Sum over gold classes of the largest overlap with any induced cluster,
// divided by the number of test verbs.
inline double weighted_class_accuracy(const ClusterAssignment& assignment,
                                      const GoldStandard& gold,
                                      Denominator mode = Denominator::all_gold) {
  auto counts = detail::intersection_counts(assignment, gold);
  double denom = detail::denominator_value(counts, gold, mode);
  if (denom == 0.0) return 0.0;
  std::size_t sum = std::accumulate(counts.dominant.begin(),
                                    counts.dominant.end(), std::size_t{0});
  return static_cast<double>(sum) / denom;
}

inline double f1_score(double mpur, double wacc) {
  if (mpur + wacc == 0.0) return 0.0;
  return 2.0 * mpur * wacc / (mpur + wacc);
}

// Fraction of gold verbs present in the store vocabulary.
inline double coverage(const GoldStandard& gold, const WordVectorStore& store) {
  gold.validate();
  std::size_t total = gold.total_verbs();
  if (total == 0) throw std::invalid_argument("empty gold standard");
  std::size_t present = 0;
  for (const auto& [rendered, id] : gold.membership)
    if (store.contains(rendered)) ++present;
  return static_cast<double>(present) / static_cast<double>(total);
}

struct ClusterBreakdown {
  int cluster;
  std::size_t size;          // all tokens in the cluster
  std::size_t gold_members;  // tokens that are gold verbs
  std::size_t prevalent_count;
  std::vector<std::string> prevalent_classes;  // all argmax ties
};

struct ClassBreakdown {
  std::string class_id;
  std::size_t class_size;
  std::size_t dominant_count;
  std::vector<int> dominant_clusters;  // all argmax ties
};

struct EvalReport {
  double mpur = 0.0, wacc = 0.0, f1 = 0.0, coverage = 0.0;
  int num_clusters = 0;
  std::size_t num_test_verbs = 0;
  std::size_t num_clustered_gold = 0;
  Denominator denominator = Denominator::all_gold;
  // both denominator conventions, for sensitivity analysis
  double mpur_all = 0.0, wacc_all = 0.0, f1_all = 0.0;
  double mpur_clustered = 0.0, wacc_clustered = 0.0, f1_clustered = 0.0;
  std::vector<ClusterBreakdown> per_cluster;
  std::vector<ClassBreakdown> per_class;
  std::vector<std::string> skipped_tokens;
};

namespace detail {

inline EvalReport evaluate_core(const ClusterAssignment& assignment,
                                const GoldStandard& gold, Denominator mode) {
  auto counts = detail::intersection_counts(assignment, gold);

  EvalReport r;
  r.denominator = mode;
  r.num_clusters = assignment.num_clusters;
  r.num_test_verbs = gold.total_verbs();
  r.num_clustered_gold = counts.clustered_gold;
  r.skipped_tokens = counts.skipped_tokens;

  std::size_t prev_sum = 0;
  for (std::size_t c = 0; c < counts.prevalent.size(); ++c)
    if (counts.prevalent[c] > 1) prev_sum += counts.prevalent[c];
  std::size_t dom_sum = std::accumulate(counts.dominant.begin(),
                                        counts.dominant.end(), std::size_t{0});

  auto safe_div = [](std::size_t a, std::size_t b) {
    return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
  };
  r.mpur_all = safe_div(prev_sum, gold.total_verbs());
  r.wacc_all = safe_div(dom_sum, gold.total_verbs());
  r.f1_all = f1_score(r.mpur_all, r.wacc_all);
  r.mpur_clustered = safe_div(prev_sum, counts.clustered_gold);
  r.wacc_clustered = safe_div(dom_sum, counts.clustered_gold);
  r.f1_clustered = f1_score(r.mpur_clustered, r.wacc_clustered);

  if (mode == Denominator::all_gold) {
    r.mpur = r.mpur_all;
    r.wacc = r.wacc_all;
    r.f1 = r.f1_all;
  } else {
    r.mpur = r.mpur_clustered;
    r.wacc = r.wacc_clustered;
    r.f1 = r.f1_clustered;
  }

  std::size_t num_clusters = counts.prevalent.size();
  std::vector<std::size_t> cluster_sizes(num_clusters, 0);
  for (int l : assignment.labels)
    ++cluster_sizes[static_cast<std::size_t>(l)];
  for (std::size_t c = 0; c < num_clusters; ++c)
    r.per_cluster.push_back({static_cast<int>(c), cluster_sizes[c],
                             counts.gold_members_per_cluster[c],
                             counts.prevalent[c], counts.prevalent_ties[c]});
  for (std::size_t g = 0; g < gold.classes.size(); ++g)
    r.per_class.push_back({gold.classes[g].first,
                           gold.classes[g].second.size(), counts.dominant[g],
                           counts.dominant_ties[g]});
  return r;
}

}  // namespace detail

inline EvalReport evaluate(const ClusterAssignment& assignment,
                           const GoldStandard& gold,
                           const WordVectorStore& store,
                           Denominator mode = Denominator::all_gold) {
  EvalReport r = detail::evaluate_core(assignment, gold, mode);
  r.coverage = coverage(gold, store);
  return r;
}

// Without a vector store, coverage degrades to the fraction of gold verbs
// that made it into the assignment at all.
inline EvalReport evaluate(const ClusterAssignment& assignment,
                           const GoldStandard& gold,
                           Denominator mode = Denominator::all_gold) {
  EvalReport r = detail::evaluate_core(assignment, gold, mode);
  r.coverage = r.num_test_verbs == 0
                   ? 0.0
                   : static_cast<double>(r.num_clustered_gold) /
                         static_cast<double>(r.num_test_verbs);
  return r;
}

inline nlohmann::ordered_json report_to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["mpur"] = r.mpur;
  j["wacc"] = r.wacc;
  j["f1"] = r.f1;
  j["coverage"] = r.coverage;
  j["num_clusters"] = r.num_clusters;
  j["num_test_verbs"] = r.num_test_verbs;
  j["num_clustered_gold_verbs"] = r.num_clustered_gold;
  j["denominator"] =
      r.denominator == Denominator::all_gold ? "all_gold" : "clustered";
  j["scores_all_gold"] = {{"mpur", r.mpur_all},
                          {"wacc", r.wacc_all},
                          {"f1", r.f1_all}};
  j["scores_clustered"] = {{"mpur", r.mpur_clustered},
                           {"wacc", r.wacc_clustered},
                           {"f1", r.f1_clustered}};
  j["per_cluster"] = nlohmann::ordered_json::array();
  for (const auto& c : r.per_cluster)
    j["per_cluster"].push_back({{"cluster", c.cluster},
                                {"size", c.size},
                                {"gold_members", c.gold_members},
                                {"prevalent_count", c.prevalent_count},
                                {"prevalent_classes", c.prevalent_classes}});
  j["per_class"] = nlohmann::ordered_json::array();
  for (const auto& g : r.per_class)
    j["per_class"].push_back({{"class", g.class_id},
                              {"size", g.class_size},
                              {"dominant_count", g.dominant_count},
                              {"dominant_clusters", g.dominant_clusters}});
  j["skipped_tokens"] = r.skipped_tokens;
  return j;
}

// ---- verb similarity ----------------------------------------------------

struct SimilarityEntry {
  Token word1;
  Token word2;
  double score;
};

// "word1<TAB>word2<TAB>score" per line.
inline std::vector<SimilarityEntry> load_similarity_dataset(
    const std::filesystem::path& path, const LanguageTag& language) {
  std::vector<SimilarityEntry> out;
  auto lines = read_lines(path);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    auto cols = split_on(lines[li], '\t');
    double score = 0.0;
    if (cols.size() != 3 || !parse_double(trim(cols[2]), score))
      throw std::runtime_error(path.string() + ": line " +
                               std::to_string(li + 1) +
                               ": expected 'word1<TAB>word2<TAB>score'");
    out.push_back({Token(language, ascii_lower(trim(cols[0]))),
                   Token(language, ascii_lower(trim(cols[1]))), score});
  }
  return out;
}

namespace detail {

// 1-based ranks; tied values share the average of their rank range.
inline std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

inline double pearson(const std::vector<double>& a,
                      const std::vector<double>& b) {
  const std::size_t n = a.size();
  double ma = std::accumulate(a.begin(), a.end(), 0.0) / double(n);
  double mb = std::accumulate(b.begin(), b.end(), 0.0) / double(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace detail

struct SpearmanResult {
  double rho;
  std::size_t scored_pairs;
  std::size_t skipped_pairs;  // at least one word missing from the store
};

inline SpearmanResult spearman_similarity_detailed(
    const WordVectorStore& store, const std::vector<SimilarityEntry>& dataset) {
  std::vector<double> cosines, human;
  std::size_t skipped = 0;
  for (const auto& e : dataset) {
    if (!store.contains(e.word1) || !store.contains(e.word2)) {
      ++skipped;
      continue;
    }
    cosines.push_back(
        cosine_similarity(store.vector(e.word1), store.vector(e.word2)));
    human.push_back(e.score);
  }
  if (cosines.size() < 2)
    throw std::runtime_error(
        "spearman correlation undefined: fewer than 2 scorable pairs");
  auto ra = detail::average_ranks(cosines);
  auto rb = detail::average_ranks(human);
  return {detail::pearson(ra, rb), cosines.size(), skipped};
}

inline double spearman_similarity(const WordVectorStore& store,
                                  const std::vector<SimilarityEntry>& dataset) {
  return spearman_similarity_detailed(store, dataset).rho;
}

}  // namespace xverb
