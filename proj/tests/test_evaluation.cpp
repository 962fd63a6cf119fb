#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "oracles.hpp"
#include "test_util.hpp"
#include "xverb/evaluation.hpp"

using namespace xverb;
using testutil::TempDir;
using testutil::write_file;

namespace {

GoldStandard make_gold(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& spec,
    const std::string& lang = "fr") {
  GoldStandard gold{LanguageTag(lang), {}, {}};
  for (const auto& [id, members] : spec) {
    std::vector<Token> tokens;
    for (const auto& m : members) {
      Token t(lang, m);
      gold.membership[t.rendered()] = id;
      tokens.push_back(std::move(t));
    }
    gold.classes.emplace_back(id, std::move(tokens));
  }
  return gold;
}

ClusterAssignment make_assignment(
    const std::vector<std::vector<std::string>>& clusters,
    const std::string& lang = "fr") {
  ClusterAssignment a;
  int label = 0;
  for (const auto& group : clusters) {
    for (const auto& m : group) {
      a.tokens.emplace_back(lang, m);
      a.labels.push_back(label);
    }
    ++label;
  }
  a.num_clusters = label;
  return a;
}

}  // namespace

TEST_CASE("modified_purity on the worked four-verb instance") {
  auto gold = make_gold({{"A", {"v1", "v2"}}, {"B", {"v3", "v4"}}});
  auto induced = make_assignment({{"v1", "v2", "v3"}, {"v4"}});
  // cluster 1: prevalent class A with 2 members; cluster 2 is a singleton
  // and is discarded -> 2/4
  REQUIRE(modified_purity(induced, gold) == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("weighted_class_accuracy on the worked four-verb instance") {
  auto gold = make_gold({{"A", {"v1", "v2"}}, {"B", {"v3", "v4"}}});
  auto induced = make_assignment({{"v1", "v2", "v3"}, {"v4"}});
  // A's dominant cluster holds 2; B's holds 1 -> 3/4
  REQUIRE(weighted_class_accuracy(induced, gold) ==
          Catch::Approx(0.75).margin(1e-15));
}

TEST_CASE("metric edge cases") {
  auto gold = make_gold({{"A", {"v1", "v2"}}, {"B", {"v3", "v4"}}});
  SECTION("perfect partition scores 1.0") {
    auto perfect = make_assignment({{"v1", "v2"}, {"v3", "v4"}});
    REQUIRE(modified_purity(perfect, gold) == 1.0);
    REQUIRE(weighted_class_accuracy(perfect, gold) == 1.0);
  }
  SECTION("all singletons: purity collapses to zero") {
    auto singletons = make_assignment({{"v1"}, {"v2"}, {"v3"}, {"v4"}});
    REQUIRE(modified_purity(singletons, gold) == 0.0);
    REQUIRE(weighted_class_accuracy(singletons, gold) > 0.0);
  }
  SECTION("one big cluster: recall-like measure is 1.0") {
    auto lump = make_assignment({{"v1", "v2", "v3", "v4"}});
    REQUIRE(weighted_class_accuracy(lump, gold) == 1.0);
  }
  SECTION("out-of-gold tokens are ignored and reported") {
    auto extra = make_assignment({{"v1", "v2", "zz"}, {"v3", "v4"}});
    auto report = evaluate(extra, gold);
    REQUIRE(report.skipped_tokens == std::vector<std::string>{"fr_zz"});
    REQUIRE(report.mpur == Catch::Approx(0.5 + 0.5).margin(1e-15));
  }
  SECTION("empty gold standard rejected") {
    GoldStandard empty{LanguageTag("fr"), {}, {}};
    auto a = make_assignment({{"v1"}});
    REQUIRE_THROWS(modified_purity(a, empty));
    REQUIRE_THROWS(weighted_class_accuracy(a, empty));
  }
}

TEST_CASE("f1 is the balanced harmonic mean") {
  REQUIRE(f1_score(0.5, 0.75) == Catch::Approx(0.6).margin(1e-15));
  REQUIRE(f1_score(0.0, 1.0) == 0.0);
  REQUIRE(f1_score(0.0, 0.0) == 0.0);
  SplitRng rng(3);
  for (int i = 0; i < 20; ++i) {
    double x = rng.uniform_real();
    REQUIRE(f1_score(x, x) == Catch::Approx(x).margin(1e-15));
  }
}

TEST_CASE("coverage counts gold verbs present in the vocabulary") {
  // 169 verbs over 16 classes, 159 of them in the store: 94.1%
  std::vector<std::pair<std::string, std::vector<std::string>>> spec;
  int id = 0;
  for (int c = 0; c < 16; ++c) {
    std::vector<std::string> members;
    int size = c < 9 ? 11 : 10;  // 9*11 + 7*10 = 169
    for (int m = 0; m < size; ++m)
      members.push_back("verb" + std::to_string(id++));
    spec.emplace_back("class" + std::to_string(c), members);
  }
  auto gold = make_gold(spec);
  REQUIRE(gold.total_verbs() == 169);

  WordVectorStore store(2);
  for (int i = 0; i < 159; ++i)
    store.insert(Token("fr", "verb" + std::to_string(i)),
                 Eigen::Vector2d(1, 0));
  REQUIRE(coverage(gold, store) ==
          Catch::Approx(159.0 / 169.0).margin(1e-15));
  REQUIRE(coverage(gold, store) == Catch::Approx(0.941).margin(1e-3));

  SECTION("full vocabulary") {
    for (int i = 159; i < 169; ++i)
      store.insert(Token("fr", "verb" + std::to_string(i)),
                   Eigen::Vector2d(1, 0));
    REQUIRE(coverage(gold, store) == 1.0);
  }
  SECTION("empty store") {
    REQUIRE(coverage(gold, WordVectorStore(2)) == 0.0);
  }
}

TEST_CASE("evaluate bundles scores and breakdowns") {
  auto gold = make_gold({{"A", {"v1", "v2"}}, {"B", {"v3", "v4"}}});
  auto induced = make_assignment({{"v1", "v2", "v3"}, {"v4"}});
  WordVectorStore store(2);
  for (auto v : {"v1", "v2", "v3", "v4"})
    store.insert(Token("fr", v), Eigen::Vector2d(1, 0));

  auto report = evaluate(induced, gold, store);
  REQUIRE(report.mpur == Catch::Approx(0.5).margin(1e-15));
  REQUIRE(report.wacc == Catch::Approx(0.75).margin(1e-15));
  REQUIRE(report.f1 == Catch::Approx(0.6).margin(1e-15));
  REQUIRE(report.coverage == 1.0);
  REQUIRE(report.num_clusters == 2);
  REQUIRE(report.per_cluster.size() == 2);
  REQUIRE(report.per_cluster[0].prevalent_count == 2);
  REQUIRE(report.per_cluster[0].prevalent_classes ==
          std::vector<std::string>{"A"});
  REQUIRE(report.per_class.size() == 2);
  REQUIRE(report.per_class[0].dominant_count == 2);

  auto json = report_to_json(report);
  REQUIRE(json["f1"] == 0.6);
  REQUIRE(json["per_cluster"].size() == 2);
  REQUIRE(json.contains("skipped_tokens"));
}

TEST_CASE("evaluate supports the clustered-verbs denominator") {
  auto gold = make_gold({{"A", {"v1", "v2"}}, {"B", {"v3", "v4"}}});
  // v4 never clustered
  auto induced = make_assignment({{"v1", "v2", "v3"}});
  auto all = evaluate(induced, gold, Denominator::all_gold);
  auto clustered = evaluate(induced, gold, Denominator::clustered);
  REQUIRE(all.mpur == Catch::Approx(2.0 / 4.0).margin(1e-15));
  REQUIRE(clustered.mpur == Catch::Approx(2.0 / 3.0).margin(1e-15));
  // both conventions always reported
  REQUIRE(all.mpur_clustered == clustered.mpur);
  REQUIRE(clustered.mpur_all == all.mpur);
}

TEST_CASE("metrics are invariant to relabeling") {
  auto gold = make_gold(
      {{"A", {"a1", "a2", "a3"}}, {"B", {"b1", "b2"}}, {"C", {"c1"}}});
  auto induced = make_assignment({{"a1", "a2"}, {"a3", "b1", "b2"}, {"c1"}});
  double m = modified_purity(induced, gold);
  double w = weighted_class_accuracy(induced, gold);

  // permute cluster labels
  ClusterAssignment permuted = induced;
  for (auto& l : permuted.labels) l = (l + 1) % permuted.num_clusters;
  REQUIRE(modified_purity(permuted, gold) == m);
  REQUIRE(weighted_class_accuracy(permuted, gold) == w);

  // permute gold class order
  auto gold2 = make_gold(
      {{"C", {"c1"}}, {"B", {"b1", "b2"}}, {"A", {"a1", "a2", "a3"}}});
  REQUIRE(modified_purity(induced, gold2) == m);
  REQUIRE(weighted_class_accuracy(induced, gold2) == w);
}

TEST_CASE("metrics match brute-force enumeration on random instances") {
  SplitRng rng(20240);
  for (int trial = 0; trial < 300; ++trial) {
    const int n_verbs = 2 + int(rng.uniform_index(29));     // <= 30
    const int n_classes = 1 + int(rng.uniform_index(6));    // <= 6
    const int n_clusters = 1 + int(rng.uniform_index(8));

    std::vector<std::pair<std::string, std::vector<std::string>>> gold_spec(
        static_cast<std::size_t>(n_classes));
    for (int c = 0; c < n_classes; ++c)
      gold_spec[static_cast<std::size_t>(c)].first = "g" + std::to_string(c);
    std::vector<std::vector<std::string>> clusters(
        static_cast<std::size_t>(n_clusters));
    for (int v = 0; v < n_verbs; ++v) {
      std::string name = "v" + std::to_string(v);
      gold_spec[rng.uniform_index(static_cast<std::size_t>(n_classes))]
          .second.push_back(name);
      // some verbs stay unclustered
      if (rng.uniform_real() < 0.9)
        clusters[rng.uniform_index(static_cast<std::size_t>(n_clusters))]
            .push_back(name);
    }
    gold_spec.erase(std::remove_if(gold_spec.begin(), gold_spec.end(),
                                   [](const auto& g) {
                                     return g.second.empty();
                                   }),
                    gold_spec.end());
    if (gold_spec.empty()) continue;
    std::vector<std::vector<std::string>> nonempty;
    for (auto& c : clusters)
      if (!c.empty()) nonempty.push_back(std::move(c));
    if (nonempty.empty()) continue;

    auto gold = make_gold(gold_spec);
    auto assignment = make_assignment(nonempty);
    auto expected =
        oracles::brute_force_scores(nonempty, gold_spec, gold.total_verbs());
    REQUIRE(modified_purity(assignment, gold) == expected.mpur);
    REQUIRE(weighted_class_accuracy(assignment, gold) == expected.wacc);
  }
}

TEST_CASE("gold standard loader rejects duplicate membership") {
  TempDir tmp;
  SECTION("valid file") {
    auto path = write_file(tmp.file("gold.tsv"),
                           "put-9.1\taccrocher deposer mettre\n"
                           "learn-14\tapprendre etudier\n");
    auto gold = load_gold_standard(path, LanguageTag("fr"));
    REQUIRE(gold.total_verbs() == 5);
    REQUIRE(gold.classes.size() == 2);
    REQUIRE(*gold.class_of(Token("fr", "mettre")) == "put-9.1");
  }
  SECTION("verb in two classes") {
    auto path = write_file(tmp.file("gold.tsv"),
                           "a\tverb other\nb\tverb second\n");
    REQUIRE_THROWS_WITH(load_gold_standard(path, LanguageTag("fr")),
                        Catch::Matchers::ContainsSubstring("already assigned"));
  }
}

TEST_CASE("spearman correlation against human scores") {
  WordVectorStore store(2);
  store.insert(Token("en", "a"), Eigen::Vector2d(1, 0));
  store.insert(Token("en", "b"), Eigen::Vector2d(1, 0.1));
  store.insert(Token("en", "c"), Eigen::Vector2d(1, 0.5));
  store.insert(Token("en", "d"), Eigen::Vector2d(0, 1));

  auto entry = [](const char* x, const char* y, double s) {
    return SimilarityEntry{Token("en", x), Token("en", y), s};
  };

  SECTION("cosine order equal to human order gives 1") {
    std::vector<SimilarityEntry> data{entry("a", "b", 9.0),
                                      entry("a", "c", 5.0),
                                      entry("a", "d", 1.0)};
    REQUIRE(spearman_similarity(store, data) ==
            Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("reversed order gives -1") {
    std::vector<SimilarityEntry> data{entry("a", "b", 1.0),
                                      entry("a", "c", 5.0),
                                      entry("a", "d", 9.0)};
    REQUIRE(spearman_similarity(store, data) ==
            Catch::Approx(-1.0).margin(1e-12));
  }
  SECTION("ties take average ranks") {
    // two pairs with identical cosine 1, one pair lower; hand-computed
    // rho = 1.5 / sqrt(3)
    WordVectorStore dup(2);
    dup.insert(Token("en", "p"), Eigen::Vector2d(1, 0));
    dup.insert(Token("en", "q"), Eigen::Vector2d(1, 0));
    dup.insert(Token("en", "r"), Eigen::Vector2d(2, 0));
    dup.insert(Token("en", "s"), Eigen::Vector2d(0, 1));
    std::vector<SimilarityEntry> data{entry("p", "q", 3.0),
                                      entry("p", "r", 2.0),
                                      entry("p", "s", 1.0)};
    REQUIRE(spearman_similarity(dup, data) ==
            Catch::Approx(1.5 / std::sqrt(3.0)).margin(1e-12));
  }
  SECTION("skipped pairs are counted; too few scorable pairs fail") {
    std::vector<SimilarityEntry> data{entry("a", "zz", 1.0),
                                      entry("a", "b", 2.0),
                                      entry("c", "d", 3.0)};
    auto result = spearman_similarity_detailed(store, data);
    REQUIRE(result.skipped_pairs == 1);
    REQUIRE(result.scored_pairs == 2);

    std::vector<SimilarityEntry> too_few{entry("a", "zz", 1.0),
                                         entry("a", "b", 2.0)};
    REQUIRE_THROWS(spearman_similarity(store, too_few));
  }
}

TEST_CASE("similarity dataset file parses") {
  TempDir tmp;
  auto path = write_file(tmp.file("sim.tsv"), "run\twalk\t7.2\nrun\tfly\t2\n");
  auto data = load_similarity_dataset(path, LanguageTag("en"));
  REQUIRE(data.size() == 2);
  REQUIRE(data[0].word1.rendered() == "en_run");
  REQUIRE(data[0].score == 7.2);
}
