#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <map>
#include <set>

#include "oracles.hpp"
#include "test_util.hpp"
#include "xverb/clustering.hpp"

using namespace xverb;

namespace {

std::vector<Token> make_tokens(int n) {
  std::vector<Token> tokens;
  for (int i = 0; i < n; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "v%03d", i);
    tokens.emplace_back("tt", buf);
  }
  return tokens;
}

// partition as canonical set-of-sets, for label-free comparison
std::set<std::set<std::string>> partition_of(const ClusterAssignment& a) {
  std::map<int, std::set<std::string>> groups;
  for (std::size_t i = 0; i < a.tokens.size(); ++i)
    groups[a.labels[i]].insert(a.tokens[i].rendered());
  std::set<std::set<std::string>> out;
  for (auto& [label, group] : groups) out.insert(std::move(group));
  return out;
}

AffinityMatrix block_affinity(const std::vector<int>& sizes, double within,
                              double across, SplitRng* jitter = nullptr) {
  int n = 0;
  for (int s : sizes) n += s;
  AffinityMatrix a;
  a.tokens = make_tokens(n);
  a.values = Eigen::MatrixXd::Zero(n, n);
  std::vector<int> block(static_cast<std::size_t>(n));
  int at = 0, b = 0;
  for (int s : sizes) {
    for (int i = 0; i < s; ++i) block[static_cast<std::size_t>(at++)] = b;
    ++b;
  }
  for (int i = 0; i < n; ++i) {
    a.values(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      double base = block[static_cast<std::size_t>(i)] ==
                            block[static_cast<std::size_t>(j)]
                        ? within
                        : across;
      if (jitter)
        base += (jitter->uniform_real() - 0.5) *
                (base > 0.5 ? 0.1 : 0.05);  // keep blocks separated
      base = std::clamp(base, 0.0, 1.0);
      a.values(i, j) = base;
      a.values(j, i) = base;
    }
  }
  return a;
}

std::vector<int> planted_labels(const std::vector<int>& sizes) {
  std::vector<int> labels;
  int b = 0;
  for (int s : sizes) {
    for (int i = 0; i < s; ++i) labels.push_back(b);
    ++b;
  }
  return labels;
}

// Gaussian blobs on well-separated centers; returns store + token list
std::pair<WordVectorStore, std::vector<Token>> gaussian_blobs(
    int k, int per_cluster, double sep, double sigma, SplitRng& rng) {
  const int dim = 6;
  WordVectorStore store(dim);
  std::vector<Token> tokens;
  int id = 0;
  for (int c = 0; c < k; ++c) {
    Eigen::VectorXd center(dim);
    for (int j = 0; j < dim; ++j) center[j] = rng.normal();
    center = sep * center / center.norm();
    for (int m = 0; m < per_cluster; ++m) {
      Eigen::VectorXd v = center;
      for (int j = 0; j < dim; ++j) v[j] += sigma * rng.normal();
      char buf[16];
      std::snprintf(buf, sizeof(buf), "p%04d", id++);
      Token t("tt", buf);
      tokens.push_back(t);
      store.insert(t, v);
    }
  }
  return {std::move(store), std::move(tokens)};
}

}  // namespace

TEST_CASE("build_affinity follows the locally-scaled Gaussian kernel") {
  SECTION("identical vectors have affinity 1") {
    WordVectorStore store(2);
    store.insert(Token("tt", "a"), Eigen::Vector2d(1, 0));
    store.insert(Token("tt", "b"), Eigen::Vector2d(2, 0));  // same direction
    store.insert(Token("tt", "c"), Eigen::Vector2d(0, 1));
    auto a = build_affinity(store, {Token("tt", "a"), Token("tt", "b"),
                                    Token("tt", "c")});
    REQUIRE(a.values(0, 1) == 1.0);  // unit-normalized: zero distance
  }
  SECTION("distance matching both local scales gives exp(-1)") {
    // two points, neighbor index 1: sigma_i = their distance for both
    WordVectorStore store(2);
    store.insert(Token("tt", "a"), Eigen::Vector2d(1, 0));
    store.insert(Token("tt", "b"), Eigen::Vector2d(0, 1));
    auto a = build_affinity(store, {Token("tt", "a"), Token("tt", "b")}, 1);
    REQUIRE(a.values(0, 1) == Catch::Approx(std::exp(-1.0)).margin(1e-12));
  }
  SECTION("far-apart tight pairs decay below 1e-6") {
    WordVectorStore store(3);
    auto put = [&](const char* name, double x, double y, double z) {
      store.insert(Token("tt", name), Eigen::Vector3d(x, y, z));
    };
    // three tight pairs on orthogonal axes
    put("a1", 1, 0.01, 0);
    put("a2", 1, -0.01, 0);
    put("b1", 0.01, 1, 0);
    put("b2", -0.01, 1, 0);
    put("c1", 0, 0.01, 1);
    put("c2", 0, -0.01, 1);
    std::vector<Token> tokens;
    for (auto n : {"a1", "a2", "b1", "b2", "c1", "c2"})
      tokens.emplace_back("tt", n);
    auto a = build_affinity(store, tokens, 1);
    REQUIRE(a.values(0, 1) > 0.3);   // within pair
    REQUIRE(a.values(0, 2) < 1e-6);  // across pairs
    REQUIRE(a.values(2, 4) < 1e-6);
  }
  SECTION("fewer than 2 tokens rejected") {
    WordVectorStore store(2);
    store.insert(Token("tt", "a"), Eigen::Vector2d(1, 0));
    REQUIRE_THROWS(build_affinity(store, {Token("tt", "a")}));
  }
}

TEST_CASE("build_affinity output is symmetric and bounded") {
  SplitRng rng(17);
  auto store = testutil::random_store("tt", 25, 5, rng);
  std::vector<Token> tokens;
  for (std::size_t i = 0; i < store.size(); ++i)
    tokens.push_back(store.token_at(i));
  auto a = build_affinity(store, tokens);
  for (int i = 0; i < 25; ++i) {
    REQUIRE(a.values(i, i) == 1.0);
    for (int j = 0; j < 25; ++j) {
      REQUIRE(a.values(i, j) == a.values(j, i));  // exactly symmetric
      REQUIRE(a.values(i, j) >= 0.0);
      REQUIRE(a.values(i, j) <= 1.0);
    }
  }
}

TEST_CASE("affinity is invariant to uniform scaling of the input vectors") {
  SplitRng rng(29);
  auto store = testutil::random_store("tt", 20, 4, rng);
  WordVectorStore scaled(4);
  for (std::size_t i = 0; i < store.size(); ++i)
    scaled.insert(store.token_at(i), 3.7 * store.vector_at(i));
  std::vector<Token> tokens;
  for (std::size_t i = 0; i < store.size(); ++i)
    tokens.push_back(store.token_at(i));

  auto a = build_affinity(store, tokens);
  auto b = build_affinity(scaled, tokens);
  REQUIRE((a.values - b.values).cwiseAbs().maxCoeff() < 1e-12);

  ClusteringConfig cfg;
  REQUIRE(estimate_num_clusters(a, 8, cfg) == estimate_num_clusters(b, 8, cfg));
}

TEST_CASE("mncut recovers perfect blocks") {
  ClusteringConfig cfg;
  SECTION("two disconnected blocks") {
    auto a = block_affinity({4, 5}, 1.0, 0.0);
    auto got = mncut_spectral_cluster(a, 2, cfg);
    auto want = planted_labels({4, 5});
    ClusterAssignment planted{a.tokens, want, 2};
    REQUIRE(partition_of(got) == partition_of(planted));
  }
  SECTION("three noisy planted blocks") {
    SplitRng jitter(101);
    auto a = block_affinity({6, 7, 5}, 0.95, 0.02, &jitter);
    auto got = mncut_spectral_cluster(a, 3, cfg);
    ClusterAssignment planted{a.tokens, planted_labels({6, 7, 5}), 3};
    REQUIRE(partition_of(got) == partition_of(planted));
  }
  SECTION("K equal to n gives singletons") {
    auto a = block_affinity({3, 3}, 0.9, 0.1);
    auto got = mncut_spectral_cluster(a, 6, cfg);
    REQUIRE(got.num_clusters == 6);
    REQUIRE(partition_of(got).size() == 6);
  }
  SECTION("K out of range rejected") {
    auto a = block_affinity({3, 3}, 0.9, 0.1);
    REQUIRE_THROWS(mncut_spectral_cluster(a, 1, cfg));
    REQUIRE_THROWS(mncut_spectral_cluster(a, 7, cfg));
  }
}

TEST_CASE("mncut isolates degenerate rows as singletons") {
  // 2 connected blocks plus one point with zero affinity to everything
  auto a = block_affinity({3, 3, 1}, 1.0, 0.0);
  ClusteringConfig cfg;
  auto got = mncut_spectral_cluster(a, 3, cfg);
  auto parts = partition_of(got);
  REQUIRE(parts.size() == 3);
  REQUIRE(parts.count({"tt_v006"}) == 1);  // the isolated point
}

TEST_CASE("mncut with K=c on c components returns exactly the components") {
  auto a = block_affinity({4, 2, 5, 3}, 1.0, 0.0);
  ClusteringConfig cfg;
  auto got = mncut_spectral_cluster(a, 4, cfg);
  ClusterAssignment planted{a.tokens, planted_labels({4, 2, 5, 3}), 4};
  REQUIRE(partition_of(got) == partition_of(planted));
}

TEST_CASE("clustering is invariant to input permutation") {
  SplitRng jitter(7);
  auto a = block_affinity({5, 6, 4}, 0.92, 0.03, &jitter);
  ClusteringConfig cfg;
  auto base = mncut_spectral_cluster(a, 3, cfg);

  // permute rows/cols and tokens
  const int n = static_cast<int>(a.tokens.size());
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  SplitRng rng(55);
  rng.shuffle(perm);
  AffinityMatrix p;
  p.values = Eigen::MatrixXd(n, n);
  for (int i = 0; i < n; ++i) {
    p.tokens.push_back(a.tokens[static_cast<std::size_t>(
        perm[static_cast<std::size_t>(i)])]);
    for (int j = 0; j < n; ++j)
      p.values(i, j) = a.values(perm[static_cast<std::size_t>(i)],
                                perm[static_cast<std::size_t>(j)]);
  }
  auto permuted = mncut_spectral_cluster(p, 3, cfg);
  REQUIRE(partition_of(base) == partition_of(permuted));
}

TEST_CASE("estimate_num_clusters finds the planted count") {
  ClusteringConfig cfg;
  SECTION("perfect three blocks") {
    auto a = block_affinity({5, 6, 4}, 1.0, 0.0);
    REQUIRE(estimate_num_clusters(a, 8, cfg) == 3);
  }
  SECTION("all-ones affinity returns 2 with a degeneracy warning") {
    auto a = block_affinity({8}, 1.0, 1.0);
    auto est = estimate_num_clusters_detailed(a, 6, cfg);
    REQUIRE(est.k == 2);
    REQUIRE(est.degenerate);
    REQUIRE_FALSE(est.warnings.empty());
  }
  SECTION("gaussian blobs across several K") {
    for (int k : {2, 4, 6}) {
      SplitRng rng(1000 + static_cast<std::uint64_t>(k));
      auto [store, tokens] = oracles::axis_blobs(k, 20, 10.0, rng);
      auto a = build_affinity(store, tokens);
      REQUIRE(estimate_num_clusters(a, 10, cfg) == k);
    }
  }
  SECTION("input validation") {
    auto a = block_affinity({3, 3}, 1.0, 0.0);
    REQUIRE_THROWS(estimate_num_clusters(a, 1, cfg));
  }
}

TEST_CASE("kmeans groups well-separated points") {
  ClusteringConfig cfg;
  SECTION("K=1 gives one cluster") {
    std::vector<Eigen::VectorXd> pts{Eigen::Vector2d(0, 0),
                                     Eigen::Vector2d(1, 0),
                                     Eigen::Vector2d(0, 1)};
    auto got = kmeans_cluster(make_tokens(3), pts, 1, cfg);
    REQUIRE(got.num_clusters == 1);
    for (int l : got.labels) REQUIRE(l == 0);
  }
  SECTION("two separated pairs") {
    std::vector<Eigen::VectorXd> pts{
        Eigen::Vector2d(0, 0), Eigen::Vector2d(0.1, 0),
        Eigen::Vector2d(10, 10), Eigen::Vector2d(10.1, 10)};
    auto got = kmeans_cluster(make_tokens(4), pts, 2, cfg);
    REQUIRE(got.labels[0] == got.labels[1]);
    REQUIRE(got.labels[2] == got.labels[3]);
    REQUIRE(got.labels[0] != got.labels[2]);
  }
}

TEST_CASE("kmeans distortion never increases with more Lloyd iterations") {
  SplitRng rng(611);
  auto [store, tokens] = gaussian_blobs(3, 15, 6.0, 1.5, rng);
  std::vector<Eigen::VectorXd> pts;
  for (const auto& t : tokens) pts.push_back(store.vector(t));

  // same seed, single restart: iteration caps prefix-match the trajectory
  double prev = std::numeric_limits<double>::infinity();
  for (int iters = 1; iters <= 8; ++iters) {
    ClusteringConfig cfg;
    cfg.kmeans_restarts = 1;
    cfg.kmeans_max_iterations = iters;
    auto got = kmeans_cluster(make_tokens(static_cast<int>(pts.size())), pts,
                              3, cfg);
    // recompute distortion from the labeling
    std::map<int, Eigen::VectorXd> centroid;
    std::map<int, int> count;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      auto [it, fresh] = centroid.try_emplace(
          got.labels[i], Eigen::VectorXd::Zero(pts[i].size()));
      it->second += pts[i];
      ++count[got.labels[i]];
    }
    double d = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      d += (pts[i] - centroid.at(got.labels[i]) / count.at(got.labels[i]))
               .squaredNorm();
    REQUIRE(d <= prev + 1e-9);
    prev = d;
  }
}

TEST_CASE("more kmeans restarts never hurt") {
  SplitRng rng(612);
  auto [store, tokens] = gaussian_blobs(4, 10, 4.0, 2.0, rng);
  std::vector<Eigen::VectorXd> pts;
  for (const auto& t : tokens) pts.push_back(store.vector(t));

  auto distortion_of = [&](const ClusterAssignment& got) {
    std::map<int, Eigen::VectorXd> centroid;
    std::map<int, int> count;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      auto [it, fresh] = centroid.try_emplace(
          got.labels[i], Eigen::VectorXd::Zero(pts[i].size()));
      it->second += pts[i];
      ++count[got.labels[i]];
    }
    double d = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      d += (pts[i] - centroid.at(got.labels[i]) / count.at(got.labels[i]))
               .squaredNorm();
    return d;
  };

  ClusteringConfig one;
  one.kmeans_restarts = 1;
  ClusteringConfig many;
  many.kmeans_restarts = 10;
  auto tk = make_tokens(static_cast<int>(pts.size()));
  REQUIRE(distortion_of(kmeans_cluster(tk, pts, 4, many)) <=
          distortion_of(kmeans_cluster(tk, pts, 4, one)) + 1e-9);
}

TEST_CASE("ward agglomeration") {
  SECTION("K=n is the identity partition") {
    std::vector<Eigen::VectorXd> pts{Eigen::Vector2d(0, 0),
                                     Eigen::Vector2d(1, 0),
                                     Eigen::Vector2d(0, 1)};
    auto got = ward_cluster(make_tokens(3), pts, 3);
    REQUIRE(got.num_clusters == 3);
  }
  SECTION("two separated pairs") {
    std::vector<Eigen::VectorXd> pts{
        Eigen::Vector2d(0, 0), Eigen::Vector2d(0.1, 0),
        Eigen::Vector2d(10, 10), Eigen::Vector2d(10.1, 10)};
    auto got = ward_cluster(make_tokens(4), pts, 2);
    REQUIRE(got.labels[0] == got.labels[1]);
    REQUIRE(got.labels[2] == got.labels[3]);
    REQUIRE(got.labels[0] != got.labels[2]);
  }
  SECTION("K=1 merges everything") {
    std::vector<Eigen::VectorXd> pts{Eigen::Vector2d(0, 0),
                                     Eigen::Vector2d(5, 0),
                                     Eigen::Vector2d(0, 5)};
    auto got = ward_cluster(make_tokens(3), pts, 1);
    REQUIRE(got.num_clusters == 1);
  }
}

TEST_CASE("cluster files round-trip") {
  testutil::TempDir tmp;
  ClusterAssignment a{make_tokens(4), {0, 0, 1, 2}, 3};
  auto path = tmp.file("clusters.tsv");
  write_cluster_file(a, path, "mncut_spectral", 42);
  auto lines = read_lines(path);
  REQUIRE(lines[0] == "# algorithm: mncut_spectral");
  REQUIRE(lines[3] == "tt_v000\t0");
  auto back = read_cluster_file(path);
  REQUIRE(back.tokens.size() == 4);
  REQUIRE(back.labels == a.labels);
  REQUIRE(back.num_clusters == 3);
}
