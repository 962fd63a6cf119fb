#pragma once
// End-to-end experiment driver: load per-language vector files, build the
// requested constraint variant, specialise the joint space, cluster the
// target verbs and score them against the gold standard. Every run writes
// clusters.tsv, report.json, a manifest with input checksums and resolved
// parameters, and (when specialisation ran) a training log.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "xverb/clustering.hpp"
#include "xverb/constraints.hpp"
#include "xverb/embedding.hpp"
#include "xverb/evaluation.hpp"
#include "xverb/specializer.hpp"
#include "xverb/util.hpp"

namespace xverb {

enum class Variant { distributional, mono_syn, xling, xling_verbnet };

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::distributional: return "distributional";
    case Variant::mono_syn: return "mono_syn";
    case Variant::xling: return "xling";
    case Variant::xling_verbnet: return "xling_verbnet";
  }
  return "?";
}

inline std::optional<Variant> variant_from_name(const std::string& s) {
  if (s == "distributional") return Variant::distributional;
  if (s == "mono_syn") return Variant::mono_syn;
  if (s == "xling") return Variant::xling;
  if (s == "xling_verbnet") return Variant::xling_verbnet;
  return std::nullopt;
}

struct TaggedPath {
  std::string tag;  // language code
  std::filesystem::path path;
};

struct DictionarySpec {
  std::string source_tag;
  std::string target_tag;
  std::filesystem::path path;
};

struct ExperimentConfig {
  TaggedPath source_vectors;
  std::vector<TaggedPath> target_vectors;
  std::optional<TaggedPath> lexicon;        // verb classes, source language
  std::vector<DictionarySpec> dictionaries;
  std::vector<TaggedPath> synonyms;         // target-language synsets
  TaggedPath gold;
  Variant variant = Variant::distributional;
  SpecializationConfig specialization;
  ClusteringConfig clustering;
  Denominator denominator = Denominator::all_gold;
  bool exclude_test_verbs = false;       // drop constraints touching gold verbs
  bool cluster_full_vocabulary = false;  // cluster all target-language tokens
  bool dump_constraints_file = false;
  std::filesystem::path output_dir;
  std::uint64_t seed = 1;

  void validate() const {
    if (source_vectors.path.empty())
      throw std::invalid_argument("missing source vector path");
    if (target_vectors.empty())
      throw std::invalid_argument("missing target vector path");
    if (gold.path.empty()) throw std::invalid_argument("missing gold path");
    if (output_dir.empty())
      throw std::invalid_argument("missing output directory");
    const bool has_dict = !dictionaries.empty();
    const bool has_lex = lexicon.has_value();
    const bool has_syn = !synonyms.empty();
    switch (variant) {
      case Variant::distributional:
        break;  // needs no lexical resources
      case Variant::mono_syn:
        if (!has_syn)
          throw std::invalid_argument("variant mono_syn requires a synonym file");
        break;
      case Variant::xling:
        if (!has_dict)
          throw std::invalid_argument("variant xling requires a dictionary");
        break;
      case Variant::xling_verbnet:
        if (!has_dict || !has_lex)
          throw std::invalid_argument(
              "variant xling_verbnet requires both a dictionary and a "
              "verb-class lexicon");
        break;
    }
  }
};

struct ExperimentResult {
  EvalReport report;
  ClusterAssignment assignment;
  int clusters_used = 0;
  bool k_estimated = false;
  nlohmann::ordered_json manifest;
  std::filesystem::path report_path;
  std::filesystem::path clusters_path;
  std::filesystem::path manifest_path;
};

namespace detail {

template <class Fn>
auto run_stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw std::runtime_error("stage " + name + ": " + e.what());
  }
}

inline nlohmann::ordered_json input_entry(const std::filesystem::path& p) {
  return {{"path", p.string()}, {"fnv1a64", file_checksum_hex(p)}};
}

inline nlohmann::ordered_json provenance_counts(const ConstraintSet& set) {
  nlohmann::ordered_json j;
  for (auto p : kAllProvenances) j[provenance_name(p)] = set.count(p);
  j["total"] = set.size();
  return j;
}

}  // namespace detail

// Executes the full transfer pipeline for one variant. Deterministic given
// the seed: reruns produce byte-identical cluster files and reports.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  detail::run_stage("validate", [&] { config.validate(); return 0; });

  nlohmann::ordered_json manifest;
  manifest["tool"] = "xverb";
  manifest["variant"] = variant_name(config.variant);
  manifest["seed"] = config.seed;
  std::vector<std::string> stages;

  // load + merge + normalize
  WordVectorStore space = detail::run_stage("load_vectors", [&] {
    std::vector<WordVectorStore> stores;
    stores.push_back(load_word_vectors(config.source_vectors.path,
                                       LanguageTag(config.source_vectors.tag)));
    for (const auto& t : config.target_vectors)
      stores.push_back(load_word_vectors(t.path, LanguageTag(t.tag)));
    return merge_stores(stores);
  });
  stages.push_back("load_vectors");
  stages.push_back("merge");
  space = detail::run_stage("normalize", [&] { return unit_normalize(space); });
  stages.push_back("normalize");

  manifest["inputs"]["source_vectors"] =
      detail::input_entry(config.source_vectors.path);
  manifest["inputs"]["target_vectors"] = nlohmann::ordered_json::array();
  for (const auto& t : config.target_vectors)
    manifest["inputs"]["target_vectors"].push_back(detail::input_entry(t.path));

  // gold standard (needed early for the overlap count / exclusion switch)
  GoldStandard gold = detail::run_stage("load_gold", [&] {
    return load_gold_standard(config.gold.path, LanguageTag(config.gold.tag));
  });
  manifest["inputs"]["gold"] = detail::input_entry(config.gold.path);

  // constraints
  ConstraintSet built;
  const bool specialisation_enabled =
      config.variant != Variant::distributional;
  if (specialisation_enabled) {
    built = detail::run_stage("constraints", [&] {
      std::vector<ConstraintSet> sets;
      if (config.variant == Variant::mono_syn) {
        for (const auto& s : config.synonyms)
          sets.push_back(pairs_from_synonyms(load_synsets(s.path),
                                             LanguageTag(s.tag)));
      }
      if (config.variant == Variant::xling ||
          config.variant == Variant::xling_verbnet) {
        for (const auto& d : config.dictionaries)
          sets.push_back(pairs_from_dictionary(
              load_dictionary(d.path, LanguageTag(d.source_tag),
                              LanguageTag(d.target_tag))));
      }
      if (config.variant == Variant::xling_verbnet)
        sets.push_back(pairs_from_verb_classes(load_verb_class_lexicon(
            config.lexicon->path, LanguageTag(config.lexicon->tag))));
      return union_of(sets);
    });
    stages.push_back("constraints");
    if (config.lexicon)
      manifest["inputs"]["lexicon"] = detail::input_entry(config.lexicon->path);
    manifest["inputs"]["dictionaries"] = nlohmann::ordered_json::array();
    for (const auto& d : config.dictionaries)
      manifest["inputs"]["dictionaries"].push_back(
          detail::input_entry(d.path));
    manifest["inputs"]["synonyms"] = nlohmann::ordered_json::array();
    for (const auto& s : config.synonyms)
      manifest["inputs"]["synonyms"].push_back(detail::input_entry(s.path));
  }

  auto filter = detail::run_stage("filter", [&] {
    return filter_by_vocabulary(built, space);
  });
  if (specialisation_enabled) stages.push_back("filter");

  // overlap between constraint words and gold test verbs
  std::size_t overlap = 0;
  ConstraintSet training_set;
  for (const auto& pair : filter.retained.pairs()) {
    bool touches = gold.membership.count(pair.left.rendered()) > 0 ||
                   gold.membership.count(pair.right.rendered()) > 0;
    if (touches) ++overlap;
    if (!(config.exclude_test_verbs && touches))
      training_set.add_pair(pair);
  }

  manifest["constraints"]["built"] = detail::provenance_counts(built);
  manifest["constraints"]["after_vocab_filter"] =
      detail::provenance_counts(filter.retained);
  manifest["constraints"]["dropped_out_of_vocabulary"] = filter.dropped_total;
  manifest["constraints"]["test_verb_overlap_pairs"] = overlap;
  manifest["constraints"]["excluded_test_verb_pairs"] =
      config.exclude_test_verbs ? overlap : 0;
  manifest["constraints"]["used_for_training"] = training_set.size();

  // specialise
  std::vector<EpochLog> train_log;
  SpecializationConfig spec_config = config.specialization;
  spec_config.rng_seed = SplitRng::derive_seed(config.seed, 101);
  if (specialisation_enabled) {
    auto result = detail::run_stage("specialize", [&] {
      return specialize_with_log(space, training_set, spec_config);
    });
    space = std::move(result.store);
    train_log = std::move(result.log);
    stages.push_back("specialize");
  }

  // pick the tokens to cluster: gold verbs found in the vocabulary, or the
  // full target-language vocabulary when asked
  std::vector<Token> cluster_tokens = detail::run_stage("select_verbs", [&] {
    std::vector<Token> tokens;
    if (config.cluster_full_vocabulary) {
      for (std::size_t i = 0; i < space.size(); ++i)
        if (space.token_at(i).language == config.gold.tag)
          tokens.push_back(space.token_at(i));
    } else {
      for (const auto& [id, members] : gold.classes)
        for (const auto& t : members)
          if (space.contains(t)) tokens.push_back(t);
    }
    if (tokens.size() < 2)
      throw std::runtime_error(
          "fewer than 2 verbs available for clustering (vocabulary coverage "
          "too low?)");
    return tokens;
  });
  stages.push_back("select_verbs");

  auto affinity = detail::run_stage("affinity", [&] {
    return build_affinity(space, cluster_tokens,
                          config.clustering.local_scale_neighbor);
  });
  stages.push_back("affinity");

  ClusteringConfig clust_config = config.clustering;
  clust_config.rng_seed = SplitRng::derive_seed(config.seed, 202);

  int k = 0;
  bool k_estimated = false;
  ClusterCountEstimate estimate;
  if (config.clustering.num_clusters) {
    k = *config.clustering.num_clusters;
    if (k < 1 || static_cast<std::size_t>(k) > cluster_tokens.size())
      throw std::runtime_error("stage estimate_k: fixed K out of range");
  } else {
    estimate = detail::run_stage("estimate_k", [&] {
      int k_max = std::min<int>(clust_config.k_max,
                                static_cast<int>(cluster_tokens.size()));
      return estimate_num_clusters_detailed(affinity, k_max, clust_config);
    });
    k = estimate.k;
    k_estimated = true;
    stages.push_back("estimate_k");
  }

  ClusterAssignment assignment = detail::run_stage("cluster", [&] {
    switch (clust_config.algorithm) {
      case ClusteringConfig::Algorithm::mncut_spectral:
        return mncut_spectral_cluster(affinity, k, clust_config);
      case ClusteringConfig::Algorithm::kmeans: {
        std::vector<Eigen::VectorXd> points;
        for (const auto& t : cluster_tokens) points.push_back(space.vector(t));
        return kmeans_cluster(cluster_tokens, points, k, clust_config);
      }
      case ClusteringConfig::Algorithm::ward: {
        std::vector<Eigen::VectorXd> points;
        for (const auto& t : cluster_tokens) points.push_back(space.vector(t));
        return ward_cluster(cluster_tokens, points, k);
      }
    }
    throw std::logic_error("unknown clustering algorithm");
  });
  stages.push_back("cluster");

  EvalReport report = detail::run_stage("evaluate", [&] {
    return evaluate(assignment, gold, space, config.denominator);
  });
  stages.push_back("evaluate");

  // outputs
  ExperimentResult result;
  detail::run_stage("write_outputs", [&] {
    fs::create_directories(config.output_dir);
    save_joint_space(space, config.output_dir / "vectors" / "space.vec");
    result.clusters_path = config.output_dir / "clusters.tsv";
    write_cluster_file(assignment, result.clusters_path,
                       algorithm_name(clust_config.algorithm),
                       config.seed);
    if (specialisation_enabled) {
      std::ofstream log(config.output_dir / "train.log");
      if (!log) throw std::runtime_error("cannot write train.log");
      for (const auto& e : train_log)
        log << e.epoch << '\t' << format_g17(e.mean_batch_cost) << '\t'
            << format_g17(e.active_hinge_fraction) << '\n';
    }
    if (config.dump_constraints_file)
      dump_constraints(training_set, config.output_dir / "constraints.tsv");

    result.report_path = config.output_dir / "report.json";
    std::ofstream rep(result.report_path);
    if (!rep) throw std::runtime_error("cannot write report.json");
    rep << report_to_json(report).dump(2) << '\n';
    return 0;
  });
  stages.push_back("write_outputs");

  manifest["stages"] = stages;
  manifest["config"]["variant"] = variant_name(config.variant);
  manifest["config"]["seed"] = config.seed;
  manifest["config"]["denominator"] =
      config.denominator == Denominator::all_gold ? "all_gold" : "clustered";
  manifest["config"]["exclude_test_verbs"] = config.exclude_test_verbs;
  manifest["config"]["cluster_full_vocabulary"] =
      config.cluster_full_vocabulary;
  manifest["config"]["specialization"] = {
      {"attract_margin", spec_config.attract_margin},
      {"regularization_constant", spec_config.regularization_constant},
      {"batch_size", spec_config.batch_size},
      {"epochs", spec_config.epochs},
      {"learning_rate", spec_config.learning_rate},
      {"rng_seed", spec_config.rng_seed},
      {"squared_regularizer", spec_config.squared_regularizer},
      {"renormalize_each_epoch", spec_config.renormalize_each_epoch},
      {"adagrad_epsilon", spec_config.adagrad_epsilon},
      {"enabled", specialisation_enabled}};
  manifest["config"]["clustering"] = {
      {"algorithm", algorithm_name(clust_config.algorithm)},
      {"requested_clusters",
       config.clustering.num_clusters
           ? nlohmann::ordered_json(*config.clustering.num_clusters)
           : nlohmann::ordered_json(nullptr)},
      {"k_max", clust_config.k_max},
      {"local_scale_neighbor", clust_config.local_scale_neighbor},
      {"kmeans_restarts", clust_config.kmeans_restarts},
      {"kmeans_max_iterations", clust_config.kmeans_max_iterations},
      {"rng_seed", clust_config.rng_seed}};
  manifest["clustering"]["k"] = k;
  manifest["clustering"]["k_estimated"] = k_estimated;
  if (k_estimated) {
    manifest["clustering"]["k_costs"] = estimate.costs;
    manifest["clustering"]["degenerate_affinity"] = estimate.degenerate;
    for (const auto& w : estimate.warnings)
      manifest["warnings"].push_back(w);
  }
  manifest["results"] = {{"mpur", report.mpur},
                         {"wacc", report.wacc},
                         {"f1", report.f1},
                         {"coverage", report.coverage},
                         {"num_clusters", report.num_clusters}};
  manifest["outputs"] = {
      {"vectors", (config.output_dir / "vectors" / "space.vec").string()},
      {"clusters", result.clusters_path.string()},
      {"report", result.report_path.string()}};
  if (specialisation_enabled)
    manifest["outputs"]["train_log"] =
        (config.output_dir / "train.log").string();

  result.manifest_path = config.output_dir / "manifest.json";
  {
    std::ofstream mf(result.manifest_path);
    if (!mf) throw std::runtime_error("cannot write manifest.json");
    mf << manifest.dump(2) << '\n';
  }

  result.report = std::move(report);
  result.assignment = std::move(assignment);
  result.clusters_used = k;
  result.k_estimated = k_estimated;
  result.manifest = std::move(manifest);
  return result;
}

struct VariantRow {
  Variant variant;
  EvalReport report;
};

// Runs each requested variant on identical inputs and seed; rows come back
// in the requested order. Results land in per-variant subdirectories.
inline std::vector<VariantRow> compare_variants(
    const ExperimentConfig& config, const std::vector<Variant>& variants) {
  if (variants.empty())
    throw std::invalid_argument("compare_variants: no variants requested");
  std::set<Variant> seen;
  for (auto v : variants)
    if (!seen.insert(v).second)
      throw std::invalid_argument(std::string("duplicate variant: ") +
                                  variant_name(v));
  std::vector<VariantRow> rows;
  for (auto v : variants) {
    ExperimentConfig cfg = config;
    cfg.variant = v;
    cfg.output_dir = config.output_dir / variant_name(v);
    rows.push_back({v, run_experiment(cfg).report});
  }
  return rows;
}

inline std::string variant_table(const std::vector<VariantRow>& rows) {
  std::string out = "variant\tf1\tmpur\twacc\tcoverage\tnum_clusters\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s\t%.4f\t%.4f\t%.4f\t%.4f\t%d\n",
                  variant_name(r.variant), r.report.f1, r.report.mpur,
                  r.report.wacc, r.report.coverage, r.report.num_clusters);
    out += buf;
  }
  return out;
}

// ---- flat key-value config files ---------------------------------------
// "key = value" lines, '#' comments. Multi-valued keys repeat. Tagged paths
// use "tag:path"; dictionaries use "srctag:tgttag:path". Relative paths are
// resolved against the config file's directory.

namespace detail {

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::runtime_error("config key '" + key + "': expected boolean, got '" +
                           v + "'");
}

inline TaggedPath parse_tagged(const std::string& v,
                               const std::filesystem::path& base,
                               const std::string& key) {
  auto pos = v.find(':');
  if (pos == std::string::npos || pos == 0 || pos + 1 >= v.size())
    throw std::runtime_error("config key '" + key + "': expected 'tag:path'");
  std::filesystem::path p = trim(v.substr(pos + 1));
  if (p.is_relative()) p = base / p;
  return {trim(v.substr(0, pos)), p};
}

inline DictionarySpec parse_dictionary(const std::string& v,
                                       const std::filesystem::path& base) {
  auto parts = split_on(v, ':');
  if (parts.size() != 3)
    throw std::runtime_error(
        "config key 'dictionary': expected 'srctag:tgttag:path'");
  std::filesystem::path p = trim(parts[2]);
  if (p.is_relative()) p = base / p;
  return {trim(parts[0]), trim(parts[1]), p};
}

}  // namespace detail

inline ExperimentConfig load_experiment_config(
    const std::filesystem::path& path) {
  ExperimentConfig cfg;
  const auto base = path.has_parent_path()
                        ? path.parent_path()
                        : std::filesystem::path(".");
  auto lines = read_lines(path);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    auto line = trim(lines[li]);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path.string() + ": line " +
                               std::to_string(li + 1) +
                               ": expected 'key = value'");
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    auto fail = [&](const std::string& msg) -> std::runtime_error {
      return std::runtime_error(path.string() + ": line " +
                                std::to_string(li + 1) + ": " + msg);
    };
    try {
      if (key == "source-vectors") {
        cfg.source_vectors = detail::parse_tagged(value, base, key);
      } else if (key == "target-vectors") {
        cfg.target_vectors.push_back(detail::parse_tagged(value, base, key));
      } else if (key == "lexicon") {
        cfg.lexicon = detail::parse_tagged(value, base, key);
      } else if (key == "dictionary") {
        cfg.dictionaries.push_back(detail::parse_dictionary(value, base));
      } else if (key == "synonyms") {
        cfg.synonyms.push_back(detail::parse_tagged(value, base, key));
      } else if (key == "gold") {
        cfg.gold = detail::parse_tagged(value, base, key);
      } else if (key == "variant") {
        auto v = variant_from_name(value);
        if (!v) throw fail("unknown variant '" + value + "'");
        cfg.variant = *v;
      } else if (key == "out") {
        std::filesystem::path p = value;
        cfg.output_dir = p.is_relative() ? base / p : p;
      } else if (key == "seed") {
        long long s;
        if (!parse_long(value, s)) throw fail("bad seed");
        cfg.seed = static_cast<std::uint64_t>(s);
      } else if (key == "attract-margin") {
        if (!parse_double(value, cfg.specialization.attract_margin))
          throw fail("bad number");
      } else if (key == "reg-constant") {
        if (!parse_double(value, cfg.specialization.regularization_constant))
          throw fail("bad number");
      } else if (key == "batch-size") {
        long long v;
        if (!parse_long(value, v) || v < 2) throw fail("bad batch size");
        cfg.specialization.batch_size = static_cast<std::size_t>(v);
      } else if (key == "epochs") {
        long long v;
        if (!parse_long(value, v) || v < 0) throw fail("bad epoch count");
        cfg.specialization.epochs = static_cast<std::size_t>(v);
      } else if (key == "learning-rate") {
        if (!parse_double(value, cfg.specialization.learning_rate) ||
            cfg.specialization.learning_rate <= 0)
          throw fail("bad learning rate");
      } else if (key == "squared-regulariser") {
        cfg.specialization.squared_regularizer =
            detail::parse_bool(value, key);
      } else if (key == "renormalize") {
        cfg.specialization.renormalize_each_epoch =
            detail::parse_bool(value, key);
      } else if (key == "adagrad-epsilon") {
        if (!parse_double(value, cfg.specialization.adagrad_epsilon))
          throw fail("bad number");
      } else if (key == "algorithm") {
        auto a = algorithm_from_name(value);
        if (!a) throw fail("unknown algorithm '" + value + "'");
        cfg.clustering.algorithm = *a;
      } else if (key == "clusters") {
        long long v;
        if (!parse_long(value, v) || v < 1) throw fail("bad cluster count");
        cfg.clustering.num_clusters = static_cast<int>(v);
      } else if (key == "k-max") {
        long long v;
        if (!parse_long(value, v) || v < 2) throw fail("bad k-max");
        cfg.clustering.k_max = static_cast<int>(v);
      } else if (key == "local-scale-neighbor") {
        long long v;
        if (!parse_long(value, v) || v < 1) throw fail("bad neighbor index");
        cfg.clustering.local_scale_neighbor = static_cast<int>(v);
      } else if (key == "kmeans-restarts") {
        long long v;
        if (!parse_long(value, v) || v < 1) throw fail("bad restart count");
        cfg.clustering.kmeans_restarts = static_cast<int>(v);
      } else if (key == "kmeans-iterations") {
        long long v;
        if (!parse_long(value, v) || v < 1) throw fail("bad iteration cap");
        cfg.clustering.kmeans_max_iterations = static_cast<int>(v);
      } else if (key == "denominator") {
        if (value == "all_gold")
          cfg.denominator = Denominator::all_gold;
        else if (value == "clustered")
          cfg.denominator = Denominator::clustered;
        else
          throw fail("denominator must be all_gold or clustered");
      } else if (key == "exclude-test-verbs") {
        cfg.exclude_test_verbs = detail::parse_bool(value, key);
      } else if (key == "cluster-full-vocabulary") {
        cfg.cluster_full_vocabulary = detail::parse_bool(value, key);
      } else if (key == "dump-constraints") {
        cfg.dump_constraints_file = detail::parse_bool(value, key);
      } else {
        throw fail("unknown config key '" + key + "'");
      }
    } catch (const std::runtime_error&) {
      throw;
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ": line " +
                               std::to_string(li + 1) + ": " + e.what());
    }
  }
  return cfg;
}

inline void save_experiment_config(const ExperimentConfig& cfg,
                                   const std::filesystem::path& path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << "source-vectors = " << cfg.source_vectors.tag << ':'
      << cfg.source_vectors.path.string() << '\n';
  for (const auto& t : cfg.target_vectors)
    out << "target-vectors = " << t.tag << ':' << t.path.string() << '\n';
  if (cfg.lexicon)
    out << "lexicon = " << cfg.lexicon->tag << ':'
        << cfg.lexicon->path.string() << '\n';
  for (const auto& d : cfg.dictionaries)
    out << "dictionary = " << d.source_tag << ':' << d.target_tag << ':'
        << d.path.string() << '\n';
  for (const auto& s : cfg.synonyms)
    out << "synonyms = " << s.tag << ':' << s.path.string() << '\n';
  out << "gold = " << cfg.gold.tag << ':' << cfg.gold.path.string() << '\n';
  out << "variant = " << variant_name(cfg.variant) << '\n';
  out << "out = " << cfg.output_dir.string() << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "attract-margin = " << format_g17(cfg.specialization.attract_margin)
      << '\n';
  out << "reg-constant = "
      << format_g17(cfg.specialization.regularization_constant) << '\n';
  out << "batch-size = " << cfg.specialization.batch_size << '\n';
  out << "epochs = " << cfg.specialization.epochs << '\n';
  out << "learning-rate = " << format_g17(cfg.specialization.learning_rate)
      << '\n';
  out << "squared-regulariser = "
      << (cfg.specialization.squared_regularizer ? "true" : "false") << '\n';
  out << "renormalize = "
      << (cfg.specialization.renormalize_each_epoch ? "true" : "false")
      << '\n';
  out << "algorithm = " << algorithm_name(cfg.clustering.algorithm) << '\n';
  if (cfg.clustering.num_clusters)
    out << "clusters = " << *cfg.clustering.num_clusters << '\n';
  out << "k-max = " << cfg.clustering.k_max << '\n';
  out << "local-scale-neighbor = " << cfg.clustering.local_scale_neighbor
      << '\n';
  out << "kmeans-restarts = " << cfg.clustering.kmeans_restarts << '\n';
  out << "kmeans-iterations = " << cfg.clustering.kmeans_max_iterations
      << '\n';
  out << "denominator = "
      << (cfg.denominator == Denominator::all_gold ? "all_gold" : "clustered")
      << '\n';
  out << "exclude-test-verbs = " << (cfg.exclude_test_verbs ? "true" : "false")
      << '\n';
  out << "cluster-full-vocabulary = "
      << (cfg.cluster_full_vocabulary ? "true" : "false") << '\n';
  out << "dump-constraints = "
      << (cfg.dump_constraints_file ? "true" : "false") << '\n';
}

}  // namespace xverb
