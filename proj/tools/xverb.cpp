// Command-line front end for the cross-lingual verb-class induction
// pipeline. Subcommands:
//   run      execute one experiment from a config file
//   synth    generate a synthetic desk-scale experiment
//   compare  run several constraint variants on the same inputs
//   eval     score an existing clusters.tsv against a gold standard

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "xverb/pipeline.hpp"
#include "xverb/synthetic.hpp"

namespace {

struct RunOverrides {
  std::string variant;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<double> attract_margin;
  std::optional<double> reg_constant;
  std::optional<long long> batch_size;
  std::optional<long long> epochs;
  std::optional<double> learning_rate;
  std::optional<bool> squared_regulariser;
  std::string algorithm;
  std::optional<long long> clusters;
  std::optional<long long> k_max;
};

void apply_overrides(xverb::ExperimentConfig& cfg, const RunOverrides& ov) {
  if (!ov.variant.empty()) {
    auto v = xverb::variant_from_name(ov.variant);
    if (!v) throw std::runtime_error("unknown variant '" + ov.variant + "'");
    cfg.variant = *v;
  }
  if (ov.seed) cfg.seed = *ov.seed;
  if (!ov.out.empty()) cfg.output_dir = ov.out;
  if (ov.attract_margin) cfg.specialization.attract_margin = *ov.attract_margin;
  if (ov.reg_constant)
    cfg.specialization.regularization_constant = *ov.reg_constant;
  if (ov.batch_size)
    cfg.specialization.batch_size = static_cast<std::size_t>(*ov.batch_size);
  if (ov.epochs)
    cfg.specialization.epochs = static_cast<std::size_t>(*ov.epochs);
  if (ov.learning_rate) cfg.specialization.learning_rate = *ov.learning_rate;
  if (ov.squared_regulariser)
    cfg.specialization.squared_regularizer = *ov.squared_regulariser;
  if (!ov.algorithm.empty()) {
    auto a = xverb::algorithm_from_name(ov.algorithm);
    if (!a) throw std::runtime_error("unknown algorithm '" + ov.algorithm + "'");
    cfg.clustering.algorithm = *a;
  }
  if (ov.clusters) cfg.clustering.num_clusters = static_cast<int>(*ov.clusters);
  if (ov.k_max) cfg.clustering.k_max = static_cast<int>(*ov.k_max);
}

void add_override_flags(CLI::App* cmd, RunOverrides& ov,
                        bool with_seed_and_out = true) {
  cmd->add_option("--variant", ov.variant,
                  "constraint variant: distributional|mono_syn|xling|"
                  "xling_verbnet");
  if (with_seed_and_out) {
    cmd->add_option("--seed", ov.seed, "master random seed");
    cmd->add_option("--out", ov.out, "output directory");
  }
  cmd->add_option("--attract-margin", ov.attract_margin);
  cmd->add_option("--reg-constant", ov.reg_constant);
  cmd->add_option("--batch-size", ov.batch_size);
  cmd->add_option("--epochs", ov.epochs);
  cmd->add_option("--learning-rate", ov.learning_rate);
  cmd->add_option("--squared-regulariser", ov.squared_regulariser);
  cmd->add_option("--algorithm", ov.algorithm,
                  "clustering algorithm: mncut_spectral|kmeans|ward");
  cmd->add_option("--clusters", ov.clusters,
                  "fixed cluster count (omit to self-tune)");
  cmd->add_option("--k-max", ov.k_max, "upper bound for self-tuned K");
}

int cmd_run(const std::string& config_path, const RunOverrides& ov) {
  auto cfg = xverb::load_experiment_config(config_path);
  apply_overrides(cfg, ov);
  auto result = xverb::run_experiment(cfg);
  std::cout << "variant " << xverb::variant_name(cfg.variant) << ": f1="
            << result.report.f1 << " mpur=" << result.report.mpur
            << " wacc=" << result.report.wacc
            << " coverage=" << result.report.coverage
            << " clusters=" << result.report.num_clusters
            << (result.k_estimated ? " (self-tuned)" : "") << '\n';
  std::cout << "report: " << result.report_path.string() << '\n';
  return 0;
}

int cmd_synth(const xverb::SyntheticSpec& spec, const std::string& out,
              bool run_after, const RunOverrides& ov) {
  auto synth = xverb::run_synthetic(spec, out);
  std::cout << "generated synthetic experiment under " << out << '\n';
  std::cout << "config: " << (std::filesystem::path(out) / "experiment.config")
            << '\n';
  if (run_after) {
    auto cfg = synth.config;
    apply_overrides(cfg, ov);
    auto result = xverb::run_experiment(cfg);
    std::cout << "variant " << xverb::variant_name(cfg.variant)
              << ": f1=" << result.report.f1 << " mpur=" << result.report.mpur
              << " wacc=" << result.report.wacc << '\n';
  }
  return 0;
}

int cmd_compare(const std::string& config_path,
                const std::vector<std::string>& variant_names,
                const RunOverrides& ov) {
  auto cfg = xverb::load_experiment_config(config_path);
  apply_overrides(cfg, ov);
  std::vector<xverb::Variant> variants;
  for (const auto& name : variant_names) {
    auto v = xverb::variant_from_name(name);
    if (!v) throw std::runtime_error("unknown variant '" + name + "'");
    variants.push_back(*v);
  }
  auto rows = xverb::compare_variants(cfg, variants);
  auto table = xverb::variant_table(rows);
  std::cout << table;
  std::filesystem::create_directories(cfg.output_dir);
  std::ofstream out(cfg.output_dir / "compare.tsv");
  if (!out) throw std::runtime_error("cannot write compare.tsv");
  out << table;
  return 0;
}

int cmd_eval(const std::string& clusters_path, const std::string& gold_path,
             std::string tag, const std::string& vectors_path,
             const std::string& similarity_path,
             const std::string& denominator) {
  auto assignment = xverb::read_cluster_file(clusters_path);
  if (tag.empty()) {
    std::set<std::string> langs;
    for (const auto& t : assignment.tokens) langs.insert(t.language);
    if (langs.size() != 1)
      throw std::runtime_error(
          "cannot infer gold language from cluster file; pass --tag");
    tag = *langs.begin();
  }
  auto gold = xverb::load_gold_standard(gold_path, xverb::LanguageTag(tag));
  auto mode = denominator == "clustered" ? xverb::Denominator::clustered
                                         : xverb::Denominator::all_gold;

  xverb::EvalReport report;
  std::optional<xverb::WordVectorStore> store;
  if (!vectors_path.empty()) {
    store = xverb::load_joint_space(vectors_path);
    report = xverb::evaluate(assignment, gold, *store, mode);
  } else {
    report = xverb::evaluate(assignment, gold, mode);
  }
  auto json = xverb::report_to_json(report);

  if (!similarity_path.empty()) {
    if (!store)
      throw std::runtime_error("--similarity requires --vectors");
    auto dataset = xverb::load_similarity_dataset(similarity_path,
                                                  xverb::LanguageTag(tag));
    auto rho = xverb::spearman_similarity_detailed(*store, dataset);
    json["spearman"] = {{"rho", rho.rho},
                        {"scored_pairs", rho.scored_pairs},
                        {"skipped_pairs", rho.skipped_pairs}};
  }
  std::cout << json.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cross-lingual verb class induction via vector space "
               "specialisation"};
  app.require_subcommand(1);

  // run
  std::string run_config;
  RunOverrides run_ov;
  auto* run = app.add_subcommand("run", "run one experiment");
  run->add_option("--config", run_config, "experiment config file")
      ->required();
  add_override_flags(run, run_ov);

  // synth
  xverb::SyntheticSpec spec;
  std::string synth_out;
  bool synth_run = false;
  RunOverrides synth_ov;
  auto* synth = app.add_subcommand("synth", "generate synthetic experiment");
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--classes", spec.num_classes);
  synth->add_option("--verbs-per-class", spec.verbs_per_class);
  synth->add_option("--dimension", spec.dimension);
  synth->add_option("--source-tightness", spec.source_tightness);
  synth->add_option("--target-noise", spec.target_noise);
  synth->add_option("--coverage", spec.dictionary_coverage);
  synth->add_option("--seed", spec.seed);
  synth->add_flag("--run", synth_run, "run the generated experiment");
  add_override_flags(synth, synth_ov, /*with_seed_and_out=*/false);

  // compare
  std::string compare_config;
  std::vector<std::string> compare_variants;
  RunOverrides compare_ov;
  auto* compare = app.add_subcommand("compare", "compare constraint variants");
  compare->add_option("--config", compare_config)->required();
  compare->add_option("--variants", compare_variants, "variants to run")
      ->required()
      ->delimiter(',');
  add_override_flags(compare, compare_ov);

  // eval
  std::string eval_clusters, eval_gold, eval_tag, eval_vectors,
      eval_similarity, eval_denominator = "all_gold";
  auto* eval = app.add_subcommand("eval", "score an existing clustering");
  eval->add_option("--clusters", eval_clusters, "clusters.tsv")->required();
  eval->add_option("--gold", eval_gold, "gold standard file")->required();
  eval->add_option("--tag", eval_tag, "gold language tag");
  eval->add_option("--vectors", eval_vectors,
                   "joint-space vector file (enables coverage and "
                   "--similarity)");
  eval->add_option("--similarity", eval_similarity,
                   "similarity dataset for spearman correlation");
  eval->add_option("--denominator", eval_denominator,
                   "all_gold (default) or clustered");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_config, run_ov);
    if (synth->parsed()) {
      // seed flows into the generated config unless overridden separately
      synth_ov.seed = synth_ov.seed ? synth_ov.seed
                                    : std::optional<std::uint64_t>(spec.seed);
      return cmd_synth(spec, synth_out, synth_run, synth_ov);
    }
    if (compare->parsed())
      return cmd_compare(compare_config, compare_variants, compare_ov);
    if (eval->parsed())
      return cmd_eval(eval_clusters, eval_gold, eval_tag, eval_vectors,
                      eval_similarity, eval_denominator);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
