#pragma once

// Batch experiment front-end wiring scenario synthesis, variant production,
// judge scoring, metrics reduction, and table emission into reproducible
// runs.
//
// Seed discipline: every random stream derives from the master seed plus
// structural coordinates,
//
//   derive_seed(master, {stage_tag, seed_index, n, quality_index,
//                        hash(family_name), version, hash(judge_name)})
//
// with hashed stage/family/judge names instead of list positions, so adding
// a judge or family leaves every other stream untouched. No wall-clock
// seeding anywhere.
//
// Determinism: unit work may run on several worker threads, but records are
// assembled in canonical unit order and every stream is coordinate-derived,
// so all outputs are byte-identical across runs and across worker counts.
// config_hash covers the experiment identity fields only (not out_dir or
// workers): equal hashes reproduce byte-identical CSV/JSONL outputs.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"
#include "rewardlab/calibration.hpp"
#include "rewardlab/grpo_signal.hpp"
#include "rewardlab/judges.hpp"
#include "rewardlab/metrics.hpp"
#include "rewardlab/noise_model.hpp"
#include "rewardlab/variant_engine.hpp"

namespace rewardlab {

// Scalar noise profile; materialized per stakeholder count by broadcasting
// sigma_delta.
struct NoiseProfileSpec {
  double sigma_delta = 0.0;
  double sigma_eta = 0.0;
  double sigma_eps = 0.0;
  double kappa = 0.0;      // presentation sensitivity
  double flip_prob = 0.0;  // checklist repeat-flip probability

  JudgeNoiseProfile materialize(Eigen::Index n) const;
};

struct JudgeSpec {
  std::string name;  // record tag; also the judge's seed-stream identity
  JudgeKind kind = JudgeKind::direct;
  std::string profile;  // key into ExperimentConfig::profiles
};

struct ExperimentConfig {
  std::string scenario = "desk";  // base-scenario catalog
  std::vector<JudgeSpec> judges;
  std::map<std::string, NoiseProfileSpec> profiles;
  std::vector<int> n_list;
  std::vector<QualityBand> qualities;
  int seeds = 5;                 // base scenarios drawn from the catalog
  int variants_per_family = 5;  // versions requested per family
  int repeats = 5;              // exact-repeat scorings of the base text
  std::string out_dir;          // empty: nothing is written to disk
  std::uint64_t master_seed = 0;
  int workers = 1;

  // Throws Error(validation) with a field path ("n_list[1]: ...").
  void validate() const;
};

// Desk-scale defaults: 5 scenarios x n in {2,3,5,8} x {medium,high}, all
// five judges on the "base" profile, 5 versions per family + 5 repeats.
ExperimentConfig default_config();

// JSON ingest/emit. master_seed is required on ingest (no implicit
// clock-derived fallback); out_dir and workers are optional run controls.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// Hash of the experiment identity (everything except out_dir/workers).
std::uint64_t config_hash(const ExperimentConfig& cfg);

// One scorable base scenario: latent ground truth plus its base document.
struct ScenarioUnit {
  std::string seed_id;
  int n = 2;
  QualityBand quality = QualityBand::medium;
  LatentPlanState state;  // presentation_seed filled per scored document
  PlanDoc doc;
};

// Deterministic synthesis of seeds x n_list x qualities units, in canonical
// order. Utility/quality/checklist levels depend on the quality band; the
// document carries enough structure that every rule family applies for
// n >= 3.
std::vector<ScenarioUnit> build_units(const ExperimentConfig& cfg);

// Deterministic stand-in for externally powered rewrite families: texture
// edits of unhashed free text (lead-in pools per family and version), so
// desk-scale runs exercise the full family grid. Fingerprint-guarded by
// apply_variant like any other rewriter.
class SyntheticRewriter : public PresentationRewriter {
 public:
  PlanDoc rewrite(const PlanDoc& doc, VariantFamily family, int version, RngStream& rng) override;
};

struct RunManifest {
  std::uint64_t config_hash = 0;
  std::string version;                          // library version
  std::map<std::string, std::int64_t> counts;   // per-stage record counts
  std::vector<std::string> files;               // emitted file names, sorted
};

nlohmann::json manifest_to_json(const RunManifest& manifest);

struct ConsistencyOutputs {
  std::vector<ScoreRecord> records;  // canonical order, all judges
  // file name -> CSV text: consistency cells, growth, weight drift, and the
  // adaptive-vs-fixed comparison.
  std::map<std::string, std::string> tables;
  std::string records_jsonl;
  RunManifest manifest;
};

// The full synthetic consistency experiment: produces variants (rule
// families via the engine, rewrite families via the synthetic rewriter),
// scores every input with every configured judge, and reduces to the four
// table layouts. Inapplicable variant requests are recorded as skips.
ConsistencyOutputs run_consistency(const ExperimentConfig& cfg);

// Writes tables, records.jsonl, and manifest.json under dir; returns the
// file paths written.
std::vector<std::string> write_consistency_outputs(const ConsistencyOutputs& outputs,
                                                   const std::string& dir);

struct DecomposeRow {
  int n = 0;
  VarianceBreakdown analytic;
  McEstimate mc;
  bool within_3se = false;
};

struct DecomposeOutputs {
  std::vector<DecomposeRow> rows;  // one per configured n
  std::string csv;
  bool all_pass = false;
};

// Analytic variance split vs Monte Carlo total on the named profile, using
// the first scenario seed's medium-band utilities at each n and uniform
// target weights.
DecomposeOutputs run_decompose(const ExperimentConfig& cfg, const std::string& profile_name,
                               std::int64_t samples);

struct SignProbRow {
  double snr = 0.0;
  double predicted = 0.0;
  double empirical = 0.0;
};

struct SignProbOutputs {
  int G = 0;
  std::int64_t trials = 0;
  std::vector<SignProbRow> rows;
  std::string csv;
};

inline constexpr double kDefaultSnrGrid[] = {0.5, 1.0, 1.5, 2.0, 3.0, 4.0};

// Predicted vs empirical sign-correctness across an SNR grid. The empirical
// column re-scores a ramp group whose gap variance hits each SNR exactly.
SignProbOutputs run_sign_prob(int G, std::span<const double> snr_values, std::int64_t trials,
                              std::uint64_t master_seed);

struct ScalingOutputs {
  std::vector<ScalingRow> rows;
  std::string csv;
};

// Conditional SNR across stakeholder counts with the named profile's
// constant drift level.
ScalingOutputs run_scaling_sweep(const ExperimentConfig& cfg, const std::string& profile_name,
                                 double u_dispersion, double gap_variance, int G);

struct WeightsOutputs {
  std::vector<std::string> ids;
  CalibratedWeights calibrated;
  // Filled when the input document carries "utilities".
  std::optional<double> r_uniform;          // mean utility
  std::optional<double> r_calibrated;       // full-precision weighted sum
  std::optional<double> r_printed_weights;  // two-decimal weights, as displayed
  std::string csv;
  nlohmann::json json;
};

// Calibration report over a stakeholder-profile document (the calibration
// JSON schema, optionally extended with a "utilities" array on [0,1]).
WeightsOutputs run_weights(const nlohmann::json& doc);

// The worked three-traveler example document, as the CLI's built-in demo
// input and the reproduction fixture.
nlohmann::json three_traveler_doc();

}  // namespace rewardlab
