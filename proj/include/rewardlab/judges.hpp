#pragma once

// Synthetic judge families: five scoring protocols over a latent plan state.
//
// Each judge is a pure function of (state, noise profile, rng stream) that
// returns a score on the [1,10] scale, optionally with per-stakeholder
// utilities/weights or per-item answers. Two independent noise sources feed
// every protocol:
//
//   * repeat noise    — drawn from the caller's stream; varies call to call;
//   * presentation    — a deterministic function of state.presentation_seed,
//                       scaled by profile.presentation_sensitivity (kappa).
//
// The presentation draw is the same every time a given surface variant is
// judged, so across variants it behaves as extra score variance on top of
// repeat noise (variance factor 1 + kappa^2 for the Gaussian channels);
// kappa = 0 recovers pure repeat noise.
//
// Channel usage per protocol:
//   direct              sigma_delta, sigma_eta, sigma_eps (holistic model)
//   rubric              per-dimension Gaussian with sigma = mean(sigma_delta)
//   checklist           per-item bit flips with checklist_flip_prob
//   decomposed (both)   sigma_delta for utilities; sigma_eta for the adaptive
//                       weights; sigma_eps unused (the weighted sum over
//                       reported numbers is exact arithmetic)
//
// Scores are clamped to [1,10] only at the end; reported per-stakeholder
// utilities are never clamped, so additive identities survive except at
// saturation.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlohmann/json.hpp"
#include "rewardlab/noise_model.hpp"
#include "rewardlab/rng.hpp"

namespace rewardlab {

// Scale helpers between the latent [0,1] quantities and the [1,10] judge
// scale. to_judge_scale is affine and unclamped.
inline double to_judge_scale(double x01) { return 1.0 + 9.0 * x01; }
inline double from_judge_scale(double s) { return (s - 1.0) / 9.0; }
inline double clamp_judge_scale(double s) { return s < 1.0 ? 1.0 : (s > 10.0 ? 10.0 : s); }

// Fixed rubric aggregation weights over the five dimensions, in order:
// constraint satisfaction, information credibility, timeline feasibility,
// fairness, conflict resolution. Sums to exactly 1.0 in double arithmetic.
inline constexpr double kRubricAlpha[5] = {0.30, 0.25, 0.20, 0.15, 0.10};
inline constexpr int kRubricDims = 5;

struct ChecklistItem {
  bool truth = true;    // ground-truth answer for this item
  double weight = 1.0;  // omega_b > 0
};

// Ground truth a judge estimates: per-stakeholder utilities on [0,1], latent
// quality of the five rubric dimensions, binary checklist answers, and the
// identifier of the surface variant being shown.
struct LatentPlanState {
  Eigen::VectorXd utilities;          // length n >= 2, entries in [0,1]
  Eigen::VectorXd dimension_quality;  // length 5, entries in [0,1]
  std::vector<ChecklistItem> checklist;
  std::uint64_t presentation_seed = 0;

  Eigen::Index n() const { return utilities.size(); }
  // Throws Error(domain/dimension/constraint) on violated bounds.
  void validate() const;
};

struct JudgeNoiseProfile {
  NoiseSpec base;                        // sigma_delta (length n), sigma_eta, sigma_eps
  double presentation_sensitivity = 0.0; // kappa >= 0
  double checklist_flip_prob = 0.0;      // in [0,1)

  void validate(Eigen::Index n) const;
};

struct JudgeOutput {
  double score = 0.0;  // always in [1,10]
  // Reported per-stakeholder satisfactions on the [1,10] scale, unclamped.
  std::optional<Eigen::VectorXd> per_role_utilities;
  // Simplex weights actually used for aggregation (post-renormalization).
  std::optional<Eigen::VectorXd> per_role_weights;
  // Post-flip checklist answers.
  std::optional<std::vector<bool>> items;
};

enum class JudgeKind { direct, rubric, checklist, decomposed_adaptive, decomposed_fixed };

std::string_view judge_name(JudgeKind kind);
JudgeKind judge_from_name(std::string_view name);

// Holistic scalar judgment: one number, no decomposition revealed. Uses the
// full noise model (drift, estimation, shared residual) against implicit
// uniform target weights; drift enters in centered form, so constant
// utilities yield presentation-invariant scores even with sigma_eta > 0.
JudgeOutput judge_direct(const LatentPlanState& state, const JudgeNoiseProfile& profile,
                         RngStream& rng);

// Five dimension scores sampled around dimension_quality with a shared
// per-dimension sigma = mean(sigma_delta), combined with kRubricAlpha. No
// stakeholder weights are sampled, so there is no aggregation-noise channel.
JudgeOutput judge_rubric(const LatentPlanState& state, const JudgeNoiseProfile& profile,
                         RngStream& rng);

// Weighted binary checklist: score = (sum a_b omega_b / sum omega_b) * 9 + 1.
// Each truth bit flips independently with checklist_flip_prob per call, and
// additionally with min(kappa * flip_prob, 1/2) per presentation variant.
// Empty item set -> domain error.
JudgeOutput judge_checklist(const LatentPlanState& state, const JudgeNoiseProfile& profile,
                            RngStream& rng);

// Per-stakeholder decomposition with judge-chosen weights: reports
// u_hat_i = 1 + 9 (u_i + delta_i) and weights w* + eta projected back onto
// the simplex (negatives floored at 0, renormalized only when flooring
// changed something); score = w . u_hat, clamped.
JudgeOutput judge_decomposed_adaptive(const LatentPlanState& state,
                                      const JudgeNoiseProfile& profile, RngStream& rng);

// Same utility sampling as judge_decomposed_adaptive — with an identical rng
// stream the reported u_hat match bit for bit — but aggregation uses the
// supplied constant weights, isolating the weight-drift channel.
// Length mismatch -> dimension error.
JudgeOutput judge_decomposed_fixed(const LatentPlanState& state, const JudgeNoiseProfile& profile,
                                   const WeightVector& weights, RngStream& rng);

// Stock checklist for an n-stakeholder plan: 3 per-stakeholder constraint
// items (omega 2.5 each, so length grows linearly with n), then fixed blocks
// for information credibility (3 x 2.0), timeline logic (3 x 1.5), fairness
// (2 x 1.5), and actionability (2 x 1.0). All answers start true.
std::vector<ChecklistItem> make_checklist(Eigen::Index n);

// JSON ingest/emit for scenario files. Field names follow the structs;
// checklist items are {"truth": bool, "weight": number}. Parsing validates.
nlohmann::json latent_plan_state_to_json(const LatentPlanState& state);
LatentPlanState latent_plan_state_from_json(const nlohmann::json& j);
nlohmann::json judge_noise_profile_to_json(const JudgeNoiseProfile& profile);
JudgeNoiseProfile judge_noise_profile_from_json(const nlohmann::json& j, Eigen::Index n);

}  // namespace rewardlab
