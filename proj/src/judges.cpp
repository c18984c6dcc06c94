#include "rewardlab/judges.hpp"

#include <algorithm>
#include <cmath>

#include "rewardlab/errors.hpp"

namespace rewardlab {
namespace {

// Fresh deterministic stream per (protocol, surface variant). Seeded from the
// protocol tag rather than the caller's stream, so the same variant perturbs
// every repeat of itself identically while different protocols stay
// decorrelated. The adaptive and fixed decomposed judges share one tag — the
// utility sub-stream contract depends on it.
RngStream presentation_stream(std::string_view tag, std::uint64_t presentation_seed) {
  return RngStream(derive_seed(fnv1a64(tag), {presentation_seed}));
}

// Combined repeat + presentation draw for every Gaussian channel. Both
// streams are always consumed — stream positions never depend on kappa — and
// kappa = 0 contributes an exact additive zero.
Eigen::VectorXd gaussian_block(const Eigen::VectorXd& sigma, double kappa, RngStream& rng,
                               RngStream& pres) {
  const Eigen::Index n = sigma.size();
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = rng.normal(sigma[i]);
  for (Eigen::Index i = 0; i < n; ++i) out[i] += kappa * pres.normal(sigma[i]);
  return out;
}

// Zero-sum projection is linear, so the combined drift is the sum of two
// independently projected draws; each keeps the exact zero-sum structure
// (bitwise antisymmetric at n = 2).
Eigen::VectorXd drift_block(Eigen::Index n, double sigma_eta, double kappa, RngStream& rng,
                            RngStream& pres) {
  Eigen::VectorXd eta = sample_weight_drift(n, sigma_eta, rng);
  eta += kappa * sample_weight_drift(n, sigma_eta, pres);
  return eta;
}

// Shared by the adaptive and fixed decomposed judges: reported satisfactions
// u_hat_i = 1 + 9 (u_i + delta_i), unclamped. Consumes exactly the utility
// draws from both streams, so callers that continue drawing stay aligned.
Eigen::VectorXd decomposed_utilities(const LatentPlanState& state,
                                     const JudgeNoiseProfile& profile, RngStream& rng,
                                     RngStream& pres) {
  Eigen::VectorXd delta =
      gaussian_block(profile.base.sigma_delta, profile.presentation_sensitivity, rng, pres);
  Eigen::VectorXd u_hat(state.n());
  for (Eigen::Index i = 0; i < u_hat.size(); ++i) {
    u_hat[i] = to_judge_scale(state.utilities[i] + delta[i]);
  }
  return u_hat;
}

void check_unit_interval(const Eigen::VectorXd& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0 && v[i] <= 1.0)) {
      throw Error(ErrorKind::domain,
                  std::string(what) + " out of [0,1] at index " + std::to_string(i));
    }
  }
}

}  // namespace

void LatentPlanState::validate() const {
  if (utilities.size() < 2) {
    throw Error(ErrorKind::domain, "plan state needs >= 2 stakeholders");
  }
  check_unit_interval(utilities, "utility");
  if (dimension_quality.size() != kRubricDims) {
    throw Error(ErrorKind::dimension, "dimension_quality must have length 5, got " +
                                          std::to_string(dimension_quality.size()));
  }
  check_unit_interval(dimension_quality, "dimension_quality");
  for (size_t b = 0; b < checklist.size(); ++b) {
    if (!(checklist[b].weight > 0.0)) {
      throw Error(ErrorKind::constraint,
                  "checklist weight must be > 0 at item " + std::to_string(b));
    }
  }
}

void JudgeNoiseProfile::validate(Eigen::Index n) const {
  base.validate(n);
  if (!(presentation_sensitivity >= 0.0) || !std::isfinite(presentation_sensitivity)) {
    throw Error(ErrorKind::domain, "presentation_sensitivity must be finite and >= 0");
  }
  if (!(checklist_flip_prob >= 0.0 && checklist_flip_prob < 1.0)) {
    throw Error(ErrorKind::domain, "checklist_flip_prob must lie in [0,1)");
  }
}

std::string_view judge_name(JudgeKind kind) {
  switch (kind) {
    case JudgeKind::direct: return "direct";
    case JudgeKind::rubric: return "rubric";
    case JudgeKind::checklist: return "checklist";
    case JudgeKind::decomposed_adaptive: return "decomposed_adaptive";
    case JudgeKind::decomposed_fixed: return "decomposed_fixed";
  }
  throw Error(ErrorKind::domain, "unknown judge kind");
}

JudgeKind judge_from_name(std::string_view name) {
  for (JudgeKind kind : {JudgeKind::direct, JudgeKind::rubric, JudgeKind::checklist,
                         JudgeKind::decomposed_adaptive, JudgeKind::decomposed_fixed}) {
    if (name == judge_name(kind)) return kind;
  }
  throw Error(ErrorKind::validation, "unknown judge: " + std::string(name));
}

JudgeOutput judge_direct(const LatentPlanState& state, const JudgeNoiseProfile& profile,
                         RngStream& rng) {
  state.validate();
  const Eigen::Index n = state.n();
  profile.validate(n);
  RngStream pres = presentation_stream("judge.direct.presentation", state.presentation_seed);
  const double kappa = profile.presentation_sensitivity;

  const WeightVector w = WeightVector::uniform(n);
  const double base = true_reward(UtilityVector(state.utilities), w);

  // Draw order: delta coords, drift coords, eps — repeat then presentation
  // within each block. The drift enters centered (eta . (u - u_0)), so
  // constant utilities contribute an exact zero whatever eta is drawn.
  Eigen::VectorXd delta = gaussian_block(profile.base.sigma_delta, kappa, rng, pres);
  Eigen::VectorXd eta = drift_block(n, profile.base.sigma_eta, kappa, rng, pres);
  double eps = rng.normal(profile.base.sigma_eps) + kappa * pres.normal(profile.base.sigma_eps);

  Eigen::VectorXd u_centered = state.utilities.array() - state.utilities[0];
  double score01 = base + w.values().dot(delta) + eta.dot(u_centered) + eta.dot(delta) + eps;

  JudgeOutput out;
  out.score = clamp_judge_scale(to_judge_scale(score01));
  return out;
}

JudgeOutput judge_rubric(const LatentPlanState& state, const JudgeNoiseProfile& profile,
                         RngStream& rng) {
  state.validate();
  profile.validate(state.n());
  RngStream pres = presentation_stream("judge.rubric.presentation", state.presentation_seed);

  // One shared dimension sigma distilled from the per-stakeholder noise
  // scale; the rubric has no stakeholder axis of its own.
  const double sigma_dim = profile.base.sigma_delta.mean();
  Eigen::VectorXd noise = gaussian_block(Eigen::VectorXd::Constant(kRubricDims, sigma_dim),
                                         profile.presentation_sensitivity, rng, pres);

  // Dimension scores on [1,10] combined with the fixed weights; all five
  // alpha * 10 products are exact in double arithmetic, so perfect quality
  // with zero noise lands on 10.0 bitwise.
  double score = 0.0;
  for (int d = 0; d < kRubricDims; ++d) {
    score += kRubricAlpha[d] * to_judge_scale(state.dimension_quality[d] + noise[d]);
  }

  JudgeOutput out;
  out.score = clamp_judge_scale(score);
  return out;
}

JudgeOutput judge_checklist(const LatentPlanState& state, const JudgeNoiseProfile& profile,
                            RngStream& rng) {
  state.validate();
  profile.validate(state.n());
  if (state.checklist.empty()) {
    throw Error(ErrorKind::domain, "checklist judge needs at least one item");
  }
  RngStream pres = presentation_stream("judge.checklist.presentation", state.presentation_seed);

  // Presentation flips reuse the repeat flip probability scaled by kappa,
  // capped at 1/2 (beyond that a flip channel starts undoing itself).
  const double p_rep = profile.checklist_flip_prob;
  const double p_pres = std::min(profile.presentation_sensitivity * p_rep, 0.5);

  const size_t m = state.checklist.size();
  std::vector<bool> rep_flip(m), pres_flip(m);
  for (size_t b = 0; b < m; ++b) rep_flip[b] = rng.uniform() < p_rep;
  for (size_t b = 0; b < m; ++b) pres_flip[b] = pres.uniform() < p_pres;

  std::vector<bool> answers(m);
  double num = 0.0;
  double den = 0.0;
  for (size_t b = 0; b < m; ++b) {
    bool a = state.checklist[b].truth != rep_flip[b];
    if (pres_flip[b]) a = !a;
    answers[b] = a;
    if (a) num += state.checklist[b].weight;
    den += state.checklist[b].weight;
  }

  JudgeOutput out;
  out.score = clamp_judge_scale(num / den * 9.0 + 1.0);
  out.items = std::move(answers);
  return out;
}

JudgeOutput judge_decomposed_adaptive(const LatentPlanState& state,
                                      const JudgeNoiseProfile& profile, RngStream& rng) {
  state.validate();
  const Eigen::Index n = state.n();
  profile.validate(n);
  RngStream pres = presentation_stream("judge.decomposed.presentation", state.presentation_seed);

  // Utilities are drawn before any weight randomness, so a fixed-weight
  // judge reading the same streams reports bitwise-identical u_hat.
  Eigen::VectorXd u_hat = decomposed_utilities(state, profile, rng, pres);

  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / double(n));
  w += drift_block(n, profile.base.sigma_eta, profile.presentation_sensitivity, rng, pres);

  // Floor negatives at 0 and renormalize only when flooring changed
  // something: an untouched draw keeps its exact zero-sum structure, and a
  // floored one sums to >= 1, so the division is safe.
  bool floored = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (w[i] < 0.0) {
      w[i] = 0.0;
      floored = true;
    }
  }
  if (floored) w /= w.sum();

  JudgeOutput out;
  out.score = clamp_judge_scale(w.dot(u_hat));
  out.per_role_utilities = std::move(u_hat);
  out.per_role_weights = std::move(w);
  return out;
}

JudgeOutput judge_decomposed_fixed(const LatentPlanState& state, const JudgeNoiseProfile& profile,
                                   const WeightVector& weights, RngStream& rng) {
  state.validate();
  const Eigen::Index n = state.n();
  profile.validate(n);
  if (weights.size() != n) {
    throw Error(ErrorKind::dimension, "fixed judge weights have length " +
                                          std::to_string(weights.size()) + ", state has " +
                                          std::to_string(n) + " stakeholders");
  }
  RngStream pres = presentation_stream("judge.decomposed.presentation", state.presentation_seed);

  Eigen::VectorXd u_hat = decomposed_utilities(state, profile, rng, pres);

  JudgeOutput out;
  out.score = clamp_judge_scale(weights.values().dot(u_hat));
  out.per_role_utilities = std::move(u_hat);
  out.per_role_weights = weights.values();
  return out;
}

std::vector<ChecklistItem> make_checklist(Eigen::Index n) {
  if (n < 1) throw Error(ErrorKind::domain, "checklist needs n >= 1 stakeholders");
  std::vector<ChecklistItem> items;
  items.reserve(size_t(3 * n + 10));
  // Per-stakeholder hard-constraint items: the block that grows with n.
  for (Eigen::Index s = 0; s < n; ++s) {
    for (int k = 0; k < 3; ++k) items.push_back({true, 2.5});
  }
  for (int k = 0; k < 3; ++k) items.push_back({true, 2.0});  // information credibility
  for (int k = 0; k < 3; ++k) items.push_back({true, 1.5});  // timeline logic
  for (int k = 0; k < 2; ++k) items.push_back({true, 1.5});  // fairness
  for (int k = 0; k < 2; ++k) items.push_back({true, 1.0});  // actionability
  return items;
}

nlohmann::json latent_plan_state_to_json(const LatentPlanState& state) {
  nlohmann::json j;
  j["utilities"] = std::vector<double>(state.utilities.begin(), state.utilities.end());
  j["dimension_quality"] =
      std::vector<double>(state.dimension_quality.begin(), state.dimension_quality.end());
  nlohmann::json items = nlohmann::json::array();
  for (const ChecklistItem& item : state.checklist) {
    items.push_back({{"truth", item.truth}, {"weight", item.weight}});
  }
  j["checklist"] = std::move(items);
  j["presentation_seed"] = state.presentation_seed;
  return j;
}

namespace {

Eigen::VectorXd json_vector(const nlohmann::json& doc, const char* field) {
  const nlohmann::json& arr = doc.at(field);
  if (!arr.is_array()) {
    throw Error(ErrorKind::validation, std::string(field) + " must be an array");
  }
  Eigen::VectorXd out(arr.size());
  Eigen::Index i = 0;
  for (const auto& v : arr) {
    if (!v.is_number()) {
      throw Error(ErrorKind::validation, std::string(field) + " entries must be numbers");
    }
    out[i++] = v.get<double>();
  }
  return out;
}

}  // namespace

LatentPlanState latent_plan_state_from_json(const nlohmann::json& j) {
  try {
    LatentPlanState state;
    state.utilities = json_vector(j, "utilities");
    state.dimension_quality = json_vector(j, "dimension_quality");
    if (j.contains("checklist")) {
      for (const auto& item : j.at("checklist")) {
        state.checklist.push_back(
            {item.at("truth").get<bool>(), item.at("weight").get<double>()});
      }
    }
    if (j.contains("presentation_seed")) {
      state.presentation_seed = j.at("presentation_seed").get<std::uint64_t>();
    }
    state.validate();
    return state;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::validation, std::string("bad plan state: ") + e.what());
  }
}

nlohmann::json judge_noise_profile_to_json(const JudgeNoiseProfile& profile) {
  nlohmann::json j;
  j["sigma_delta"] =
      std::vector<double>(profile.base.sigma_delta.begin(), profile.base.sigma_delta.end());
  j["sigma_eta"] = profile.base.sigma_eta;
  j["sigma_eps"] = profile.base.sigma_eps;
  j["presentation_sensitivity"] = profile.presentation_sensitivity;
  j["checklist_flip_prob"] = profile.checklist_flip_prob;
  return j;
}

JudgeNoiseProfile judge_noise_profile_from_json(const nlohmann::json& j, Eigen::Index n) {
  try {
    JudgeNoiseProfile profile;
    // A scalar sigma_delta broadcasts to all n stakeholders, so one profile
    // document can serve scenarios of every size.
    const nlohmann::json& sd = j.at("sigma_delta");
    if (sd.is_number()) {
      profile.base.sigma_delta = Eigen::VectorXd::Constant(n, sd.get<double>());
    } else {
      profile.base.sigma_delta = json_vector(j, "sigma_delta");
    }
    profile.base.sigma_eta = j.at("sigma_eta").get<double>();
    profile.base.sigma_eps = j.at("sigma_eps").get<double>();
    if (j.contains("presentation_sensitivity")) {
      profile.presentation_sensitivity = j.at("presentation_sensitivity").get<double>();
    }
    if (j.contains("checklist_flip_prob")) {
      profile.checklist_flip_prob = j.at("checklist_flip_prob").get<double>();
    }
    profile.validate(n);
    return profile;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::validation, std::string("bad noise profile: ") + e.what());
  }
}

}  // namespace rewardlab
