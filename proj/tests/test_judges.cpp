#include "rewardlab/judges.hpp"

#include <cmath>
#include <initializer_list>
#include <limits>
#include <vector>

#include "doctest.h"
#include "rewardlab/calibration.hpp"
#include "rewardlab/errors.hpp"
#include "rewardlab/metrics.hpp"

using namespace rewardlab;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(Eigen::Index(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

LatentPlanState make_state(std::initializer_list<double> utilities,
                           std::uint64_t presentation_seed = 0) {
  LatentPlanState state;
  state.utilities = vec(utilities);
  state.dimension_quality = vec({0.5, 0.5, 0.5, 0.5, 0.5});
  state.checklist = make_checklist(state.utilities.size());
  state.presentation_seed = presentation_seed;
  return state;
}

JudgeNoiseProfile make_profile(Eigen::Index n, double sigma_delta, double sigma_eta,
                               double sigma_eps, double kappa, double flip_prob = 0.0) {
  JudgeNoiseProfile p;
  p.base.sigma_delta = Eigen::VectorXd::Constant(n, sigma_delta);
  p.base.sigma_eta = sigma_eta;
  p.base.sigma_eps = sigma_eps;
  p.presentation_sensitivity = kappa;
  p.checklist_flip_prob = flip_prob;
  return p;
}

double population_var(const std::vector<double>& xs) {
  return population_variance(std::span<const double>(xs.data(), xs.size()));
}

StakeholderProfile traveler(const std::string& id, int hard, int soft) {
  StakeholderProfile p;
  p.id = id;
  for (int i = 0; i < hard; ++i) {
    p.constraints.push_back({id + "-h" + std::to_string(i), true, 1.0, ""});
  }
  for (int i = 0; i < soft; ++i) {
    p.constraints.push_back({id + "-s" + std::to_string(i), false, 1.0, ""});
  }
  return p;
}

// Score records for feeding judge outputs through the metrics pipeline.
ScoreRecord to_record(const JudgeOutput& out, int version, int n) {
  ScoreRecord r;
  r.seed_id = "unit";
  r.n = n;
  r.quality = QualityBand::medium;
  r.family = "paraphrase";
  r.version = version;
  r.judge = "decomposed";
  r.score = out.score;
  r.weights = out.per_role_weights;
  r.utilities = out.per_role_utilities;
  return r;
}

}  // namespace

TEST_SUITE("judges") {

// ---------------------------------------------------------------- validation

TEST_CASE("plan state validation rejects malformed inputs") {
  LatentPlanState ok = make_state({0.4, 0.95, 0.8});
  CHECK_NOTHROW(ok.validate());

  LatentPlanState one = ok;
  one.utilities = Eigen::VectorXd::Constant(1, 0.5);
  CHECK_THROWS_AS(one.validate(), Error);

  LatentPlanState bad_u = ok;
  bad_u.utilities[1] = 1.2;
  CHECK_THROWS_AS(bad_u.validate(), Error);

  LatentPlanState short_q = ok;
  short_q.dimension_quality = vec({0.5, 0.5, 0.5, 0.5});
  CHECK_THROWS_AS(short_q.validate(), Error);

  LatentPlanState bad_q = ok;
  bad_q.dimension_quality[0] = -0.1;
  CHECK_THROWS_AS(bad_q.validate(), Error);

  LatentPlanState bad_item = ok;
  bad_item.checklist[0].weight = 0.0;
  CHECK_THROWS_AS(bad_item.validate(), Error);
}

TEST_CASE("noise profile validation") {
  CHECK_NOTHROW(make_profile(3, 0.1, 0.1, 0.1, 0.5, 0.2).validate(3));
  CHECK_THROWS_AS(make_profile(3, 0.1, 0.0, 0.0, -0.5).validate(3), Error);
  CHECK_THROWS_AS(make_profile(3, 0.1, 0.0, 0.0, std::nan("")).validate(3), Error);
  CHECK_THROWS_AS(
      make_profile(3, 0.1, 0.0, 0.0, std::numeric_limits<double>::infinity()).validate(3), Error);
  CHECK_THROWS_AS(make_profile(3, 0.1, 0.0, 0.0, 0.0, 1.0).validate(3), Error);
  CHECK_THROWS_AS(make_profile(3, 0.1, 0.0, 0.0, 0.0, -0.1).validate(3), Error);
  CHECK_THROWS_AS(make_profile(4, 0.1, 0.0, 0.0, 0.0).validate(3), Error);  // length mismatch
}

TEST_CASE("judge kind names round-trip") {
  for (JudgeKind kind : {JudgeKind::direct, JudgeKind::rubric, JudgeKind::checklist,
                         JudgeKind::decomposed_adaptive, JudgeKind::decomposed_fixed}) {
    CHECK(judge_from_name(judge_name(kind)) == kind);
  }
  CHECK_THROWS_AS(judge_from_name("oracle"), Error);
}

// -------------------------------------------------------------------- direct

TEST_CASE("direct judge with zero noise returns the scaled true reward exactly") {
  LatentPlanState state = make_state({0.4, 0.95, 0.8});
  JudgeNoiseProfile quiet = make_profile(3, 0.0, 0.0, 0.0, 0.0);
  RngStream rng(0x9D6E5101ull);

  JudgeOutput out = judge_direct(state, quiet, rng);
  double base = true_reward(UtilityVector(state.utilities), WeightVector::uniform(3));
  CHECK(out.score == to_judge_scale(base));
  CHECK(out.score == doctest::Approx(7.45).epsilon(1e-14));
  CHECK_FALSE(out.per_role_utilities.has_value());
  CHECK_FALSE(out.per_role_weights.has_value());
  CHECK_FALSE(out.items.has_value());
}

TEST_CASE("direct judge is deterministic in (state, profile, seed)") {
  LatentPlanState state = make_state({0.3, 0.6, 0.9}, 42);
  JudgeNoiseProfile profile = make_profile(3, 0.1, 0.05, 0.02, 0.7, 0.0);
  RngStream a(0x9D6E5102ull);
  RngStream b(0x9D6E5102ull);
  CHECK(judge_direct(state, profile, a).score == judge_direct(state, profile, b).score);
}

TEST_CASE("constant utilities make the direct score presentation-invariant despite drift") {
  // Drift enters centered, so with zero estimation/shared noise every draw
  // collapses to the same number no matter how eta wobbles.
  JudgeNoiseProfile drift_only = make_profile(4, 0.0, 0.4, 0.0, 0.7);
  double first = 0.0;
  for (std::uint64_t seed : {0ull, 1ull, 2ull, 99ull, 12345ull}) {
    LatentPlanState state = make_state({0.6, 0.6, 0.6, 0.6}, seed);
    RngStream rng(derive_seed(0x9D6E5103ull, {seed}));
    double score = judge_direct(state, drift_only, rng).score;
    if (seed == 0) {
      first = score;
    } else {
      CHECK(score == first);
    }
  }
}

TEST_CASE("presentation acts as noise: variance over 55 presentation seeds is positive") {
  JudgeNoiseProfile profile = make_profile(3, 0.1, 0.0, 0.0, 0.5);
  std::vector<double> scores;
  for (std::uint64_t seed = 0; seed < 55; ++seed) {
    LatentPlanState state = make_state({0.4, 0.95, 0.8}, seed);
    RngStream rng(0x9D6E5104ull);  // identical repeat draw every call
    scores.push_back(judge_direct(state, profile, rng).score);
  }
  CHECK(population_var(scores) > 0.0);
  CHECK(scores[0] != scores[1]);
}

TEST_CASE("kappa = 1 doubles the Gaussian score variance across presentation variants") {
  // Repeat-only variance at a pinned variant vs variance when every call
  // sees a fresh variant: the ratio estimates 1 + kappa^2.
  const int kDraws = 4000;
  JudgeNoiseProfile profile = make_profile(4, 0.03, 0.03, 0.02, 1.0);

  LatentPlanState pinned = make_state({0.3, 0.5, 0.7, 0.9}, 7);
  RngStream rep_rng(0x9D6E5105ull);
  std::vector<double> repeat_scores;
  for (int k = 0; k < kDraws; ++k) {
    repeat_scores.push_back(judge_direct(pinned, profile, rep_rng).score);
  }

  std::vector<double> variant_scores;
  for (int k = 0; k < kDraws; ++k) {
    LatentPlanState state = make_state({0.3, 0.5, 0.7, 0.9}, std::uint64_t(k));
    RngStream rng(derive_seed(0x9D6E5106ull, {std::uint64_t(k)}));
    variant_scores.push_back(judge_direct(state, profile, rng).score);
  }

  double ratio = population_var(variant_scores) / population_var(repeat_scores);
  CHECK(ratio > 1.75);
  CHECK(ratio < 2.25);
}

TEST_CASE("direct scores are clamped to the scale boundaries") {
  LatentPlanState state = make_state({0.4, 0.95, 0.8});
  JudgeNoiseProfile loud = make_profile(3, 0.0, 0.0, 50.0, 0.0);
  RngStream rng(0x9D6E5107ull);
  double lo = 11.0;
  double hi = 0.0;
  for (int k = 0; k < 200; ++k) {
    double s = judge_direct(state, loud, rng).score;
    CHECK(s >= 1.0);
    CHECK(s <= 10.0);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  CHECK(lo == 1.0);
  CHECK(hi == 10.0);
}

// -------------------------------------------------------------------- rubric

TEST_CASE("rubric aggregation weights sum to exactly 1") {
  double sum = 0.0;
  for (double a : kRubricAlpha) sum += a;
  CHECK(sum == 1.0);
}

TEST_CASE("rubric judge hits 10.0 bitwise on perfect quality with zero noise") {
  LatentPlanState state = make_state({0.4, 0.95, 0.8});
  state.dimension_quality = vec({1.0, 1.0, 1.0, 1.0, 1.0});
  JudgeNoiseProfile quiet = make_profile(3, 0.0, 0.0, 0.0, 0.0);
  RngStream rng(0x9D6E5108ull);
  CHECK(judge_rubric(state, quiet, rng).score == 10.0);
}

TEST_CASE("rubric judge evaluates the fixed weighted combination") {
  LatentPlanState state = make_state({0.4, 0.95, 0.8});
  state.dimension_quality = vec({0.8, 0.6, 0.4, 0.9, 1.0});
  JudgeNoiseProfile quiet = make_profile(3, 0.0, 0.0, 0.0, 0.0);
  RngStream rng(0x9D6E5109ull);
  // 0.30*8.2 + 0.25*6.4 + 0.20*4.6 + 0.15*9.1 + 0.10*10 on the [1,10] scale.
  CHECK(judge_rubric(state, quiet, rng).score == doctest::Approx(7.345).epsilon(1e-14));
}

TEST_CASE("rubric noise variance matches the weighted iid model") {
  const int kDraws = 4000;
  LatentPlanState state = make_state({0.4, 0.95, 0.8});
  JudgeNoiseProfile profile;
  profile.base.sigma_delta = vec({0.1, 0.2, 0.3});  // mean sigma drives all dims
  profile.base.sigma_eta = 0.0;
  profile.base.sigma_eps = 0.0;

  RngStream rng(0x9D6E510Aull);
  std::vector<double> scores;
  for (int k = 0; k < kDraws; ++k) scores.push_back(judge_rubric(state, profile, rng).score);

  double sigma_dim = profile.base.sigma_delta.mean();
  double alpha_sq = 0.0;
  for (double a : kRubricAlpha) alpha_sq += a * a;
  double expected = 81.0 * alpha_sq * sigma_dim * sigma_dim;
  double tol = 3.2 * expected * std::sqrt(2.0 / kDraws);
  CHECK(std::fabs(population_var(scores) - expected) <= tol);
}

TEST_CASE("rubric scores respond to presentation variants") {
  JudgeNoiseProfile profile = make_profile(3, 0.1, 0.0, 0.0, 1.0);
  LatentPlanState a = make_state({0.4, 0.95, 0.8}, 1);
  LatentPlanState b = make_state({0.4, 0.95, 0.8}, 2);
  RngStream r1(0x9D6E510Bull);
  RngStream r2(0x9D6E510Bull);
  CHECK(judge_rubric(a, profile, r1).score != judge_rubric(b, profile, r2).score);
}

// ----------------------------------------------------------------- checklist

TEST_CASE("stock checklist layout: 3 items per stakeholder plus fixed blocks") {
  for (Eigen::Index n : {2, 3, 5, 8}) {
    std::vector<ChecklistItem> items = make_checklist(n);
    REQUIRE(Eigen::Index(items.size()) == 3 * n + 10);
    double total = 0.0;
    for (const auto& item : items) {
      CHECK(item.truth);
      total += item.weight;
    }
    CHECK(total == doctest::Approx(7.5 * double(n) + 15.5).epsilon(1e-14));
    for (Eigen::Index b = 0; b < 3 * n; ++b) CHECK(items[size_t(b)].weight == 2.5);
  }
  std::vector<ChecklistItem> three = make_checklist(3);
  CHECK(three[9].weight == 2.0);   // information credibility block
  CHECK(three[12].weight == 1.5);  // timeline logic block
  CHECK(three[15].weight == 1.5);  // fairness block
  CHECK(three[17].weight == 1.0);  // actionability block
  CHECK_THROWS_AS(make_checklist(0), Error);
}

TEST_CASE("checklist judge endpoint and midpoint scores are exact") {
  JudgeNoiseProfile quiet = make_profile(3, 0.0, 0.0, 0.0, 0.0, 0.0);
  RngStream rng(0x9D6E510Cull);

  LatentPlanState all_true = make_state({0.4, 0.95, 0.8});
  CHECK(judge_checklist(all_true, quiet, rng).score == 10.0);

  LatentPlanState all_false = all_true;
  for (auto& item : all_false.checklist) item.truth = false;
  CHECK(judge_checklist(all_false, quiet, rng).score == 1.0);

  // Four equal weights totalling 10, half satisfied: (5/10)*9 + 1.
  LatentPlanState half = all_true;
  half.checklist = {{true, 2.5}, {true, 2.5}, {false, 2.5}, {false, 2.5}};
  JudgeOutput out = judge_checklist(half, quiet, rng);
  CHECK(out.score == 5.5);
  REQUIRE(out.items.has_value());
  std::vector<bool> expected{true, true, false, false};
  CHECK(*out.items == expected);

  LatentPlanState empty = all_true;
  empty.checklist.clear();
  CHECK_THROWS_AS(judge_checklist(empty, quiet, rng), Error);
}

TEST_CASE("checklist flips shift the mean score by the flip rate") {
  const int kDraws = 4000;
  LatentPlanState state = make_state({0.3, 0.5, 0.7, 0.9});  // 22 items, weight total 45.5
  JudgeNoiseProfile profile = make_profile(4, 0.0, 0.0, 0.0, 0.0, 0.3);
  RngStream rng(0x9D6E510Dull);
  double sum = 0.0;
  for (int k = 0; k < kDraws; ++k) sum += judge_checklist(state, profile, rng).score;
  // Every truth starts true, so each item holds with probability 0.7 and the
  // expected score is 1 + 9 * 0.7.
  CHECK(std::fabs(sum / kDraws - 7.3) <= 0.05);
}

TEST_CASE("checklist answers depend deterministically on the presentation seed") {
  JudgeNoiseProfile profile = make_profile(3, 0.0, 0.0, 0.0, 2.0, 0.2);

  LatentPlanState s1 = make_state({0.4, 0.95, 0.8}, 11);
  RngStream a(0x9D6E510Eull);
  RngStream b(0x9D6E510Eull);
  JudgeOutput o1 = judge_checklist(s1, profile, a);
  JudgeOutput o2 = judge_checklist(s1, profile, b);
  CHECK(o1.score == o2.score);
  CHECK(*o1.items == *o2.items);

  // Across variants the flip masks differ; 19 items at p_pres = 0.4 make a
  // collision effectively impossible.
  std::vector<double> scores;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    LatentPlanState s = make_state({0.4, 0.95, 0.8}, seed);
    RngStream rng(0x9D6E510Full);
    scores.push_back(judge_checklist(s, profile, rng).score);
  }
  CHECK(population_var(scores) > 0.0);
}

// ---------------------------------------------------------------- decomposed

TEST_CASE("adaptive judge with zero noise reports uniform weights and scaled utilities") {
  LatentPlanState state = make_state({0.4, 0.95, 0.8});
  JudgeNoiseProfile quiet = make_profile(3, 0.0, 0.0, 0.0, 0.0);
  RngStream rng(0x9D6E5110ull);

  JudgeOutput out = judge_decomposed_adaptive(state, quiet, rng);
  REQUIRE(out.per_role_utilities.has_value());
  REQUIRE(out.per_role_weights.has_value());
  for (Eigen::Index i = 0; i < 3; ++i) {
    CHECK((*out.per_role_utilities)[i] == to_judge_scale(state.utilities[i]));
    CHECK((*out.per_role_weights)[i] == 1.0 / 3.0);
  }
  CHECK(out.score == doctest::Approx(7.45).epsilon(1e-14));
}

TEST_CASE("weight-induced score shift reproduces the worked multiplier example") {
  // A high-dispersion variant's adaptive weights vs the mean weights over
  // its variant set, applied to the same reported utilities.
  Eigen::VectorXd w = vec({0.1, 0.1, 0.3, 0.3, 0.2});
  Eigen::VectorXd w_bar = vec({0.1265, 0.1395, 0.228, 0.251, 0.255});
  Eigen::VectorXd u_hat = vec({8.0, 8.0, 1.0, 2.0, 6.0});
  CHECK(std::fabs((w - w_bar).dot(u_hat) - (-0.688)) <= 1e-12);
  CHECK(std::fabs(weight_shift(w, w_bar, u_hat) - (-0.688)) <= 1e-12);
}

TEST_CASE("adaptive weights stay on the simplex over 10^4 noisy draws") {
  LatentPlanState state = make_state({0.05, 0.35, 0.5, 0.65, 0.95}, 3);
  JudgeNoiseProfile profile = make_profile(5, 0.05, 0.6, 0.0, 0.8);
  RngStream rng(0x9D6E5111ull);

  int floored_draws = 0;
  int untouched_draws = 0;
  for (int k = 0; k < 10000; ++k) {
    JudgeOutput out = judge_decomposed_adaptive(state, profile, rng);
    const Eigen::VectorXd& w = *out.per_role_weights;
    bool has_zero = false;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      CHECK(w[i] >= 0.0);
      has_zero = has_zero || w[i] == 0.0;
    }
    CHECK(std::fabs(w.sum() - 1.0) <= 1e-12);
    CHECK(out.score >= 1.0);
    CHECK(out.score <= 10.0);
    (has_zero ? floored_draws : untouched_draws) += 1;
  }
  // Drift this large exercises both the flooring path and the untouched one.
  CHECK(floored_draws > 0);
  CHECK(untouched_draws > 0);
}

TEST_CASE("fixed and adaptive judges share the utility sub-stream bit for bit") {
  LatentPlanState state = make_state({0.2, 0.5, 0.9}, 17);
  JudgeNoiseProfile profile = make_profile(3, 0.15, 0.2, 0.0, 0.5);

  RngStream ra(0x9D6E5112ull);
  RngStream rf(0x9D6E5112ull);
  JudgeOutput adaptive = judge_decomposed_adaptive(state, profile, ra);
  JudgeOutput fixed = judge_decomposed_fixed(state, profile, WeightVector::uniform(3), rf);

  REQUIRE(adaptive.per_role_utilities.has_value());
  REQUIRE(fixed.per_role_utilities.has_value());
  for (Eigen::Index i = 0; i < 3; ++i) {
    CHECK((*adaptive.per_role_utilities)[i] == (*fixed.per_role_utilities)[i]);
  }
  CHECK(adaptive.score != fixed.score);
}

TEST_CASE("fixed judge with uniform weights and quiet utilities recovers the scaled mean") {
  LatentPlanState state = make_state({0.4, 0.95, 0.8});
  JudgeNoiseProfile quiet = make_profile(3, 0.0, 0.0, 0.0, 0.0);
  RngStream rng(0x9D6E5113ull);
  JudgeOutput out = judge_decomposed_fixed(state, quiet, WeightVector::uniform(3), rng);
  CHECK(out.score == doctest::Approx(7.45).epsilon(1e-14));

  RngStream rng2(0x9D6E5113ull);
  CHECK_THROWS_AS(
      judge_decomposed_fixed(state, quiet, WeightVector::uniform(4), rng2), Error);
}

TEST_CASE("difficulty-calibrated weights flow through the fixed judge") {
  // Three-stakeholder query with difficulty (5, 1, 3) at the default weight
  // temperature 5; the softmax oracle is frozen to 20 digits.
  std::vector<StakeholderProfile> group = {traveler("alex", 4, 2), traveler("blake", 0, 2),
                                           traveler("casey", 2, 2)};
  CalibrationConfig cfg;  // tau_w = 5
  CalibratedWeights cw = calibrate_weights(group, cfg);
  CHECK(std::fabs(cw.weights[0] - 0.47177622106779078) <= 1e-14);
  CHECK(std::fabs(cw.weights[1] - 0.21198272070752776) <= 1e-14);
  CHECK(std::fabs(cw.weights[2] - 0.31624105822468146) <= 1e-14);

  LatentPlanState state = make_state({0.4, 0.95, 0.8});
  JudgeNoiseProfile quiet = make_profile(3, 0.0, 0.0, 0.0, 0.0);
  RngStream rng(0x9D6E5114ull);
  JudgeOutput out = judge_decomposed_fixed(state, quiet, cw.as_weight_vector(), rng);
  CHECK(std::fabs(out.score - 6.7877822771111157) <= 1e-12);
  CHECK(out.score != doctest::Approx(7.45).epsilon(1e-6));
}

TEST_CASE("fixed-weight judging yields exactly zero weight-induced shifts") {
  LatentPlanState base = make_state({0.15, 0.45, 0.7, 0.9});
  JudgeNoiseProfile profile = make_profile(4, 0.1, 0.15, 0.05, 0.9);
  WeightVector w(vec({0.4, 0.3, 0.2, 0.1}));

  std::vector<ScoreRecord> records;
  for (int k = 0; k < 300; ++k) {
    LatentPlanState state = base;
    state.presentation_seed = std::uint64_t(k);
    RngStream rng(derive_seed(0x9D6E5115ull, {std::uint64_t(k)}));
    records.push_back(to_record(judge_decomposed_fixed(state, profile, w, rng), k + 1, 4));
  }
  std::vector<double> shifts = delta_r_w(records);
  for (double s : shifts) CHECK(s == 0.0);
}

TEST_CASE("weight-shift variance is positive and grows with utility dispersion") {
  // Dispersion levels 0, 0.1, 0.3 around 0.5 with a fixed spread pattern;
  // 10^3 adaptive calls each, shifts measured against the group-mean weights.
  const Eigen::VectorXd pattern = vec({-1.5, -0.5, 0.5, 1.5});
  std::vector<double> variances;
  for (double level : {0.0, 0.1, 0.3}) {
    LatentPlanState state = make_state({0.5, 0.5, 0.5, 0.5}, 5);
    state.utilities = (0.5 + level * pattern.array()).matrix();
    JudgeNoiseProfile profile = make_profile(4, 0.05, 0.25, 0.0, 0.0);

    std::vector<ScoreRecord> records;
    RngStream rng(0x9D6E5116ull);
    for (int k = 0; k < 1000; ++k) {
      records.push_back(to_record(judge_decomposed_adaptive(state, profile, rng), k + 1, 4));
    }
    std::vector<double> shifts = delta_r_w(records);
    variances.push_back(population_var(shifts));
  }
  CHECK(variances[0] > 0.0);
  CHECK(variances[1] > variances[0]);
  CHECK(variances[2] > variances[1]);
}

TEST_CASE("adaptive weighting inflates score variance relative to fixed weights") {
  // Same utility draws, same plan, dispersed utilities: the weight channel
  // is the only difference, and it should dominate the estimation noise.
  const int kDraws = 3000;
  LatentPlanState state =
      make_state({0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85}, 23);
  JudgeNoiseProfile profile = make_profile(8, 0.05, 0.15, 0.0, 0.0);
  WeightVector uniform = WeightVector::uniform(8);

  std::vector<double> adaptive_scores;
  std::vector<double> fixed_scores;
  double paired_diff = 0.0;
  for (int k = 0; k < kDraws; ++k) {
    RngStream ra(derive_seed(0x9D6E5117ull, {std::uint64_t(k)}));
    RngStream rf(derive_seed(0x9D6E5117ull, {std::uint64_t(k)}));
    double sa = judge_decomposed_adaptive(state, profile, ra).score;
    double sf = judge_decomposed_fixed(state, profile, uniform, rf).score;
    adaptive_scores.push_back(sa);
    fixed_scores.push_back(sf);
    paired_diff += sa - sf;
  }
  CHECK(population_var(adaptive_scores) > 2.0 * population_var(fixed_scores));
  CHECK(std::fabs(paired_diff / kDraws) <= 0.08);
}

// ---------------------------------------------------------------------- json

TEST_CASE("plan state JSON round trip preserves every field") {
  LatentPlanState state = make_state({0.4, 0.95, 0.8}, 77);
  state.checklist[2].truth = false;
  nlohmann::json j = latent_plan_state_to_json(state);
  LatentPlanState back = latent_plan_state_from_json(j);

  CHECK(back.utilities == state.utilities);
  CHECK(back.dimension_quality == state.dimension_quality);
  REQUIRE(back.checklist.size() == state.checklist.size());
  for (size_t b = 0; b < state.checklist.size(); ++b) {
    CHECK(back.checklist[b].truth == state.checklist[b].truth);
    CHECK(back.checklist[b].weight == state.checklist[b].weight);
  }
  CHECK(back.presentation_seed == 77);
}

TEST_CASE("noise profile JSON round trip and scalar broadcast") {
  JudgeNoiseProfile profile = make_profile(3, 0.12, 0.08, 0.02, 0.6, 0.15);
  JudgeNoiseProfile back = judge_noise_profile_from_json(judge_noise_profile_to_json(profile), 3);
  CHECK(back.base.sigma_delta == profile.base.sigma_delta);
  CHECK(back.base.sigma_eta == 0.08);
  CHECK(back.base.sigma_eps == 0.02);
  CHECK(back.presentation_sensitivity == 0.6);
  CHECK(back.checklist_flip_prob == 0.15);

  nlohmann::json scalar = {{"sigma_delta", 0.2}, {"sigma_eta", 0.1}, {"sigma_eps", 0.0}};
  JudgeNoiseProfile wide = judge_noise_profile_from_json(scalar, 5);
  CHECK(wide.base.sigma_delta.size() == 5);
  for (Eigen::Index i = 0; i < 5; ++i) CHECK(wide.base.sigma_delta[i] == 0.2);
  CHECK(wide.presentation_sensitivity == 0.0);
}

TEST_CASE("malformed JSON documents raise typed errors") {
  nlohmann::json no_utils = {{"dimension_quality", {0.5, 0.5, 0.5, 0.5, 0.5}}};
  CHECK_THROWS_AS(latent_plan_state_from_json(no_utils), Error);

  nlohmann::json short_dims = {{"utilities", {0.4, 0.6}},
                               {"dimension_quality", {0.5, 0.5, 0.5, 0.5}}};
  CHECK_THROWS_AS(latent_plan_state_from_json(short_dims), Error);

  nlohmann::json bad_item = {{"utilities", {0.4, 0.6}},
                             {"dimension_quality", {0.5, 0.5, 0.5, 0.5, 0.5}},
                             {"checklist", {{{"truth", true}, {"weight", 0.0}}}}};
  CHECK_THROWS_AS(latent_plan_state_from_json(bad_item), Error);

  nlohmann::json bad_flip = {{"sigma_delta", 0.1},
                             {"sigma_eta", 0.0},
                             {"sigma_eps", 0.0},
                             {"checklist_flip_prob", 1.0}};
  CHECK_THROWS_AS(judge_noise_profile_from_json(bad_flip, 3), Error);

  nlohmann::json wrong_len = {{"sigma_delta", {0.1, 0.1}}, {"sigma_eta", 0.0}, {"sigma_eps", 0.0}};
  CHECK_THROWS_AS(judge_noise_profile_from_json(wrong_len, 3), Error);
}

}  // TEST_SUITE
