#include "rewardlab/noise_model.hpp"

#include <cmath>

#include "doctest.h"
#include "rewardlab/errors.hpp"

using namespace rewardlab;

namespace {

Eigen::VectorXd vec3(double a, double b, double c) {
  Eigen::VectorXd v(3);
  v << a, b, c;
  return v;
}

// Two-pass population variance, the independent oracle for the closed forms.
double population_variance_oracle(const Eigen::VectorXd& x) {
  double mean = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) mean += x[i];
  mean /= double(x.size());
  double ss = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) ss += (x[i] - mean) * (x[i] - mean);
  return ss / double(x.size());
}

}  // namespace

TEST_SUITE("noise_model") {

// ---- type invariants ----

TEST_CASE("utility and weight validation") {
  CHECK_THROWS_AS(UtilityVector(Eigen::VectorXd::Constant(1, 0.5)), Error);
  CHECK_THROWS_AS(UtilityVector(vec3(0.2, 1.2, 0.3)), Error);
  CHECK_THROWS_AS(UtilityVector(vec3(0.2, -0.1, 0.3)), Error);
  CHECK_THROWS_AS(WeightVector(vec3(0.5, 0.6, 0.2)), Error);
  CHECK_THROWS_AS(WeightVector(vec3(0.5, -0.1, 0.6)), Error);
  CHECK(WeightVector::uniform(4).values().sum() == doctest::Approx(1.0).epsilon(1e-15));

  NoiseSpec bad = NoiseSpec::zero(3);
  bad.sigma_eta = -0.1;
  CHECK_THROWS_AS(bad.validate(3), Error);
  CHECK_THROWS_AS(NoiseSpec::zero(2).validate(3), Error);
}

// ---- true_reward ----

TEST_CASE("true_reward reproduces the three-traveler aggregates") {
  UtilityVector u(vec3(0.40, 0.95, 0.80));
  // Uniform: (0.40+0.95+0.80)/3 = 0.716667, printed as 0.72.
  CHECK(true_reward(u, WeightVector::uniform(3)) ==
        doctest::Approx(0.71666666666666667).epsilon(1e-14));
  // Two-decimal calibrated weights: 0.268 + 0.0855 + 0.192 = 0.5455.
  WeightVector w(vec3(0.67, 0.09, 0.24));
  CHECK(true_reward(u, w) == doctest::Approx(0.5455).epsilon(1e-14));
}

TEST_CASE("true_reward of constant utilities is the constant") {
  UtilityVector u(Eigen::VectorXd::Constant(5, 0.37));
  Eigen::VectorXd wv(5);
  wv << 0.1, 0.3, 0.25, 0.15, 0.2;
  CHECK(true_reward(u, WeightVector(wv)) == doctest::Approx(0.37).epsilon(1e-14));
  UtilityVector u2(vec3(0.4, 0.9, 0.1));
  CHECK_THROWS_AS(true_reward(u2, WeightVector::uniform(4)), Error);
}

// ---- weight drift ----

TEST_CASE("drift at n=2 is an exact antisymmetric pair") {
  RngStream rng(101);
  for (int k = 0; k < 1000; ++k) {
    Eigen::VectorXd eta = sample_weight_drift(2, 0.3, rng);
    CHECK(eta[1] == -eta[0]);
  }
}

TEST_CASE("drift with zero sigma is the zero vector") {
  RngStream rng(7);
  Eigen::VectorXd eta = sample_weight_drift(5, 0.0, rng);
  CHECK(eta.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("drift sums to zero within 1e-12 on every draw") {
  RngStream rng(42);
  for (Eigen::Index n : {2, 3, 5, 8}) {
    for (int k = 0; k < 20000; ++k) {
      Eigen::VectorXd eta = sample_weight_drift(n, 0.2, rng);
      CHECK(std::fabs(eta.sum()) <= 1e-12);
    }
  }
}

TEST_CASE("drift moments match the exchangeable covariance") {
  // n=3, sigma_eta=0.1: marginal variance 0.01, cross covariance -0.005.
  RngStream rng(20260822);
  const int kDraws = 1000000;
  double s1 = 0, s2 = 0, s11 = 0, s22 = 0, s12 = 0;
  for (int k = 0; k < kDraws; ++k) {
    Eigen::VectorXd eta = sample_weight_drift(3, 0.1, rng);
    s1 += eta[0];
    s2 += eta[1];
    s11 += eta[0] * eta[0];
    s22 += eta[1] * eta[1];
    s12 += eta[0] * eta[1];
  }
  double m1 = s1 / kDraws, m2 = s2 / kDraws;
  double var1 = s11 / kDraws - m1 * m1;
  double cov = s12 / kDraws - m1 * m2;
  // Std error of the variance estimate is ~1.4e-5; of the covariance ~1.1e-5.
  CHECK(var1 == doctest::Approx(0.01).epsilon(0.02));
  CHECK(cov == doctest::Approx(-0.005).epsilon(0.03));
  CHECK(s22 / kDraws - m2 * m2 == doctest::Approx(0.01).epsilon(0.02));
  CHECK_THROWS_AS(sample_weight_drift(1, 0.1, rng), Error);
}

// ---- holistic score ----

TEST_CASE("noiseless judge returns the exact true reward") {
  UtilityVector u(vec3(0.40, 0.95, 0.80));
  WeightVector w = WeightVector::uniform(3);
  RngStream rng(5);
  double tr = true_reward(u, w);
  for (int k = 0; k < 100; ++k) {
    CHECK(sample_holistic_score(u, w, NoiseSpec::zero(3), rng) == tr);
  }
}

TEST_CASE("constant utilities kill the drift channel exactly") {
  UtilityVector u(Eigen::VectorXd::Constant(4, 0.3));
  Eigen::VectorXd wv(4);
  wv << 0.1, 0.2, 0.3, 0.4;
  WeightVector w(wv);
  NoiseSpec spec = NoiseSpec::zero(4);
  spec.sigma_eta = 0.5;
  RngStream rng(99);
  double tr = true_reward(u, w);
  for (int k = 0; k < 1000; ++k) {
    CHECK(sample_holistic_score(u, w, spec, rng) == tr);
  }
}

TEST_CASE("drift-only variance matches the exchangeable closed form") {
  UtilityVector u(vec3(0.4, 0.95, 0.8));
  WeightVector w = WeightVector::uniform(3);
  NoiseSpec spec = NoiseSpec::zero(3);
  spec.sigma_eta = 0.1;
  McEstimate mc = mc_variance_of_holistic(u, w, spec, 1000000, 77);
  double analytic = term_ii_exchangeable(u, 0.1);
  CHECK(analytic == doctest::Approx(0.0024250).epsilon(1e-12));
  CHECK(std::fabs(mc.variance - analytic) <= 3.0 * mc.std_error_of_variance);
  CHECK(mc.mean == doctest::Approx(true_reward(u, w)).epsilon(1e-3));
}

// ---- decomposition ----

TEST_CASE("decompose_variance hand evaluations") {
  UtilityVector u(vec3(0.4, 0.95, 0.8));
  WeightVector w = WeightVector::uniform(3);

  VarianceBreakdown zero = decompose_variance(u, w, NoiseSpec::zero(3));
  CHECK(zero.term_i == 0.0);
  CHECK(zero.term_ii == 0.0);
  CHECK(zero.term_iii == 0.0);
  CHECK(zero.cross == 0.0);
  CHECK(zero.total == 0.0);

  // Term I only: 3 * (1/3)^2 * 0.3^2 = 0.03.
  NoiseSpec est = NoiseSpec::zero(3);
  est.sigma_delta = Eigen::VectorXd::Constant(3, 0.3);
  VarianceBreakdown b = decompose_variance(u, w, est);
  CHECK(b.term_i == doctest::Approx(0.03).epsilon(1e-14));
  CHECK(b.term_ii == 0.0);
  CHECK(b.term_iii == 0.0);
  CHECK(b.cross == 0.0);
  CHECK(b.total == doctest::Approx(0.03).epsilon(1e-14));
}

TEST_CASE("decomposition total matches Monte Carlo on mixed-noise instances") {
  // A handful here; the full 200-instance battery lives in the acceptance
  // suite. Same oracle, same 3-sigma rule.
  RngStream gen(314159);
  for (int inst = 0; inst < 5; ++inst) {
    Eigen::Index n = (inst % 2 == 0) ? 3 : 5;
    Eigen::VectorXd uv(n), wv(n), sd(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      uv[i] = gen.uniform_in(0.05, 0.95);
      wv[i] = -std::log(1.0 - gen.uniform());
      sd[i] = gen.uniform_in(0.0, 0.25);
    }
    wv /= wv.sum();
    UtilityVector u(uv);
    WeightVector w(wv);
    NoiseSpec spec{sd, gen.uniform_in(0.0, 0.15), gen.uniform_in(0.0, 0.15)};
    VarianceBreakdown b = decompose_variance(u, w, spec);
    McEstimate mc = mc_variance_of_holistic(u, w, spec, 400000, 1000 + std::uint64_t(inst));
    CAPTURE(inst);
    CHECK(std::fabs(mc.variance - b.total) <= 3.0 * mc.std_error_of_variance);
  }
}

TEST_CASE("mc harness is bit-identical across worker counts") {
  UtilityVector u(vec3(0.4, 0.95, 0.8));
  WeightVector w = WeightVector::uniform(3);
  NoiseSpec spec{Eigen::VectorXd::Constant(3, 0.2), 0.1, 0.05};
  McEstimate a = mc_variance_of_holistic(u, w, spec, 300000, 5150, 1);
  McEstimate b = mc_variance_of_holistic(u, w, spec, 300000, 5150, 4);
  CHECK(a.mean == b.mean);
  CHECK(a.variance == b.variance);
  CHECK(a.std_error_of_variance == b.std_error_of_variance);
  CHECK(a.samples == b.samples);
}

// ---- Term II closed forms ----

TEST_CASE("term_ii_exchangeable hand values") {
  // n=2 reduces to sigma_eta^2 (u1-u2)^2.
  Eigen::VectorXd u2v(2);
  u2v << 0.9, 0.3;
  CHECK(term_ii_exchangeable(UtilityVector(u2v), 0.2) ==
        doctest::Approx(0.04 * 0.36).epsilon(1e-12));
  // Constant utilities: dispersion factor vanishes exactly.
  CHECK(term_ii_exchangeable(UtilityVector(Eigen::VectorXd::Constant(6, 0.1)), 0.5) == 0.0);
  // Three travelers, sigma_eta^2 = 0.01: 1.5 * 0.01 * 0.1616667 = 0.0024250.
  CHECK(term_ii_exchangeable(UtilityVector(vec3(0.40, 0.95, 0.80)), 0.1) ==
        doctest::Approx(0.0024250).epsilon(1e-12));
}

TEST_CASE("scaling law n^2/(n-1) against the population-variance oracle") {
  RngStream gen(271828);
  for (Eigen::Index n = 2; n <= 16; ++n) {
    Eigen::VectorXd uv(n);
    for (Eigen::Index i = 0; i < n; ++i) uv[i] = gen.uniform_in(0.0, 1.0);
    double sigma_eta = gen.uniform_in(0.01, 0.3);
    double var_u = population_variance_oracle(uv);
    double expected = double(n) * double(n) / double(n - 1) * sigma_eta * sigma_eta * var_u;
    CHECK(std::fabs(term_ii_exchangeable(UtilityVector(uv), sigma_eta) - expected) <= 1e-12);
  }
}

TEST_CASE("term_ii_general validates and matches the exchangeable special case") {
  UtilityVector u(vec3(0.40, 0.95, 0.80));

  CHECK(term_ii_general(u, Eigen::MatrixXd::Zero(3, 3)) == 0.0);

  Eigen::MatrixXd cov = exchangeable_cov(3, 0.1);
  CHECK(std::fabs(term_ii_general(u, cov) - term_ii_exchangeable(u, 0.1)) <= 1e-12);

  // Rank-1 zero-sum direction (1,-1,0)/sqrt(2), scale s^2 = 2:
  // quadratic form = 2 * (0.40-0.95)^2 / 2 = 0.3025 = 2 * 0.15125.
  Eigen::VectorXd a = vec3(1.0, -1.0, 0.0) / std::sqrt(2.0);
  Eigen::MatrixXd rank1 = 2.0 * a * a.transpose();
  CHECK(term_ii_general(u, rank1) == doctest::Approx(2.0 * 0.15125).epsilon(1e-12));

  // Asymmetric input.
  Eigen::MatrixXd asym = cov;
  asym(0, 1) += 1e-3;
  CHECK_THROWS_AS(term_ii_general(u, asym), Error);

  // Rows not summing to zero.
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(term_ii_general(u, bad), Error);

  CHECK_THROWS_AS(term_ii_general(u, Eigen::MatrixXd::Zero(4, 4)), Error);
}

TEST_CASE("translation invariance of the centered quadratic forms") {
  RngStream gen(555);
  for (int k = 0; k < 200; ++k) {
    Eigen::Index n = 2 + Eigen::Index(gen.uniform_index(7));
    Eigen::VectorXd uv(n);
    for (Eigen::Index i = 0; i < n; ++i) uv[i] = gen.uniform_in(0.2, 0.6);
    double c = gen.uniform_in(-0.15, 0.35);
    Eigen::VectorXd shifted = uv.array() + c;
    double sigma = gen.uniform_in(0.01, 0.4);
    CHECK(std::fabs(term_ii_exchangeable(UtilityVector(uv), sigma) -
                    term_ii_exchangeable(UtilityVector(shifted), sigma)) <= 1e-12);
    Eigen::MatrixXd cov = exchangeable_cov(n, sigma);
    CHECK(std::fabs(term_ii_general(UtilityVector(uv), cov) -
                    term_ii_general(UtilityVector(shifted), cov)) <= 1e-12);
  }
}

}  // TEST_SUITE
