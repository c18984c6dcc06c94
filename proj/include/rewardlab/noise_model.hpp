#pragma once

// Latent multi-stakeholder reward model and its noise decomposition.
//
// A holistic scalar judgment of a plan serving n stakeholders is modeled as
//
//     R_hat = sum_i (w*_i + eta_i) (u*_i + delta_i) + eps
//
// with target weights w* on the simplex, latent per-stakeholder utilities u*
// on [0,1], zero-sum exchangeable weight drift eta, independent per-coordinate
// estimation noise delta, and shared residual eps. Analytic variance splits
// into estimation + aggregation + shared + interaction parts; the Monte Carlo
// harness verifies the split empirically with deterministic sub-streams.

#include <Eigen/Dense>
#include <cstdint>

#include "rewardlab/rng.hpp"

namespace rewardlab {

// Latent satisfactions on the [0,1] scale; the [1,10] judge scale is the
// caller's I/O concern (see scale helpers in judges.hpp).
class UtilityVector {
 public:
  explicit UtilityVector(Eigen::VectorXd values);

  const Eigen::VectorXd& values() const { return v_; }
  Eigen::Index size() const { return v_.size(); }
  double operator[](Eigen::Index i) const { return v_[i]; }

 private:
  Eigen::VectorXd v_;
};

// Target weights: nonnegative, summing to 1 within 1e-12.
class WeightVector {
 public:
  explicit WeightVector(Eigen::VectorXd values);
  static WeightVector uniform(Eigen::Index n);

  const Eigen::VectorXd& values() const { return v_; }
  Eigen::Index size() const { return v_.size(); }
  double operator[](Eigen::Index i) const { return v_[i]; }

 private:
  Eigen::VectorXd v_;
};

struct NoiseSpec {
  Eigen::VectorXd sigma_delta;  // per-stakeholder std-dev of utility noise
  double sigma_eta = 0.0;       // per-coordinate std-dev of weight drift
  double sigma_eps = 0.0;       // std-dev of shared residual

  static NoiseSpec zero(Eigen::Index n);
  // Throws unless all std-devs >= 0 and sigma_delta has length n.
  void validate(Eigen::Index n) const;
};

struct VarianceBreakdown {
  double term_i = 0.0;    // estimation: sum_i w_i^2 sigma_delta_i^2
  double term_ii = 0.0;   // aggregation: Var[sum_i eta_i u_i]
  double term_iii = 0.0;  // shared: sigma_eps^2
  double cross = 0.0;     // interaction: sum_i sigma_eta^2 sigma_delta_i^2
  double total = 0.0;
};

struct McEstimate {
  double mean = 0.0;
  double variance = 0.0;               // sample variance (N-1)
  double std_error_of_variance = 0.0;  // Gaussian approx: s^2 * sqrt(2/(N-1))
  std::int64_t samples = 0;
};

// sum_i w_i u_i; the ideal aggregate the noisy judge estimates.
double true_reward(const UtilityVector& u, const WeightVector& w);

// Zero-sum exchangeable drift: i.i.d. Gaussians with variance
// sigma_eta^2 * n/(n-1), centered. Marginal variance sigma_eta^2, pairwise
// covariance -sigma_eta^2/(n-1), sum exactly zero up to rounding.
Eigen::VectorXd sample_weight_drift(Eigen::Index n, double sigma_eta, RngStream& rng);

// One draw of the holistic score. The drift contribution is evaluated in
// centered form (eta . (u - u_0)), so constant utilities with zero delta/eps
// noise reproduce true_reward exactly on every draw.
double sample_holistic_score(const UtilityVector& u, const WeightVector& w,
                             const NoiseSpec& spec, RngStream& rng);

VarianceBreakdown decompose_variance(const UtilityVector& u, const WeightVector& w,
                                     const NoiseSpec& spec);

// (n/(n-1)) * sigma_eta^2 * sum_i (u_i - u_bar)^2. sigma_eta is a std-dev.
double term_ii_exchangeable(const UtilityVector& u, double sigma_eta);

// Quadratic form (u - u_bar 1)^T cov_eta (u - u_bar 1) for an arbitrary
// zero-row-sum symmetric drift covariance.
double term_ii_general(const UtilityVector& u, const Eigen::MatrixXd& cov_eta);

// The exchangeable covariance (n/(n-1)) sigma_eta^2 (I - 11^T/n).
Eigen::MatrixXd exchangeable_cov(Eigen::Index n, double sigma_eta);

// Monte Carlo variance of sample_holistic_score. Work is split into
// fixed-size chunks with counter-derived child seeds and merged in chunk
// order, so the result is bit-identical for any worker count.
McEstimate mc_variance_of_holistic(const UtilityVector& u, const WeightVector& w,
                                   const NoiseSpec& spec, std::int64_t samples,
                                   std::uint64_t seed, int workers = 1);

}  // namespace rewardlab
