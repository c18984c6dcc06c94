#pragma once

// Group-relative sign reliability. A group of G candidate responses with true
// rewards R*_j is scored with i.i.d. Gaussian judge error; after group
// centering the per-response noise variance shrinks to sigma_xi^2 (1-1/G),
// and the probability that a response one gap-sigma from the group mean keeps
// the correct advantage sign is Phi(sqrt(SNR)/sqrt(1-1/G)).

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rewardlab/rng.hpp"

namespace rewardlab {

struct GroupSample {
  Eigen::VectorXd true_rewards;  // length G >= 2
  double sigma_xi = 0.0;         // judge-error std-dev, >= 0
};

struct SignReport {
  double snr = 0.0;
  double predicted_p = 0.0;
  double empirical_p = 0.0;
  std::int64_t trials = 0;
  double centered_noise_var = 0.0;
};

// Gaps to the group mean. Evaluated with a first-element shift so constant
// rewards produce exact zeros.
Eigen::VectorXd group_gaps(const Eigen::VectorXd& rewards);

// Gaps divided by their population std-dev (GRPO's standardized advantage).
// Sign analysis uses raw gaps; standardization never changes a sign.
Eigen::VectorXd standardized_advantages(const Eigen::VectorXd& rewards);

// sigma_xi^2 (1 - 1/G).
double centered_noise_variance(double sigma_xi, int G);

// Population variance of the gaps over sigma_xi^2. sigma_xi = 0 yields the
// +infinity sentinel (NaN when the gaps are also degenerate).
double snr(const Eigen::VectorXd& true_rewards, double sigma_xi);

// Phi(sqrt(snr)/sqrt(1-1/G)).
double predicted_sign_correctness(double snr_value, int G);

// Monte Carlo: a reference response with true gap ref_gap is scored alongside
// G-1 group members, all with fresh Gaussian errors; the group is re-centered
// every trial and the fraction of trials keeping the reference's sign is
// returned. The overload without ref_gap uses one gap std-dev.
double empirical_sign_correctness(const GroupSample& group, double ref_gap,
                                  std::int64_t trials, RngStream& rng);
double empirical_sign_correctness(const GroupSample& group, std::int64_t trials, RngStream& rng);

SignReport sign_report(const GroupSample& group, std::int64_t trials, RngStream& rng);

struct ScalingRow {
  int n = 0;
  double snr = 0.0;
  double predicted_p = 0.0;
};

// Conditional SNR scaling across stakeholder counts:
//   SNR(n) = (n-1) gap_variance / (n^2 sigma_eta_sq(n) u_dispersion).
// u_dispersion = 0 (no aggregation channel) yields the +infinity sentinel.
std::vector<ScalingRow> snr_scaling_sweep(std::span<const int> n_values,
                                          const std::function<double(int)>& sigma_eta_sq_fn,
                                          double u_dispersion, double gap_variance, int G = 8);

}  // namespace rewardlab
