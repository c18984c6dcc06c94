#include "rewardlab/grpo_signal.hpp"

#include <cmath>
#include <limits>

#include "rewardlab/errors.hpp"
#include "rewardlab/normal.hpp"

namespace rewardlab {
namespace {

void require_group(Eigen::Index g) {
  if (g < 2) throw Error(ErrorKind::domain, "group needs G >= 2");
}

double population_variance(const Eigen::VectorXd& x) {
  Eigen::VectorXd d = x.array() - x[0];
  double m = d.mean();
  return (d.array() - m).square().sum() / double(x.size());
}

}  // namespace

Eigen::VectorXd group_gaps(const Eigen::VectorXd& rewards) {
  require_group(rewards.size());
  Eigen::VectorXd d = rewards.array() - rewards[0];
  return d.array() - d.mean();
}

Eigen::VectorXd standardized_advantages(const Eigen::VectorXd& rewards) {
  Eigen::VectorXd gaps = group_gaps(rewards);
  double sd = std::sqrt(gaps.squaredNorm() / double(gaps.size()));
  if (sd == 0.0) {
    throw Error(ErrorKind::domain, "standardized advantages undefined for a constant group");
  }
  return gaps / sd;
}

double centered_noise_variance(double sigma_xi, int G) {
  require_group(G);
  if (!(sigma_xi >= 0.0)) throw Error(ErrorKind::domain, "negative sigma_xi");
  return sigma_xi * sigma_xi * (1.0 - 1.0 / double(G));
}

double snr(const Eigen::VectorXd& true_rewards, double sigma_xi) {
  require_group(true_rewards.size());
  if (!(sigma_xi >= 0.0)) throw Error(ErrorKind::domain, "negative sigma_xi");
  double gap_var = population_variance(true_rewards);
  if (sigma_xi == 0.0) {
    return gap_var > 0.0 ? std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::quiet_NaN();
  }
  return gap_var / (sigma_xi * sigma_xi);
}

double predicted_sign_correctness(double snr_value, int G) {
  require_group(G);
  if (!(snr_value >= 0.0)) throw Error(ErrorKind::domain, "snr must be >= 0");
  double shrink = std::sqrt(1.0 - 1.0 / double(G));
  return normal_cdf(std::sqrt(snr_value) / shrink);
}

double empirical_sign_correctness(const GroupSample& group, double ref_gap,
                                  std::int64_t trials, RngStream& rng) {
  const Eigen::Index g = group.true_rewards.size();
  require_group(g);
  if (!(group.sigma_xi >= 0.0)) throw Error(ErrorKind::domain, "negative sigma_xi");
  if (trials < 1) throw Error(ErrorKind::domain, "trials must be >= 1");
  if (ref_gap == 0.0) {
    throw Error(ErrorKind::domain, "reference gap is zero: advantage sign undefined");
  }

  // Only the reference's centered noise matters for its sign, but the group
  // is re-centered in full each trial, as the estimator is defined.
  const double inv_g = 1.0 / double(g);
  std::int64_t correct = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    double sum = 0.0;
    double xi_ref = rng.normal(group.sigma_xi);
    sum += xi_ref;
    for (Eigen::Index j = 1; j < g; ++j) sum += rng.normal(group.sigma_xi);
    double zeta_ref = xi_ref - sum * inv_g;
    double observed = ref_gap + zeta_ref;
    if ((observed > 0.0) == (ref_gap > 0.0) && observed != 0.0) ++correct;
  }
  return double(correct) / double(trials);
}

double empirical_sign_correctness(const GroupSample& group, std::int64_t trials, RngStream& rng) {
  Eigen::VectorXd gaps = group_gaps(group.true_rewards);
  double gap_sd = std::sqrt(gaps.squaredNorm() / double(gaps.size()));
  return empirical_sign_correctness(group, gap_sd, trials, rng);
}

SignReport sign_report(const GroupSample& group, std::int64_t trials, RngStream& rng) {
  SignReport out;
  out.snr = snr(group.true_rewards, group.sigma_xi);
  out.predicted_p = predicted_sign_correctness(out.snr, int(group.true_rewards.size()));
  out.empirical_p = empirical_sign_correctness(group, trials, rng);
  out.trials = trials;
  out.centered_noise_var = centered_noise_variance(group.sigma_xi, int(group.true_rewards.size()));
  return out;
}

std::vector<ScalingRow> snr_scaling_sweep(std::span<const int> n_values,
                                          const std::function<double(int)>& sigma_eta_sq_fn,
                                          double u_dispersion, double gap_variance, int G) {
  if (!(gap_variance > 0.0)) throw Error(ErrorKind::domain, "gap_variance must be > 0");
  if (!(u_dispersion >= 0.0)) throw Error(ErrorKind::domain, "u_dispersion must be >= 0");
  require_group(G);

  std::vector<ScalingRow> rows;
  rows.reserve(n_values.size());
  for (int n : n_values) {
    if (n < 2) throw Error(ErrorKind::domain, "stakeholder count must be >= 2");
    double s2 = sigma_eta_sq_fn(n);
    if (!(s2 >= 0.0)) throw Error(ErrorKind::domain, "sigma_eta_sq(n) must be >= 0");
    ScalingRow row;
    row.n = n;
    double denom = double(n) * double(n) * s2 * u_dispersion;
    row.snr = denom > 0.0 ? double(n - 1) * gap_variance / denom
                          : std::numeric_limits<double>::infinity();
    row.predicted_p = predicted_sign_correctness(row.snr, G);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rewardlab
