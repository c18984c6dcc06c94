#include "rewardlab/noise_model.hpp"

#include <cmath>
#include <future>
#include <thread>
#include <vector>

#include "rewardlab/errors.hpp"

namespace rewardlab {
namespace {

void require_match(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw Error(ErrorKind::dimension,
                std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                    std::to_string(b) + ")");
  }
}

// Deviations from the first entry; exactly zero for constant input, which the
// mean-centered form cannot guarantee in floating point.
Eigen::VectorXd shift_by_first(const Eigen::VectorXd& u) {
  return u.array() - u[0];
}

// In-place (I - 11^T/n) g. The n=2 case is written as an exact antisymmetric
// pair: the zero-sum contract there is eta_2 == -eta_1 bit for bit.
void project_zero_sum(Eigen::VectorXd& g) {
  if (g.size() == 2) {
    double d = 0.5 * (g[0] - g[1]);
    g[0] = d;
    g[1] = -d;
    return;
  }
  g.array() -= g.mean();
}

double centered_sum_of_squares(const Eigen::VectorXd& u) {
  Eigen::VectorXd d = shift_by_first(u);
  double m = d.mean();
  return (d.array() - m).square().sum();
}

// Reusable single-draw sampler; keeps the MC inner loop allocation-free.
struct HolisticSampler {
  HolisticSampler(const UtilityVector& u, const WeightVector& w, const NoiseSpec& spec)
      : w_(w.values()),
        u_centered_(shift_by_first(u.values())),
        sigma_delta_(spec.sigma_delta),
        sigma_g_(spec.sigma_eta * std::sqrt(double(u.size()) / double(u.size() - 1))),
        sigma_eps_(spec.sigma_eps),
        base_(true_reward(u, w)),
        eta_(u.size()),
        delta_(u.size()) {}

  // Draw order is part of the determinism contract: eta coords, delta coords,
  // then eps.
  double operator()(RngStream& rng) {
    const Eigen::Index n = eta_.size();
    for (Eigen::Index i = 0; i < n; ++i) eta_[i] = rng.normal(sigma_g_);
    project_zero_sum(eta_);
    for (Eigen::Index i = 0; i < n; ++i) delta_[i] = rng.normal(sigma_delta_[i]);
    double eps = rng.normal(sigma_eps_);
    return base_ + w_.dot(delta_) + eta_.dot(u_centered_) + eta_.dot(delta_) + eps;
  }

  Eigen::VectorXd w_, u_centered_, sigma_delta_;
  double sigma_g_, sigma_eps_, base_;
  Eigen::VectorXd eta_, delta_;
};

struct WelfordAcc {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    double d = x - mean;
    mean += d / double(count);
    m2 += d * (x - mean);
  }

  void merge(const WelfordAcc& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    double d = o.mean - mean;
    std::int64_t m = count + o.count;
    mean += d * double(o.count) / double(m);
    m2 += o.m2 + d * d * double(count) * double(o.count) / double(m);
    count = m;
  }
};

constexpr std::int64_t kMcChunk = 1 << 16;

}  // namespace

UtilityVector::UtilityVector(Eigen::VectorXd values) : v_(std::move(values)) {
  if (v_.size() < 2) throw Error(ErrorKind::domain, "utility vector needs length >= 2");
  for (Eigen::Index i = 0; i < v_.size(); ++i) {
    if (!(v_[i] >= 0.0 && v_[i] <= 1.0)) {
      throw Error(ErrorKind::domain, "utility out of [0,1] at index " + std::to_string(i));
    }
  }
}

WeightVector::WeightVector(Eigen::VectorXd values) : v_(std::move(values)) {
  if (v_.size() < 2) throw Error(ErrorKind::domain, "weight vector needs length >= 2");
  for (Eigen::Index i = 0; i < v_.size(); ++i) {
    if (!(v_[i] >= 0.0)) {
      throw Error(ErrorKind::constraint, "negative weight at index " + std::to_string(i));
    }
  }
  if (std::fabs(v_.sum() - 1.0) > 1e-12) {
    throw Error(ErrorKind::constraint, "weights sum to " + std::to_string(v_.sum()) + ", not 1");
  }
}

WeightVector WeightVector::uniform(Eigen::Index n) {
  if (n < 2) throw Error(ErrorKind::domain, "weight vector needs length >= 2");
  return WeightVector(Eigen::VectorXd::Constant(n, 1.0 / double(n)));
}

NoiseSpec NoiseSpec::zero(Eigen::Index n) {
  return NoiseSpec{Eigen::VectorXd::Zero(n), 0.0, 0.0};
}

void NoiseSpec::validate(Eigen::Index n) const {
  require_match(sigma_delta.size(), n, "sigma_delta");
  for (Eigen::Index i = 0; i < sigma_delta.size(); ++i) {
    if (!(sigma_delta[i] >= 0.0)) throw Error(ErrorKind::domain, "negative sigma_delta");
  }
  if (!(sigma_eta >= 0.0)) throw Error(ErrorKind::domain, "negative sigma_eta");
  if (!(sigma_eps >= 0.0)) throw Error(ErrorKind::domain, "negative sigma_eps");
}

double true_reward(const UtilityVector& u, const WeightVector& w) {
  require_match(u.size(), w.size(), "true_reward");
  return w.values().dot(u.values());
}

Eigen::VectorXd sample_weight_drift(Eigen::Index n, double sigma_eta, RngStream& rng) {
  if (n < 2) throw Error(ErrorKind::domain, "weight drift needs n >= 2");
  if (!(sigma_eta >= 0.0)) throw Error(ErrorKind::domain, "negative sigma_eta");
  double sigma_g = sigma_eta * std::sqrt(double(n) / double(n - 1));
  Eigen::VectorXd g(n);
  for (Eigen::Index i = 0; i < n; ++i) g[i] = rng.normal(sigma_g);
  project_zero_sum(g);
  return g;
}

double sample_holistic_score(const UtilityVector& u, const WeightVector& w,
                             const NoiseSpec& spec, RngStream& rng) {
  require_match(u.size(), w.size(), "sample_holistic_score");
  spec.validate(u.size());
  HolisticSampler sampler(u, w, spec);
  return sampler(rng);
}

VarianceBreakdown decompose_variance(const UtilityVector& u, const WeightVector& w,
                                     const NoiseSpec& spec) {
  require_match(u.size(), w.size(), "decompose_variance");
  spec.validate(u.size());
  VarianceBreakdown out;
  out.term_i = (w.values().array().square() * spec.sigma_delta.array().square()).sum();
  out.term_ii = term_ii_exchangeable(u, spec.sigma_eta);
  out.term_iii = spec.sigma_eps * spec.sigma_eps;
  out.cross = spec.sigma_eta * spec.sigma_eta * spec.sigma_delta.array().square().sum();
  out.total = out.term_i + out.term_ii + out.term_iii + out.cross;
  return out;
}

double term_ii_exchangeable(const UtilityVector& u, double sigma_eta) {
  if (!(sigma_eta >= 0.0)) throw Error(ErrorKind::domain, "negative sigma_eta");
  const double n = double(u.size());
  return n / (n - 1.0) * sigma_eta * sigma_eta * centered_sum_of_squares(u.values());
}

double term_ii_general(const UtilityVector& u, const Eigen::MatrixXd& cov_eta) {
  const Eigen::Index n = u.size();
  if (cov_eta.rows() != n || cov_eta.cols() != n) {
    throw Error(ErrorKind::dimension, "cov_eta must be n x n");
  }
  double scale = 1.0 + cov_eta.cwiseAbs().maxCoeff();
  if (!cov_eta.isApprox(cov_eta.transpose(), 0.0) &&
      (cov_eta - cov_eta.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw Error(ErrorKind::domain, "cov_eta must be symmetric");
  }
  Eigen::VectorXd row_sums = cov_eta.rowwise().sum();
  if (row_sums.cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw Error(ErrorKind::constraint, "cov_eta rows must sum to 0 (zero-sum drift)");
  }
  Eigen::VectorXd d = shift_by_first(u.values());
  Eigen::VectorXd v = d.array() - d.mean();
  return v.dot(cov_eta * v);
}

Eigen::MatrixXd exchangeable_cov(Eigen::Index n, double sigma_eta) {
  if (n < 2) throw Error(ErrorKind::domain, "exchangeable_cov needs n >= 2");
  double s2 = sigma_eta * sigma_eta * double(n) / double(n - 1);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  m.array() -= 1.0 / double(n);
  return s2 * m;
}

McEstimate mc_variance_of_holistic(const UtilityVector& u, const WeightVector& w,
                                   const NoiseSpec& spec, std::int64_t samples,
                                   std::uint64_t seed, int workers) {
  require_match(u.size(), w.size(), "mc_variance_of_holistic");
  spec.validate(u.size());
  if (samples < 2) throw Error(ErrorKind::domain, "mc needs samples >= 2");
  if (workers < 1) workers = 1;

  const std::int64_t chunks = (samples + kMcChunk - 1) / kMcChunk;
  std::vector<WelfordAcc> per_chunk(static_cast<size_t>(chunks));

  auto run_range = [&](std::int64_t begin, std::int64_t end) {
    HolisticSampler sampler(u, w, spec);
    for (std::int64_t c = begin; c < end; ++c) {
      RngStream rng(derive_seed(seed, {std::uint64_t(c)}));
      std::int64_t lo = c * kMcChunk;
      std::int64_t hi = std::min(samples, lo + kMcChunk);
      WelfordAcc acc;
      for (std::int64_t i = lo; i < hi; ++i) acc.add(sampler(rng));
      per_chunk[size_t(c)] = acc;
    }
  };

  if (workers == 1 || chunks == 1) {
    run_range(0, chunks);
  } else {
    // Contiguous chunk ranges per worker; merge order below is what fixes
    // the bit pattern, not the execution order.
    std::vector<std::future<void>> futs;
    std::int64_t per = (chunks + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
      std::int64_t lo = std::int64_t(t) * per;
      std::int64_t hi = std::min(chunks, lo + per);
      if (lo >= hi) break;
      futs.push_back(std::async(std::launch::async, run_range, lo, hi));
    }
    for (auto& f : futs) f.get();
  }

  WelfordAcc total;
  for (const auto& acc : per_chunk) total.merge(acc);

  McEstimate est;
  est.samples = total.count;
  est.mean = total.mean;
  est.variance = total.m2 / double(total.count - 1);
  est.std_error_of_variance = est.variance * std::sqrt(2.0 / double(total.count - 1));
  return est;
}

}  // namespace rewardlab
