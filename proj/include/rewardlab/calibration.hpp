#pragma once

// Offline weight calibration: per-stakeholder constraint difficulty and a
// temperature softmax over difficulties. Weights are a pure function of the
// query's stakeholder profiles and the config; no candidate response ever
// enters, which is what eliminates weight drift downstream.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"
#include "rewardlab/noise_model.hpp"

namespace rewardlab {

struct Constraint {
  std::string id;
  bool hard = true;
  double restrictiveness = 1.0;  // alpha(c) >= 0; 1.0 unless stated
  std::string description;
};

struct StakeholderProfile {
  std::string id;
  std::vector<Constraint> constraints;
  double conflict_score = 0.0;  // >= 0, summarizes pairwise tensions
};

struct CalibrationConfig {
  double gamma = 0.5;  // soft-constraint discount, in (0,1)
  double beta = 0.5;   // conflict discount, in (0,1)
  double tau_w = 5.0;  // weight temperature, > 0

  void validate() const;
};

struct CalibratedWeights {
  Eigen::VectorXd difficulty;
  // Simplex-normalized. Kept as a raw vector so the n=1 degenerate query
  // (weight exactly 1.0) stays representable; use as_weight_vector() for the
  // n >= 2 contract.
  Eigen::VectorXd weights;

  WeightVector as_weight_vector() const { return WeightVector(weights); }
};

// sum_{hard} alpha + gamma * sum_{soft} alpha + beta * conflict_score.
double difficulty(const StakeholderProfile& profile, const CalibrationConfig& cfg);

// Softmax of difficulty/tau_w with max-subtraction. Referentially
// transparent: equal inputs give bit-identical outputs.
CalibratedWeights calibrate_weights(const std::vector<StakeholderProfile>& profiles,
                                    const CalibrationConfig& cfg);

// Weighted sum over estimated utilities; the reward path's aggregation.
double aggregate(const WeightVector& weights, const UtilityVector& utilities);

// JSON ingestion/emission. Document shape:
//   { "stakeholders": [ { "id", "conflict_score", "constraints":
//       [ { "id", "kind": "hard"|"soft", "restrictiveness", "description" } ] } ],
//     "gamma", "beta", "tau_w" }
struct CalibrationInput {
  std::vector<StakeholderProfile> profiles;
  CalibrationConfig config;
};

CalibrationInput calibration_input_from_json(const nlohmann::json& doc);
nlohmann::json calibrated_weights_to_json(const CalibratedWeights& cw);

}  // namespace rewardlab
