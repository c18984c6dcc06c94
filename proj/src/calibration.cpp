#include "rewardlab/calibration.hpp"

#include <cmath>

#include "rewardlab/errors.hpp"

namespace rewardlab {

void CalibrationConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorKind::domain, "gamma must be in (0,1)");
  if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorKind::domain, "beta must be in (0,1)");
  if (!(tau_w > 0.0)) throw Error(ErrorKind::domain, "tau_w must be > 0");
}

double difficulty(const StakeholderProfile& profile, const CalibrationConfig& cfg) {
  cfg.validate();
  if (!(profile.conflict_score >= 0.0)) {
    throw Error(ErrorKind::domain, "conflict_score must be >= 0");
  }
  double hard = 0.0, soft = 0.0;
  for (const auto& c : profile.constraints) {
    if (!(c.restrictiveness >= 0.0)) {
      throw Error(ErrorKind::domain, "restrictiveness must be >= 0 (constraint " + c.id + ")");
    }
    (c.hard ? hard : soft) += c.restrictiveness;
  }
  return hard + cfg.gamma * soft + cfg.beta * profile.conflict_score;
}

CalibratedWeights calibrate_weights(const std::vector<StakeholderProfile>& profiles,
                                    const CalibrationConfig& cfg) {
  cfg.validate();
  if (profiles.empty()) throw Error(ErrorKind::insufficient_data, "no stakeholder profiles");

  const Eigen::Index n = Eigen::Index(profiles.size());
  CalibratedWeights out;
  out.difficulty.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) out.difficulty[i] = difficulty(profiles[size_t(i)], cfg);

  double dmax = out.difficulty.maxCoeff();
  Eigen::VectorXd e = ((out.difficulty.array() - dmax) / cfg.tau_w).exp();
  out.weights = e / e.sum();
  return out;
}

double aggregate(const WeightVector& weights, const UtilityVector& utilities) {
  if (weights.size() != utilities.size()) {
    throw Error(ErrorKind::dimension, "aggregate: length mismatch");
  }
  return weights.values().dot(utilities.values());
}

CalibrationInput calibration_input_from_json(const nlohmann::json& doc) {
  CalibrationInput in;
  if (!doc.is_object() || !doc.contains("stakeholders") || !doc["stakeholders"].is_array()) {
    throw Error(ErrorKind::validation, "calibration input: missing \"stakeholders\" array");
  }
  in.config.gamma = doc.value("gamma", 0.5);
  in.config.beta = doc.value("beta", 0.5);
  in.config.tau_w = doc.value("tau_w", 5.0);
  in.config.validate();

  for (const auto& s : doc["stakeholders"]) {
    StakeholderProfile p;
    if (!s.contains("id") || !s["id"].is_string()) {
      throw Error(ErrorKind::validation, "stakeholders[].id: missing or not a string");
    }
    p.id = s["id"].get<std::string>();
    p.conflict_score = s.value("conflict_score", 0.0);
    if (s.contains("constraints")) {
      if (!s["constraints"].is_array()) {
        throw Error(ErrorKind::validation, "stakeholders[].constraints: not an array");
      }
      for (const auto& c : s["constraints"]) {
        Constraint con;
        con.id = c.value("id", std::string());
        std::string kind = c.value("kind", std::string("hard"));
        if (kind == "hard") {
          con.hard = true;
        } else if (kind == "soft") {
          con.hard = false;
        } else {
          throw Error(ErrorKind::validation,
                      "constraints[].kind: expected \"hard\" or \"soft\", got \"" + kind + "\"");
        }
        con.restrictiveness = c.value("restrictiveness", 1.0);
        con.description = c.value("description", std::string());
        p.constraints.push_back(std::move(con));
      }
    }
    in.profiles.push_back(std::move(p));
  }
  if (in.profiles.empty()) {
    throw Error(ErrorKind::validation, "stakeholders: array is empty");
  }
  return in;
}

nlohmann::json calibrated_weights_to_json(const CalibratedWeights& cw) {
  nlohmann::json out;
  out["difficulty"] = std::vector<double>(cw.difficulty.begin(), cw.difficulty.end());
  out["weights"] = std::vector<double>(cw.weights.begin(), cw.weights.end());
  return out;
}

}  // namespace rewardlab
