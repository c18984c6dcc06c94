#pragma once
// Consistency and weight-drift statistics over judge score records:
// semantic/repeat variance, growth and S/R ratios, and the weight-induced
// score-shift summary.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "nlohmann/json.hpp"

namespace rewardlab {

enum class QualityBand { low, medium, high };

std::string_view quality_name(QualityBand band);
QualityBand quality_from_name(std::string_view name);

// Family tag for repeat scoring of the unchanged presentation.
inline constexpr std::string_view kExactRepeatFamily = "exact_repeat";

// One judge evaluation of one plan presentation.
struct ScoreRecord {
  std::string seed_id;  // base scenario the presentation derives from
  int n = 2;            // stakeholder count, >= 2
  QualityBand quality = QualityBand::medium;
  std::string family;  // variant family, or kExactRepeatFamily
  int version = 1;     // >= 1
  std::string judge;   // scorer tag; aggregation keys ignore it
  double score = 0.0;  // on the scale declared by the producing judge
  std::optional<Eigen::VectorXd> weights;    // simplex the judge applied
  std::optional<Eigen::VectorXd> utilities;  // per-stakeholder estimates
};

// Records aggregate per unit s = (seed_id, n, quality).
struct UnitKey {
  std::string seed_id;
  int n = 0;
  QualityBand quality = QualityBand::medium;
  auto operator<=>(const UnitKey&) const = default;
};

UnitKey unit_key(const ScoreRecord& record);
std::map<UnitKey, std::vector<ScoreRecord>> group_by_unit(std::span<const ScoreRecord> records);

// Divide-by-N variance, evaluated after shifting by the first element so a
// constant input comes out exactly zero.
double population_variance(std::span<const double> values);

// Linearly interpolated percentile at `fraction` in [0, 1] (sorted-order
// index fraction * (N - 1)).
double percentile(std::vector<double> values, double fraction);

// Score variance across semantics-preserving variants of one unit
// (exact-repeat records are ignored; needs >= 2 variant records).
double sigma2_sem(std::span<const ScoreRecord> unit_records);

// Score variance across exact repeats of one unit (needs >= 2 repeats).
double sigma2_rep(std::span<const ScoreRecord> unit_records);

// Relative score spread of one unit's variants: sqrt(sigma2_sem) / mean score.
double cv_sem(std::span<const ScoreRecord> unit_records);

// sigma2_sem(n=8) / sigma2_sem(n=2). Zero denominator with a positive
// numerator yields +infinity; 0/0 yields NaN.
double growth(const std::map<int, double>& sem_by_n);

// sigma2_sem / sigma2_rep. Zero rep variance with positive sem variance
// yields +infinity; 0/0 yields the distinct NaN sentinel.
double sr_ratio(double sem, double rep);

// Score shift of one evaluation against reference weights:
// sum_i (w_i - w_bar_i) * u_i.
double weight_shift(const Eigen::VectorXd& w, const Eigen::VectorXd& w_bar,
                    const Eigen::VectorXd& u);

// Per-record shift against the group-mean weights. The group is one unit's
// records, each carrying weights and utilities. The reference mean is
// evaluated as w0 + mean(w_k - w0), so identical weights produce exact zeros.
std::vector<double> delta_r_w(std::span<const ScoreRecord> group);

struct WeightDriftReport {
  double w_cv = 0.0;    // weight spread: per-coordinate sd/mean, averaged
  double u_cv = 0.0;    // utility spread, same construction
  double mean_abs_shift_over_sigma = 0.0;  // pooled mean of |shift| / group score sd
  double p95_shift_over_sigma = 0.0;       // pooled interpolated 95th percentile
  double shift_range_over_sigma = 0.0;     // per-group (max-min)/sd, averaged
  double w_var_pct = 0.0;  // 100 * Var(shift)/Var(score) within group, averaged
  int groups_used = 0;
  int groups_excluded = 0;  // zero score-spread groups, left out of every column
};

// Drift summary over variant groups sharing one stakeholder count. Groups
// whose within-group score sd is zero are excluded and counted; with no
// usable groups all statistics report as zero.
WeightDriftReport weight_drift_report(const std::vector<std::vector<ScoreRecord>>& groups);

struct ConsistencyCell {
  int n = 0;
  double sigma2_rep = 0.0;  // NaN when no unit at this n has >= 2 repeats
  double sigma2_sem = 0.0;  // NaN when no unit at this n has >= 2 variants
  double cv = 0.0;          // NaN when undefined for every unit
  double sr = 0.0;          // ratio of the cell means; NaN when undefined
  int units = 0;            // units contributing to sigma2_sem
  int rep_units = 0;        // units contributing to sigma2_rep
};

struct ConsistencyReport {
  // Headline values come from the n=8 cell when present, otherwise the
  // largest-n cell.
  double sigma2_sem = 0.0;
  double sigma2_rep = 0.0;
  double cv = 0.0;
  double sr_ratio = 0.0;
  double growth = 0.0;  // cell(8)/cell(2) means; NaN when either is undefined
  std::vector<ConsistencyCell> per_n;  // ascending n
};

// Pools whatever records it is given; callers slice by judge/quality first
// when a narrower scope is wanted. Cells are means over units.
ConsistencyReport consistency_report(std::span<const ScoreRecord> records);

// JSON-lines persistence of score records.
nlohmann::json score_record_to_json(const ScoreRecord& record);
ScoreRecord score_record_from_json(const nlohmann::json& doc);
std::string records_to_jsonl(std::span<const ScoreRecord> records);
std::vector<ScoreRecord> records_from_jsonl(std::string_view text);

}  // namespace rewardlab
