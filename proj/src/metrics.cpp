#include "rewardlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rewardlab/errors.hpp"

namespace rewardlab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_unit(std::span<const ScoreRecord> records, const char* what) {
  const ScoreRecord& first = records.front();
  for (const ScoreRecord& r : records) {
    if (r.seed_id != first.seed_id || r.n != first.n || r.quality != first.quality) {
      throw Error(ErrorKind::constraint,
                  std::string(what) + " must cover a single (seed_id, n, quality) unit");
    }
  }
}

std::vector<double> variant_scores(std::span<const ScoreRecord> records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const ScoreRecord& r : records) {
    if (r.family != kExactRepeatFamily) out.push_back(r.score);
  }
  return out;
}

// Per-coordinate sd/mean across the group's vectors, averaged over the
// coordinates whose mean is nonzero. Identical vectors give exactly zero.
double mean_coordinate_cv(std::span<const ScoreRecord> group,
                          const std::optional<Eigen::VectorXd> ScoreRecord::*field) {
  const Eigen::VectorXd& first = *(group.front().*field);
  Eigen::Index dim = first.size();
  double cv_sum = 0.0;
  int kept = 0;
  std::vector<double> column(group.size());
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (std::size_t k = 0; k < group.size(); ++k) column[k] = (*(group[k].*field))[i];
    double sd = std::sqrt(population_variance(column));
    double mean = 0.0;
    for (double v : column) mean += v;
    mean /= double(column.size());
    if (mean == 0.0) continue;
    cv_sum += sd / mean;
    ++kept;
  }
  return kept > 0 ? cv_sum / double(kept) : 0.0;
}

}  // namespace

std::string_view quality_name(QualityBand band) {
  switch (band) {
    case QualityBand::low:
      return "low";
    case QualityBand::medium:
      return "medium";
    case QualityBand::high:
      return "high";
  }
  throw Error(ErrorKind::validation, "unknown quality band");
}

QualityBand quality_from_name(std::string_view name) {
  if (name == "low") return QualityBand::low;
  if (name == "medium") return QualityBand::medium;
  if (name == "high") return QualityBand::high;
  throw Error(ErrorKind::validation, "quality must be low|medium|high, got '" +
                                         std::string(name) + "'");
}

UnitKey unit_key(const ScoreRecord& record) {
  return UnitKey{record.seed_id, record.n, record.quality};
}

std::map<UnitKey, std::vector<ScoreRecord>> group_by_unit(std::span<const ScoreRecord> records) {
  std::map<UnitKey, std::vector<ScoreRecord>> out;
  for (const ScoreRecord& r : records) out[unit_key(r)].push_back(r);
  return out;
}

double population_variance(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::domain, "variance of an empty sample");
  double shift = values.front();
  double sum = 0.0;
  for (double v : values) sum += v - shift;
  double mean = sum / double(values.size());
  double ss = 0.0;
  for (double v : values) {
    double d = (v - shift) - mean;
    ss += d * d;
  }
  return ss / double(values.size());
}

double percentile(std::vector<double> values, double fraction) {
  if (values.empty()) throw Error(ErrorKind::domain, "percentile of an empty sample");
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw Error(ErrorKind::domain, "percentile fraction must lie in [0, 1]");
  }
  std::sort(values.begin(), values.end());
  double h = fraction * double(values.size() - 1);
  std::size_t lo = std::size_t(h);
  if (lo + 1 >= values.size()) return values.back();
  double frac = h - double(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double sigma2_sem(std::span<const ScoreRecord> unit_records) {
  if (unit_records.empty()) {
    throw Error(ErrorKind::insufficient_data, "no records for the unit");
  }
  require_same_unit(unit_records, "sigma2_sem input");
  std::vector<double> scores = variant_scores(unit_records);
  if (scores.size() < 2) {
    throw Error(ErrorKind::insufficient_data, "sigma2_sem needs at least 2 variant records");
  }
  return population_variance(scores);
}

double sigma2_rep(std::span<const ScoreRecord> unit_records) {
  if (unit_records.empty()) {
    throw Error(ErrorKind::insufficient_data, "no records for the unit");
  }
  require_same_unit(unit_records, "sigma2_rep input");
  std::vector<double> scores;
  for (const ScoreRecord& r : unit_records) {
    if (r.family == kExactRepeatFamily) scores.push_back(r.score);
  }
  if (scores.size() < 2) {
    throw Error(ErrorKind::insufficient_data, "sigma2_rep needs at least 2 repeat records");
  }
  return population_variance(scores);
}

double cv_sem(std::span<const ScoreRecord> unit_records) {
  double var = sigma2_sem(unit_records);
  std::vector<double> scores = variant_scores(unit_records);
  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= double(scores.size());
  if (mean == 0.0) throw Error(ErrorKind::domain, "cv undefined at zero mean score");
  return std::sqrt(var) / mean;
}

double growth(const std::map<int, double>& sem_by_n) {
  auto lo = sem_by_n.find(2);
  auto hi = sem_by_n.find(8);
  if (lo == sem_by_n.end()) throw Error(ErrorKind::missing_data, "growth needs sigma2_sem at n=2");
  if (hi == sem_by_n.end()) throw Error(ErrorKind::missing_data, "growth needs sigma2_sem at n=8");
  if (lo->second < 0.0 || hi->second < 0.0) {
    throw Error(ErrorKind::domain, "variances must be nonnegative");
  }
  if (lo->second == 0.0) return hi->second > 0.0 ? kInf : kNaN;
  return hi->second / lo->second;
}

double sr_ratio(double sem, double rep) {
  if (!(sem >= 0.0) || !(rep >= 0.0)) {
    throw Error(ErrorKind::domain, "variances must be nonnegative");
  }
  if (rep == 0.0) return sem > 0.0 ? kInf : kNaN;
  return sem / rep;
}

double weight_shift(const Eigen::VectorXd& w, const Eigen::VectorXd& w_bar,
                    const Eigen::VectorXd& u) {
  if (w.size() != w_bar.size() || w.size() != u.size()) {
    throw Error(ErrorKind::dimension, "weight_shift needs equal-length w, w_bar, u");
  }
  return (w - w_bar).dot(u);
}

std::vector<double> delta_r_w(std::span<const ScoreRecord> group) {
  if (group.empty()) throw Error(ErrorKind::insufficient_data, "empty variant group");
  require_same_unit(group, "delta_r_w group");
  for (const ScoreRecord& r : group) {
    if (!r.weights.has_value() || !r.utilities.has_value()) {
      throw Error(ErrorKind::not_applicable,
                  "delta_r_w needs adaptive weights and utilities on every record");
    }
  }
  const Eigen::VectorXd& w0 = *group.front().weights;
  Eigen::Index dim = w0.size();
  for (const ScoreRecord& r : group) {
    if (r.weights->size() != dim || r.utilities->size() != dim) {
      throw Error(ErrorKind::dimension, "records disagree on stakeholder dimension");
    }
  }
  Eigen::VectorXd shift = Eigen::VectorXd::Zero(dim);
  for (const ScoreRecord& r : group) shift += *r.weights - w0;
  Eigen::VectorXd w_bar = w0 + shift / double(group.size());
  std::vector<double> out;
  out.reserve(group.size());
  for (const ScoreRecord& r : group) out.push_back(weight_shift(*r.weights, w_bar, *r.utilities));
  return out;
}

WeightDriftReport weight_drift_report(const std::vector<std::vector<ScoreRecord>>& groups) {
  if (groups.empty()) throw Error(ErrorKind::insufficient_data, "no variant groups");
  int n = groups.front().empty() ? 0 : groups.front().front().n;
  for (const auto& group : groups) {
    if (group.size() < 2) {
      throw Error(ErrorKind::insufficient_data, "drift groups need at least 2 records");
    }
    if (group.front().n != n) {
      throw Error(ErrorKind::constraint, "drift report pools groups at one stakeholder count");
    }
  }

  WeightDriftReport report;
  std::vector<double> pooled_over_sigma;
  double w_cv_sum = 0.0, u_cv_sum = 0.0, range_sum = 0.0, var_pct_sum = 0.0;
  for (const auto& group : groups) {
    std::vector<double> scores;
    scores.reserve(group.size());
    for (const ScoreRecord& r : group) scores.push_back(r.score);
    double score_var = population_variance(scores);
    if (score_var == 0.0) {
      ++report.groups_excluded;
      continue;
    }
    double sigma = std::sqrt(score_var);
    std::vector<double> shifts = delta_r_w(group);

    w_cv_sum += mean_coordinate_cv(group, &ScoreRecord::weights);
    u_cv_sum += mean_coordinate_cv(group, &ScoreRecord::utilities);
    double lo = shifts.front(), hi = shifts.front();
    for (double s : shifts) {
      pooled_over_sigma.push_back(std::abs(s) / sigma);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    range_sum += (hi - lo) / sigma;
    var_pct_sum += 100.0 * population_variance(shifts) / score_var;
    ++report.groups_used;
  }

  if (report.groups_used == 0) return report;  // all zeros, exclusions counted
  double g = double(report.groups_used);
  report.w_cv = w_cv_sum / g;
  report.u_cv = u_cv_sum / g;
  report.shift_range_over_sigma = range_sum / g;
  report.w_var_pct = var_pct_sum / g;
  double abs_sum = 0.0;
  for (double v : pooled_over_sigma) abs_sum += v;
  report.mean_abs_shift_over_sigma = abs_sum / double(pooled_over_sigma.size());
  report.p95_shift_over_sigma = percentile(pooled_over_sigma, 0.95);
  return report;
}

ConsistencyReport consistency_report(std::span<const ScoreRecord> records) {
  if (records.empty()) throw Error(ErrorKind::insufficient_data, "no score records");
  auto units = group_by_unit(records);

  struct CellAcc {
    double sem_sum = 0.0;
    int sem_units = 0;
    double rep_sum = 0.0;
    int rep_units = 0;
    double cv_sum = 0.0;
    int cv_units = 0;
  };
  std::map<int, CellAcc> cells;
  for (const auto& [key, unit_records] : units) {
    CellAcc& acc = cells[key.n];
    std::vector<double> variants = variant_scores(unit_records);
    if (variants.size() >= 2) {
      acc.sem_sum += population_variance(variants);
      ++acc.sem_units;
      double mean = 0.0;
      for (double s : variants) mean += s;
      mean /= double(variants.size());
      if (mean != 0.0) {
        acc.cv_sum += std::sqrt(population_variance(variants)) / mean;
        ++acc.cv_units;
      }
    }
    std::vector<double> repeats;
    for (const ScoreRecord& r : unit_records) {
      if (r.family == kExactRepeatFamily) repeats.push_back(r.score);
    }
    if (repeats.size() >= 2) {
      acc.rep_sum += population_variance(repeats);
      ++acc.rep_units;
    }
  }

  ConsistencyReport report;
  for (const auto& [n, acc] : cells) {
    ConsistencyCell cell;
    cell.n = n;
    cell.units = acc.sem_units;
    cell.rep_units = acc.rep_units;
    cell.sigma2_sem = acc.sem_units > 0 ? acc.sem_sum / double(acc.sem_units) : kNaN;
    cell.sigma2_rep = acc.rep_units > 0 ? acc.rep_sum / double(acc.rep_units) : kNaN;
    cell.cv = acc.cv_units > 0 ? acc.cv_sum / double(acc.cv_units) : kNaN;
    cell.sr = (acc.sem_units > 0 && acc.rep_units > 0) ? sr_ratio(cell.sigma2_sem, cell.sigma2_rep)
                                                       : kNaN;
    report.per_n.push_back(cell);
  }

  const ConsistencyCell* headline = &report.per_n.back();
  for (const ConsistencyCell& cell : report.per_n) {
    if (cell.n == 8) headline = &cell;
  }
  report.sigma2_sem = headline->sigma2_sem;
  report.sigma2_rep = headline->sigma2_rep;
  report.cv = headline->cv;
  report.sr_ratio = headline->sr;

  const ConsistencyCell* low = nullptr;
  const ConsistencyCell* high = nullptr;
  for (const ConsistencyCell& cell : report.per_n) {
    if (cell.n == 2) low = &cell;
    if (cell.n == 8) high = &cell;
  }
  if (low != nullptr && high != nullptr && low->units > 0 && high->units > 0) {
    if (low->sigma2_sem == 0.0) {
      report.growth = high->sigma2_sem > 0.0 ? kInf : kNaN;
    } else {
      report.growth = high->sigma2_sem / low->sigma2_sem;
    }
  } else {
    report.growth = kNaN;
  }
  return report;
}

nlohmann::json score_record_to_json(const ScoreRecord& record) {
  nlohmann::json doc;
  doc["seed_id"] = record.seed_id;
  doc["n"] = record.n;
  doc["quality"] = std::string(quality_name(record.quality));
  doc["family"] = record.family;
  doc["version"] = record.version;
  doc["judge"] = record.judge;
  doc["score"] = record.score;
  if (record.weights.has_value()) {
    doc["weights"] = std::vector<double>(record.weights->begin(), record.weights->end());
  }
  if (record.utilities.has_value()) {
    doc["utilities"] = std::vector<double>(record.utilities->begin(), record.utilities->end());
  }
  return doc;
}

namespace {

Eigen::VectorXd vector_field(const nlohmann::json& doc, const char* field) {
  const nlohmann::json& arr = doc.at(field);
  if (!arr.is_array()) throw Error(ErrorKind::validation, std::string(field) + " must be an array");
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

ScoreRecord score_record_from_json(const nlohmann::json& doc) {
  try {
    ScoreRecord record;
    record.seed_id = doc.at("seed_id").get<std::string>();
    record.n = doc.at("n").get<int>();
    record.quality = quality_from_name(doc.at("quality").get<std::string>());
    record.family = doc.at("family").get<std::string>();
    record.version = doc.at("version").get<int>();
    if (doc.contains("judge")) record.judge = doc.at("judge").get<std::string>();
    record.score = doc.at("score").get<double>();
    if (doc.contains("weights")) record.weights = vector_field(doc, "weights");
    if (doc.contains("utilities")) record.utilities = vector_field(doc, "utilities");
    if (record.n < 2) throw Error(ErrorKind::validation, "n must be >= 2");
    if (record.version < 1) throw Error(ErrorKind::validation, "version must be >= 1");
    if (record.family.empty()) throw Error(ErrorKind::validation, "family must be nonempty");
    return record;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::validation, std::string("bad score record: ") + e.what());
  }
}

std::string records_to_jsonl(std::span<const ScoreRecord> records) {
  std::string out;
  for (const ScoreRecord& r : records) {
    out += score_record_to_json(r).dump();
    out += '\n';
  }
  return out;
}

std::vector<ScoreRecord> records_from_jsonl(std::string_view text) {
  std::vector<ScoreRecord> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      out.push_back(score_record_from_json(doc));
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace rewardlab
