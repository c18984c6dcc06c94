#include "rewardlab/variant_engine.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include "rewardlab/errors.hpp"

namespace rewardlab {
namespace {

constexpr char kUnitSep = '\x1f';
constexpr char kRecordSep = '\x1e';

constexpr std::int64_t kCountCap = std::numeric_limits<std::int64_t>::max();

std::int64_t clamped_mul(std::int64_t a, std::int64_t b) {
  if (b != 0 && a > kCountCap / b) return kCountCap;
  return a * b;
}

// Distinct arrangements of a sequence with possible repeats: the multinomial
// m! / prod(multiplicity!), built as a product of binomials so every
// intermediate stays integral. Saturates at int64 max.
template <typename T>
std::int64_t distinct_arrangements(const std::vector<T>& elems) {
  std::vector<std::int64_t> counts;  // multiplicity per first-occurrence group
  std::vector<bool> grouped(elems.size(), false);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (grouped[i]) continue;
    std::int64_t c = 0;
    for (std::size_t k = i; k < elems.size(); ++k) {
      if (elems[k] == elems[i]) {
        grouped[k] = true;
        ++c;
      }
    }
    counts.push_back(c);
  }
  std::int64_t result = 1;
  std::int64_t remaining = std::int64_t(elems.size());
  for (std::int64_t c : counts) {
    // result *= C(remaining, c), computed incrementally.
    std::int64_t binom = 1;
    for (std::int64_t t = 1; t <= c; ++t) {
      binom = clamped_mul(binom, remaining - c + t);
      binom /= t;  // exact: prefix products of C are integral
    }
    result = clamped_mul(result, binom);
    remaining -= c;
  }
  return result;
}

std::vector<std::size_t> draw_perm(std::size_t m, RngStream& rng) {
  std::vector<std::size_t> p(m);
  for (std::size_t i = 0; i < m; ++i) p[i] = i;
  for (std::size_t i = m; i > 1; --i) {
    std::size_t j = std::size_t(rng.uniform_index(std::uint64_t(i)));
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

// The version-th distinct state different from `current`, drawn by rejection.
// Availability is checked up front so the loop terminates with probability 1;
// the iteration cap is a safety valve, not a contract.
template <typename State, typename DrawFn>
State nth_distinct_state(int version, std::int64_t available, const State& current, DrawFn draw,
                         const char* family) {
  if (available < std::int64_t(version)) {
    throw Error(ErrorKind::not_applicable,
                std::string(family) + ": this document supports " +
                    std::to_string(available < 0 ? 0 : available) +
                    " distinct variants, version " + std::to_string(version) + " unavailable");
  }
  std::vector<State> seen;
  for (long attempt = 0; attempt < 2000000L; ++attempt) {
    State s = draw();
    if (s == current) continue;
    if (std::find(seen.begin(), seen.end(), s) != seen.end()) continue;
    seen.push_back(std::move(s));
    if (std::int64_t(seen.size()) == std::int64_t(version)) return seen.back();
  }
  throw Error(ErrorKind::domain, std::string(family) + ": variant sampling failed to converge");
}

template <typename T>
std::vector<T> arrange(const std::vector<T>& elems, const std::vector<std::size_t>& perm) {
  std::vector<T> out;
  out.reserve(elems.size());
  for (std::size_t i : perm) out.push_back(elems[i]);
  return out;
}

template <typename T>
std::vector<T> nth_distinct_arrangement(const std::vector<T>& elems, int version, RngStream& rng,
                                        const char* family) {
  std::int64_t available = distinct_arrangements(elems) - 1;
  auto draw = [&] { return arrange(elems, draw_perm(elems.size(), rng)); };
  return nth_distinct_state(version, available, elems, draw, family);
}

std::string_view default_header_label(std::string_view key) {
  if (key == "stakeholder") return "Coverage for";
  if (key == "itinerary") return "Itinerary";
  if (key == "summary") return "Satisfaction Summary";
  if (key == "tradeoffs") return "Trade-offs";
  return "Shared Benefits";  // "shared"
}

const std::map<std::string, std::vector<std::string>>& builtin_header_synonyms() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"stakeholder", {"Coverage for", "Plan for", "Serving", "Needs of"}},
      {"itinerary", {"Itinerary", "Schedule", "Day-by-Day Plan", "Route"}},
      {"summary", {"Satisfaction Summary", "Constraint Check", "Coverage Summary", "Needs Review"}},
      {"tradeoffs", {"Trade-offs", "Compromises", "Balancing Decisions", "Conflicts Resolved"}},
      {"shared", {"Shared Benefits", "Mutual Wins", "Group Perks", "Joint Gains"}},
  };
  return table;
}

bool section_visible(const PlanDoc& doc, std::string_view key) {
  if (key == "stakeholder") return !doc.stakeholder_sections.empty();
  if (key == "itinerary") return !doc.itinerary_facts.empty();
  if (key == "summary") return !doc.satisfaction_summary.empty();
  if (key == "tradeoffs") return !doc.tradeoff_paragraphs.empty();
  return !doc.shared_items.empty();
}

std::string effective_label(const PlanDoc& doc, std::string_view key) {
  auto it = doc.headers.find(std::string(key));
  return it != doc.headers.end() ? it->second : std::string(default_header_label(key));
}

std::string hex64(std::uint64_t b) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[std::size_t(i)] = digits[b & 0xF];
    b >>= 4;
  }
  return s;
}

std::string price_bits(double price) {
  if (price == 0.0) price = 0.0;  // fold -0 into +0
  return hex64(std::bit_cast<std::uint64_t>(price));
}

std::string price_text(double price) {
  std::ostringstream os;
  os << price;
  return os.str();
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

bool renders_any_body_line(const PlanDoc& doc) {
  for (const auto& sec : doc.stakeholder_sections) {
    if (!sec.blocks.empty()) return true;
  }
  return !doc.itinerary_facts.empty() || !doc.satisfaction_summary.empty() ||
         !doc.tradeoff_paragraphs.empty() || !doc.shared_items.empty();
}

// Emphasis only shows when some rendered title has a lowercase letter:
// "caps" is a no-op on letterless or already-uppercase titles, which would
// make distinct formatting states render identically.
bool any_rendered_title_has_lowercase(const PlanDoc& doc) {
  auto has_lower = [](const std::string& s) {
    return std::any_of(s.begin(), s.end(), [](char c) {
      return std::islower(static_cast<unsigned char>(c)) != 0;
    });
  };
  for (const auto& sec : doc.stakeholder_sections) {
    if (has_lower(effective_label(doc, "stakeholder") + " " + sec.stakeholder_id)) return true;
  }
  for (std::string_view key : kHeaderKeys) {
    if (key == "stakeholder") continue;
    if (section_visible(doc, key) && has_lower(effective_label(doc, key))) return true;
  }
  return false;
}

int rendered_section_count(const PlanDoc& doc) {
  int count = int(doc.stakeholder_sections.size());
  count += doc.itinerary_facts.empty() ? 0 : 1;
  count += doc.satisfaction_summary.empty() ? 0 : 1;
  count += doc.tradeoff_paragraphs.empty() ? 0 : 1;
  count += doc.shared_items.empty() ? 0 : 1;
  return count;
}

}  // namespace

std::string_view status_name(SatisfactionStatus status) {
  switch (status) {
    case SatisfactionStatus::satisfied: return "satisfied";
    case SatisfactionStatus::partially: return "partially";
    case SatisfactionStatus::violated: return "violated";
  }
  throw Error(ErrorKind::domain, "unknown satisfaction status");
}

SatisfactionStatus status_from_name(std::string_view name) {
  for (SatisfactionStatus s : {SatisfactionStatus::satisfied, SatisfactionStatus::partially,
                               SatisfactionStatus::violated}) {
    if (name == status_name(s)) return s;
  }
  throw Error(ErrorKind::validation, "unknown satisfaction status: " + std::string(name));
}

std::string_view format_style_name(FormatStyle style) {
  switch (style) {
    case FormatStyle::prose: return "prose";
    case FormatStyle::bullets: return "bullets";
    case FormatStyle::numbered: return "numbered";
    case FormatStyle::table: return "table";
  }
  throw Error(ErrorKind::domain, "unknown format style");
}

FormatStyle format_style_from_name(std::string_view name) {
  for (FormatStyle s :
       {FormatStyle::prose, FormatStyle::bullets, FormatStyle::numbered, FormatStyle::table}) {
    if (name == format_style_name(s)) return s;
  }
  throw Error(ErrorKind::validation, "unknown format style: " + std::string(name));
}

bool ItineraryFact::operator<(const ItineraryFact& o) const {
  return std::tie(location, time, price, activity) <
         std::tie(o.location, o.time, o.price, o.activity);
}

void PlanDoc::validate() const {
  std::set<std::string> declared(stakeholders.begin(), stakeholders.end());
  if (declared.size() != stakeholders.size()) {
    throw Error(ErrorKind::validation, "duplicate stakeholder ids in the declared set");
  }
  auto check_id = [&](const std::string& id, const char* where) {
    if (!declared.count(id)) {
      throw Error(ErrorKind::validation,
                  "stakeholder '" + id + "' in " + where + " is not in the declared set");
    }
  };
  for (const auto& sec : stakeholder_sections) check_id(sec.stakeholder_id, "sections");
  for (const auto& entry : satisfaction_summary) check_id(entry.stakeholder_id, "summary");
  for (const auto& item : shared_items) {
    std::set<std::string> seen;
    for (const auto& id : item.beneficiaries) {
      check_id(id, "shared item beneficiaries");
      if (!seen.insert(id).second) {
        throw Error(ErrorKind::validation,
                    "duplicate beneficiary '" + id + "' in shared item '" + item.item + "'");
      }
    }
  }
  for (const auto& fact : itinerary_facts) {
    if (!std::isfinite(fact.price)) {
      throw Error(ErrorKind::validation, "non-finite price in itinerary fact");
    }
  }
  std::vector<ItineraryFact> facts = itinerary_facts;
  std::sort(facts.begin(), facts.end());
  if (std::adjacent_find(facts.begin(), facts.end()) != facts.end()) {
    throw Error(ErrorKind::validation, "duplicate itinerary fact (facts form a set)");
  }
  for (const auto& [key, value] : headers) {
    if (std::find(kHeaderKeys.begin(), kHeaderKeys.end(), key) == kHeaderKeys.end()) {
      throw Error(ErrorKind::validation, "unknown header key '" + key + "'");
    }
  }
  if (formatting.indent < 0 || formatting.indent > 4) {
    throw Error(ErrorKind::validation, "formatting.indent must lie in [0,4]");
  }
  if (formatting.bullet_marker != "-" && formatting.bullet_marker != "*" &&
      formatting.bullet_marker != "+") {
    throw Error(ErrorKind::validation, "formatting.bullet_marker must be one of -, *, +");
  }
  if (formatting.emphasis != "plain" && formatting.emphasis != "caps" &&
      formatting.emphasis != "stars") {
    throw Error(ErrorKind::validation, "formatting.emphasis must be plain, caps, or stars");
  }
}

PlanDoc normalized(PlanDoc doc) {
  std::sort(doc.itinerary_facts.begin(), doc.itinerary_facts.end());
  std::sort(doc.stakeholders.begin(), doc.stakeholders.end());
  return doc;
}

bool operator==(const PlanDoc& a, const PlanDoc& b) {
  PlanDoc x = normalized(a);
  PlanDoc y = normalized(b);
  return x.stakeholders == y.stakeholders && x.stakeholder_sections == y.stakeholder_sections &&
         x.satisfaction_summary == y.satisfaction_summary &&
         x.tradeoff_paragraphs == y.tradeoff_paragraphs && x.shared_items == y.shared_items &&
         x.itinerary_facts == y.itinerary_facts && x.headers == y.headers &&
         x.format_style == y.format_style && x.formatting == y.formatting;
}

SemanticFingerprint fingerprint(const PlanDoc& doc) {
  doc.validate();
  std::string canon = "facts";
  std::vector<ItineraryFact> facts = doc.itinerary_facts;
  std::sort(facts.begin(), facts.end());
  for (const auto& f : facts) {
    canon += kRecordSep;
    canon += f.location;
    canon += kUnitSep;
    canon += f.time;
    canon += kUnitSep;
    canon += price_bits(f.price);
    canon += kUnitSep;
    canon += f.activity;
  }
  canon += kRecordSep;
  canon += "statuses";
  std::vector<std::string> rows;
  for (const auto& entry : doc.satisfaction_summary) {
    rows.push_back(entry.stakeholder_id + kUnitSep + std::string(status_name(entry.status)));
  }
  std::sort(rows.begin(), rows.end());
  for (const auto& row : rows) {
    canon += kRecordSep;
    canon += row;
  }
  canon += kRecordSep;
  canon += "stakeholders";
  std::vector<std::string> ids = doc.stakeholders;
  std::sort(ids.begin(), ids.end());
  for (const auto& id : ids) {
    canon += kRecordSep;
    canon += id;
  }
  canon += kRecordSep;
  canon += "strengths";
  std::vector<std::string> labels;
  for (const auto& entry : doc.satisfaction_summary) {
    labels.emplace_back(status_name(entry.status));
  }
  std::sort(labels.begin(), labels.end());
  for (const auto& label : labels) {
    canon += kRecordSep;
    canon += label;
  }
  return SemanticFingerprint{fnv1a64(canon)};
}

std::string_view family_name(VariantFamily family) {
  switch (family) {
    case VariantFamily::stakeholder_section_order: return "stakeholder_section_order";
    case VariantFamily::satisfaction_summary_order: return "satisfaction_summary_order";
    case VariantFamily::shared_benefit_attribution: return "shared_benefit_attribution";
    case VariantFamily::tradeoff_explanation_order: return "tradeoff_explanation_order";
    case VariantFamily::format_conversion: return "format_conversion";
    case VariantFamily::section_header_variant: return "section_header_variant";
    case VariantFamily::low_level_formatting: return "low_level_formatting";
    case VariantFamily::generic_paraphrase: return "generic_paraphrase";
    case VariantFamily::causal_direction: return "causal_direction";
    case VariantFamily::underserved_evidence_placement: return "underserved_evidence_placement";
    case VariantFamily::topic_position: return "topic_position";
  }
  throw Error(ErrorKind::domain, "unknown variant family");
}

VariantFamily family_from_name(std::string_view name) {
  for (VariantFamily f : kAllFamilies) {
    if (name == family_name(f)) return f;
  }
  throw Error(ErrorKind::validation, "unknown variant family: " + std::string(name));
}

bool is_rule_based(VariantFamily family) {
  return std::find(kRuleFamilies.begin(), kRuleFamilies.end(), family) != kRuleFamilies.end();
}

PlanDoc apply_variant(const PlanDoc& doc, VariantFamily family, int version, RngStream& rng,
                      const VariantOptions& options) {
  doc.validate();
  if (version < 1) throw Error(ErrorKind::domain, "variant version must be >= 1");

  if (!is_rule_based(family)) {
    if (options.rewriter == nullptr) {
      throw Error(ErrorKind::unsupported_family,
                  std::string(family_name(family)) + " requires a plugged rewriter");
    }
    PlanDoc out = options.rewriter->rewrite(doc, family, version, rng);
    if (!(fingerprint(out) == fingerprint(doc))) {
      throw Error(ErrorKind::constraint,
                  std::string(family_name(family)) + ": rewriter changed the semantic fingerprint");
    }
    return out;
  }

  PlanDoc out = doc;
  switch (family) {
    case VariantFamily::stakeholder_section_order: {
      if (doc.stakeholders.size() < 3) {
        throw Error(ErrorKind::not_applicable,
                    "stakeholder_section_order requires >= 3 stakeholders");
      }
      out.stakeholder_sections = nth_distinct_arrangement(doc.stakeholder_sections, version, rng,
                                                          "stakeholder_section_order");
      return out;
    }
    case VariantFamily::satisfaction_summary_order: {
      if (doc.stakeholders.size() < 3) {
        throw Error(ErrorKind::not_applicable,
                    "satisfaction_summary_order requires >= 3 stakeholders");
      }
      out.satisfaction_summary = nth_distinct_arrangement(doc.satisfaction_summary, version, rng,
                                                          "satisfaction_summary_order");
      return out;
    }
    case VariantFamily::shared_benefit_attribution: {
      std::int64_t space = 1;
      for (const auto& item : doc.shared_items) {
        space = clamped_mul(space, distinct_arrangements(item.beneficiaries));
      }
      auto draw = [&] {
        std::vector<std::vector<std::string>> orders;
        for (const auto& item : doc.shared_items) {
          orders.push_back(arrange(item.beneficiaries, draw_perm(item.beneficiaries.size(), rng)));
        }
        return orders;
      };
      std::vector<std::vector<std::string>> current;
      for (const auto& item : doc.shared_items) current.push_back(item.beneficiaries);
      auto orders =
          nth_distinct_state(version, space - 1, current, draw, "shared_benefit_attribution");
      for (std::size_t i = 0; i < orders.size(); ++i) {
        out.shared_items[i].beneficiaries = std::move(orders[i]);
      }
      return out;
    }
    case VariantFamily::tradeoff_explanation_order: {
      out.tradeoff_paragraphs = nth_distinct_arrangement(doc.tradeoff_paragraphs, version, rng,
                                                         "tradeoff_explanation_order");
      return out;
    }
    case VariantFamily::format_conversion: {
      // Deterministic enumeration of the other three styles in cycle order
      // prose -> bullets -> numbered -> table -> prose; no randomness needed.
      if (!renders_any_body_line(doc)) {
        throw Error(ErrorKind::not_applicable,
                    "format_conversion: no body lines render, styles are indistinguishable");
      }
      if (version > 3) {
        throw Error(ErrorKind::not_applicable,
                    "format_conversion: this document supports 3 distinct variants, version " +
                        std::to_string(version) + " unavailable");
      }
      out.format_style = FormatStyle((int(doc.format_style) + version) % 4);
      return out;
    }
    case VariantFamily::section_header_variant: {
      std::map<std::string, std::vector<std::string>> synonyms = builtin_header_synonyms();
      for (const auto& [key, labels] : options.header_synonyms) synonyms[key] = labels;
      std::vector<std::string> keys;
      for (std::string_view key : kHeaderKeys) {
        auto it = synonyms.find(std::string(key));
        if (section_visible(doc, key) && it != synonyms.end() && !it->second.empty()) {
          keys.push_back(std::string(key));
        }
      }
      if (keys.empty()) {
        throw Error(ErrorKind::not_applicable,
                    "section_header_variant: no rendered sections to relabel");
      }
      std::vector<std::string> current;
      std::int64_t space = 1;
      bool current_reachable = true;
      for (const auto& key : keys) {
        current.push_back(effective_label(doc, key));
        const auto& labels = synonyms.at(key);
        space = clamped_mul(space, std::int64_t(labels.size()));
        current_reachable = current_reachable &&
                            std::find(labels.begin(), labels.end(), current.back()) != labels.end();
      }
      auto draw = [&] {
        std::vector<std::string> assignment;
        for (const auto& key : keys) {
          const auto& labels = synonyms.at(key);
          assignment.push_back(labels[rng.uniform_index(labels.size())]);
        }
        return assignment;
      };
      auto assignment = nth_distinct_state(version, space - (current_reachable ? 1 : 0), current,
                                           draw, "section_header_variant");
      for (std::size_t i = 0; i < keys.size(); ++i) out.headers[keys[i]] = assignment[i];
      return out;
    }
    case VariantFamily::low_level_formatting: {
      // Only render-visible dimensions are drawn, so every distinct
      // formatting state produced here renders differently.
      if (rendered_section_count(doc) == 0) {
        throw Error(ErrorKind::not_applicable, "low_level_formatting: document renders no content");
      }
      const bool body = renders_any_body_line(doc);
      const bool marker =
          body && (doc.format_style == FormatStyle::bullets ||
                   doc.format_style == FormatStyle::numbered);
      const bool emphasis = any_rendered_title_has_lowercase(doc);
      const bool spacing = rendered_section_count(doc) >= 2;
      static const char* kMarkers[] = {"-", "*", "+"};
      static const char* kEmphases[] = {"plain", "caps", "stars"};
      std::int64_t space = 1;
      if (body) space = clamped_mul(space, 5);      // indent
      if (marker) space = clamped_mul(space, 3);    // bullet marker
      if (emphasis) space = clamped_mul(space, 3);  // title emphasis
      if (spacing) space = clamped_mul(space, 2);   // compact separators
      auto draw = [&] {
        Formatting f = doc.formatting;
        if (body) f.indent = int(rng.uniform_index(5));
        if (marker) f.bullet_marker = kMarkers[rng.uniform_index(3)];
        if (emphasis) f.emphasis = kEmphases[rng.uniform_index(3)];
        if (spacing) f.compact = rng.uniform_index(2) == 1;
        return f;
      };
      out.formatting =
          nth_distinct_state(version, space - 1, doc.formatting, draw, "low_level_formatting");
      return out;
    }
    default:
      throw Error(ErrorKind::domain, "unhandled variant family");
  }
}

std::string render(const PlanDoc& doc) {
  doc.validate();
  const Formatting& fmt = doc.formatting;
  const std::string pad(std::size_t(fmt.indent), ' ');

  auto title = [&](std::string text) {
    if (fmt.emphasis == "caps") {
      for (char& c : text) c = char(std::toupper(static_cast<unsigned char>(c)));
      return text;
    }
    if (fmt.emphasis == "stars") return "**" + text + "**";
    return text;
  };
  auto shape = [&](const std::string& item, int k) {
    switch (doc.format_style) {
      case FormatStyle::prose: return pad + item;
      case FormatStyle::bullets: return pad + fmt.bullet_marker + " " + item;
      case FormatStyle::numbered: {
        const std::string num = std::to_string(k);
        if (fmt.bullet_marker == "-") return pad + num + ". " + item;
        if (fmt.bullet_marker == "*") return pad + num + ") " + item;
        return pad + "(" + num + ") " + item;
      }
      case FormatStyle::table: return pad + "| " + std::to_string(k) + " | " + item + " |";
    }
    throw Error(ErrorKind::domain, "unknown format style");
  };
  auto section = [&](const std::string& heading, const std::vector<std::string>& items) {
    std::string chunk = title(heading);
    int k = 1;
    for (const auto& item : items) {
      chunk += "\n";
      chunk += shape(item, k++);
    }
    return chunk;
  };

  std::vector<std::string> chunks;
  for (const auto& sec : doc.stakeholder_sections) {
    chunks.push_back(
        section(effective_label(doc, "stakeholder") + " " + sec.stakeholder_id, sec.blocks));
  }
  if (!doc.itinerary_facts.empty()) {
    std::vector<ItineraryFact> facts = doc.itinerary_facts;
    std::sort(facts.begin(), facts.end());
    std::vector<std::string> lines;
    for (const auto& f : facts) {
      lines.push_back(f.location + " @ " + f.time + " -- " + f.activity + " (" +
                      price_text(f.price) + ")");
    }
    chunks.push_back(section(effective_label(doc, "itinerary"), lines));
  }
  if (!doc.satisfaction_summary.empty()) {
    std::vector<std::string> lines;
    for (const auto& entry : doc.satisfaction_summary) {
      lines.push_back(entry.stakeholder_id + ": " + std::string(status_name(entry.status)));
    }
    chunks.push_back(section(effective_label(doc, "summary"), lines));
  }
  if (!doc.tradeoff_paragraphs.empty()) {
    chunks.push_back(section(effective_label(doc, "tradeoffs"), doc.tradeoff_paragraphs));
  }
  if (!doc.shared_items.empty()) {
    std::vector<std::string> lines;
    for (const auto& item : doc.shared_items) {
      lines.push_back(item.item + " -- serves " + join(item.beneficiaries, ", "));
    }
    chunks.push_back(section(effective_label(doc, "shared"), lines));
  }

  std::string out;
  const char* sep = fmt.compact ? "\n" : "\n\n";
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (i > 0) out += sep;
    out += chunks[i];
  }
  out += "\n";
  return out;
}

nlohmann::json plan_doc_to_json(const PlanDoc& doc) {
  nlohmann::json j;
  j["stakeholders"] = doc.stakeholders;
  nlohmann::json sections = nlohmann::json::array();
  for (const auto& sec : doc.stakeholder_sections) {
    sections.push_back({{"stakeholder", sec.stakeholder_id}, {"blocks", sec.blocks}});
  }
  j["sections"] = std::move(sections);
  nlohmann::json summary = nlohmann::json::array();
  for (const auto& entry : doc.satisfaction_summary) {
    summary.push_back({{"stakeholder", entry.stakeholder_id},
                       {"status", std::string(status_name(entry.status))}});
  }
  j["summary"] = std::move(summary);
  j["tradeoffs"] = doc.tradeoff_paragraphs;
  nlohmann::json shared = nlohmann::json::array();
  for (const auto& item : doc.shared_items) {
    shared.push_back({{"item", item.item}, {"beneficiaries", item.beneficiaries}});
  }
  j["shared_items"] = std::move(shared);
  nlohmann::json facts = nlohmann::json::array();
  for (const auto& f : doc.itinerary_facts) {
    facts.push_back({{"location", f.location},
                     {"time", f.time},
                     {"price", f.price},
                     {"activity", f.activity}});
  }
  j["facts"] = std::move(facts);
  j["headers"] = doc.headers;
  j["format_style"] = std::string(format_style_name(doc.format_style));
  j["formatting"] = {{"indent", doc.formatting.indent},
                     {"bullet_marker", doc.formatting.bullet_marker},
                     {"emphasis", doc.formatting.emphasis},
                     {"compact", doc.formatting.compact}};
  return j;
}

PlanDoc plan_doc_from_json(const nlohmann::json& j) {
  try {
    PlanDoc doc;
    doc.stakeholders = j.at("stakeholders").get<std::vector<std::string>>();
    if (j.contains("sections")) {
      for (const auto& s : j.at("sections")) {
        StakeholderSection sec;
        sec.stakeholder_id = s.at("stakeholder").get<std::string>();
        if (s.contains("blocks")) sec.blocks = s.at("blocks").get<std::vector<std::string>>();
        doc.stakeholder_sections.push_back(std::move(sec));
      }
    }
    if (j.contains("summary")) {
      for (const auto& e : j.at("summary")) {
        doc.satisfaction_summary.push_back(
            {e.at("stakeholder").get<std::string>(),
             status_from_name(e.at("status").get<std::string>())});
      }
    }
    if (j.contains("tradeoffs")) {
      doc.tradeoff_paragraphs = j.at("tradeoffs").get<std::vector<std::string>>();
    }
    if (j.contains("shared_items")) {
      for (const auto& s : j.at("shared_items")) {
        doc.shared_items.push_back({s.at("item").get<std::string>(),
                                    s.at("beneficiaries").get<std::vector<std::string>>()});
      }
    }
    if (j.contains("facts")) {
      for (const auto& f : j.at("facts")) {
        doc.itinerary_facts.push_back({f.at("location").get<std::string>(),
                                       f.at("time").get<std::string>(),
                                       f.at("price").get<double>(),
                                       f.at("activity").get<std::string>()});
      }
    }
    if (j.contains("headers")) {
      for (const auto& [key, value] : j.at("headers").items()) {
        doc.headers[key] = value.get<std::string>();
      }
    }
    if (j.contains("format_style")) {
      doc.format_style = format_style_from_name(j.at("format_style").get<std::string>());
    }
    if (j.contains("formatting")) {
      const nlohmann::json& f = j.at("formatting");
      if (f.contains("indent")) doc.formatting.indent = f.at("indent").get<int>();
      if (f.contains("bullet_marker")) {
        doc.formatting.bullet_marker = f.at("bullet_marker").get<std::string>();
      }
      if (f.contains("emphasis")) doc.formatting.emphasis = f.at("emphasis").get<std::string>();
      if (f.contains("compact")) doc.formatting.compact = f.at("compact").get<bool>();
    }
    doc.validate();
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::validation, std::string("bad plan doc: ") + e.what());
  }
}

}  // namespace rewardlab
