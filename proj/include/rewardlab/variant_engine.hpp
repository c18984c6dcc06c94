#pragma once

// Rule-based semantics-preserving presentation variants of a structured plan
// document, plus the semantic fingerprint that certifies them.
//
// A PlanDoc separates what a plan claims (itinerary facts, per-constraint
// satisfaction statuses, the stakeholder set, claim-strength labels) from how
// it is presented (section order, summary order, attribution order, format
// style, header labels, low-level formatting). The fingerprint hashes only
// the semantic half, canonically sorted, so any reordering or reformatting
// leaves it unchanged by construction while any factual edit moves it.
//
// Variant versions are the v-th distinct non-identity presentation state
// drawn from the caller's rng (seeded Fisher-Yates with rejection of the
// identity and of duplicates). When a document supports fewer distinct
// states than the requested version, the engine reports the shortage as a
// not-applicable error instead of padding with repeats.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nlohmann/json.hpp"
#include "rewardlab/rng.hpp"

namespace rewardlab {

// Claim-strength granularity for constraint satisfaction statements.
enum class SatisfactionStatus { satisfied, partially, violated };

std::string_view status_name(SatisfactionStatus status);
SatisfactionStatus status_from_name(std::string_view name);

struct ItineraryFact {
  std::string location;
  std::string time;
  double price = 0.0;
  std::string activity;

  bool operator==(const ItineraryFact&) const = default;
  bool operator<(const ItineraryFact& o) const;  // canonical sort order
};

struct StakeholderSection {
  std::string stakeholder_id;
  std::vector<std::string> blocks;

  bool operator==(const StakeholderSection&) const = default;
};

struct SummaryEntry {
  std::string stakeholder_id;
  SatisfactionStatus status = SatisfactionStatus::satisfied;

  bool operator==(const SummaryEntry&) const = default;
};

struct SharedItem {
  std::string item;
  std::vector<std::string> beneficiaries;  // order is presentation; the set is not

  bool operator==(const SharedItem&) const = default;
};

enum class FormatStyle { prose, bullets, numbered, table };

std::string_view format_style_name(FormatStyle style);
FormatStyle format_style_from_name(std::string_view name);

struct Formatting {
  int indent = 0;                   // 0..4 leading spaces on body lines
  std::string bullet_marker = "-";  // "-", "*", or "+"
  std::string emphasis = "plain";   // "plain", "caps", or "stars"
  bool compact = false;             // single vs. double newline between sections

  bool operator==(const Formatting&) const = default;
};

// Section keys render understands; headers may override their display labels.
inline constexpr std::array<std::string_view, 5> kHeaderKeys = {
    "stakeholder", "itinerary", "summary", "tradeoffs", "shared"};

struct PlanDoc {
  std::vector<std::string> stakeholders;  // declared set; order carries no meaning
  std::vector<StakeholderSection> stakeholder_sections;
  std::vector<SummaryEntry> satisfaction_summary;  // one row per constraint
  std::vector<std::string> tradeoff_paragraphs;
  std::vector<SharedItem> shared_items;
  std::vector<ItineraryFact> itinerary_facts;  // a set; storage order carries no meaning
  std::map<std::string, std::string> headers;  // known section keys only
  FormatStyle format_style = FormatStyle::prose;
  Formatting formatting;

  // Throws Error(validation) on dangling stakeholder ids, unknown header
  // keys, out-of-domain formatting, or non-finite prices.
  void validate() const;
};

// Canonical form: facts and the stakeholder set sorted. Equality compares
// canonical forms, so two docs differing only in storage order of the
// order-free fields are the same document.
PlanDoc normalized(PlanDoc doc);
bool operator==(const PlanDoc& a, const PlanDoc& b);
inline bool operator!=(const PlanDoc& a, const PlanDoc& b) { return !(a == b); }

struct SemanticFingerprint {
  std::uint64_t digest = 0;

  bool operator==(const SemanticFingerprint&) const = default;
};

// Hash over (facts, per-constraint statuses, stakeholder set, claim-strength
// labels), each canonically sorted; presentation fields are excluded by
// construction. Validates the doc first.
SemanticFingerprint fingerprint(const PlanDoc& doc);

enum class VariantFamily {
  // Rule-based transforms implemented here.
  stakeholder_section_order,
  satisfaction_summary_order,
  shared_benefit_attribution,
  tradeoff_explanation_order,
  format_conversion,
  section_header_variant,
  low_level_formatting,
  // Rewrite families that need a language model; declared so the family
  // namespace is complete, dispatched to a plugged rewriter or rejected.
  generic_paraphrase,
  causal_direction,
  underserved_evidence_placement,
  topic_position,
};

inline constexpr std::array<VariantFamily, 7> kRuleFamilies = {
    VariantFamily::stakeholder_section_order, VariantFamily::satisfaction_summary_order,
    VariantFamily::shared_benefit_attribution, VariantFamily::tradeoff_explanation_order,
    VariantFamily::format_conversion, VariantFamily::section_header_variant,
    VariantFamily::low_level_formatting};

inline constexpr std::array<VariantFamily, 11> kAllFamilies = {
    VariantFamily::stakeholder_section_order,
    VariantFamily::satisfaction_summary_order,
    VariantFamily::shared_benefit_attribution,
    VariantFamily::tradeoff_explanation_order,
    VariantFamily::format_conversion,
    VariantFamily::section_header_variant,
    VariantFamily::low_level_formatting,
    VariantFamily::generic_paraphrase,
    VariantFamily::causal_direction,
    VariantFamily::underserved_evidence_placement,
    VariantFamily::topic_position,
};

std::string_view family_name(VariantFamily family);
VariantFamily family_from_name(std::string_view name);
bool is_rule_based(VariantFamily family);

// Hook for plugging externally powered rewrite families. Implementations
// must preserve the fingerprint; apply_variant re-checks and rejects
// rewrites that drift.
class PresentationRewriter {
 public:
  virtual ~PresentationRewriter() = default;
  virtual PlanDoc rewrite(const PlanDoc& doc, VariantFamily family, int version,
                          RngStream& rng) = 0;
};

struct VariantOptions {
  // Extra or overriding label synonyms per section key, merged over the
  // built-in table.
  std::map<std::string, std::vector<std::string>> header_synonyms;
  PresentationRewriter* rewriter = nullptr;
};

// The v-th distinct presentation variant of doc under the given family,
// drawn from rng. Guarantees fingerprint(result) == fingerprint(doc) and
// that the result differs from doc in at least one rendered presentation
// field. Errors: domain (version < 1), not_applicable (stakeholder-order
// families below 3 stakeholders, nothing to permute, or version beyond the
// distinct-variant supply), unsupported_family (rewrite family with no
// plugged rewriter), constraint (a plugged rewriter changed semantics).
PlanDoc apply_variant(const PlanDoc& doc, VariantFamily family, int version, RngStream& rng,
                      const VariantOptions& options = {});

// Deterministic plain-text rendering. Docs differing in any rendered
// presentation field produce different texts; order-free storage details
// (fact order, stakeholder declaration order) are canonicalized away.
std::string render(const PlanDoc& doc);

// JSON ingest/emit; parsing validates.
nlohmann::json plan_doc_to_json(const PlanDoc& doc);
PlanDoc plan_doc_from_json(const nlohmann::json& j);

}  // namespace rewardlab
