#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fundscape/corpus.hpp"
#include "fundscape/errors.hpp"
#include "fundscape/text.hpp"

namespace fundscape {

enum class OrgType {
  kNationalAgency,
  kCharity,
  kCompany,
  kEcFrameworkProgram,
  kPanEuropeanNonEc,
  kRegionalPublic,
  kOtherPublic,
  kUnknown,
};

const char* org_type_name(OrgType t);
std::optional<OrgType> parse_org_type(std::string_view s);

struct FunderEntry {
  std::string funder_id;
  std::string canonical_name;
  std::vector<std::string> aliases;
  std::string country;  // ISO alpha-2 ("EU" allowed), empty = unknown
  OrgType org_type = OrgType::kUnknown;
};

// Canonical funder registry with an alias index sharing the matcher's
// normalization. Aliases (including canonical names) must resolve to
// exactly one funder; collisions are load errors.
class FunderRegistry {
 public:
  struct Resolution {
    const FunderEntry* entry = nullptr;
    enum class Kind { kNone, kExact, kTokenSubset } kind = Kind::kNone;
  };

  // Exact normalized lookup first; when `token_subset` is on, falls back to
  // aliases of >= 2 tokens whose token set is contained in the mention's.
  // Ambiguity across funders leaves the mention unresolved.
  Resolution resolve(std::string_view org_text, bool token_subset = false) const;

  const std::vector<FunderEntry>& entries() const { return entries_; }

 private:
  friend FunderRegistry load_funder_registry(const std::string& path);

  std::vector<FunderEntry> entries_;
  std::unordered_map<std::string, size_t> alias_index_;  // normalized alias -> entry
  std::vector<std::pair<std::vector<std::string>, size_t>> token_aliases_;
};

// Registry CSV columns: funder_id,canonical_name,aliases,country,org_type
// (aliases `|`-separated). JSON mirror: array of objects, same fields.
FunderRegistry load_funder_registry(const std::string& path);

// Fallback parser for raw acknowledgement text, used when structured funder
// fields are absent. Splits on semicolons and enumerating conjunctions
// (", and ", " and ", ", ") outside parentheses, then pulls trailing
// parenthesized/bracketed grant tokens (alphanumeric with `/ - .`, at least
// one digit) into grant_numbers. Unparseable text comes back as a single
// mention holding the whole string.
std::vector<FunderMention> parse_funding_text(std::string_view fa_text);

// Where a funder stands relative to the focal analysis country.
enum class FunderScope { kEuropean, kNationalFocal, kForeignPublic, kOtherOrUnknown };

const char* funder_scope_name(FunderScope s);

struct FunderClass {
  FunderMention mention;
  std::optional<std::string> funder_id;  // absent = unresolved
  OrgType org_type = OrgType::kUnknown;
  std::string country;  // empty = unknown
  FunderScope scope = FunderScope::kOtherOrUnknown;
  FunderRegistry::Resolution::Kind match_kind = FunderRegistry::Resolution::Kind::kNone;
};

struct ClassifyOptions {
  bool token_subset = false;
  // Compatibility switch: count pan-European non-EC funders (EMBO and the
  // like) as European instead of Other.
  bool embo_as_european = false;
};

FunderClass classify_funder(const FunderMention& mention, const FunderRegistry& registry,
                            const std::string& focal_country, const ClassifyOptions& opts = {});

// The five-way publication-level funding label.
enum class FundingCategory { kEuropean, kNational, kNationalAndEuropean, kOther, kNonFunded };

const char* funding_category_name(FundingCategory c);
std::optional<FundingCategory> parse_funding_category(std::string_view s);

// Publication-level label from the classified mentions: NonFunded when no
// acknowledgement exists; National+European when both a European-scope and
// a focal-national funder appear; then European > National > Other.
FundingCategory assign_funding_category(const std::vector<FunderClass>& classes, bool fa_present);

}  // namespace fundscape
