#include "fundscape/funders.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <utility>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "fundscape/csv.hpp"

namespace fundscape {

using nlohmann::json;

const char* org_type_name(OrgType t) {
  switch (t) {
    case OrgType::kNationalAgency: return "NationalAgency";
    case OrgType::kCharity: return "Charity";
    case OrgType::kCompany: return "Company";
    case OrgType::kEcFrameworkProgram: return "ECFrameworkProgram";
    case OrgType::kPanEuropeanNonEc: return "PanEuropeanNonEC";
    case OrgType::kRegionalPublic: return "RegionalPublic";
    case OrgType::kOtherPublic: return "OtherPublic";
    case OrgType::kUnknown: return "Unknown";
  }
  return "?";
}

std::optional<OrgType> parse_org_type(std::string_view s) {
  for (OrgType t : {OrgType::kNationalAgency, OrgType::kCharity, OrgType::kCompany,
                    OrgType::kEcFrameworkProgram, OrgType::kPanEuropeanNonEc,
                    OrgType::kRegionalPublic, OrgType::kOtherPublic, OrgType::kUnknown}) {
    if (s == org_type_name(t)) return t;
  }
  return std::nullopt;
}

const char* funder_scope_name(FunderScope s) {
  switch (s) {
    case FunderScope::kEuropean: return "European";
    case FunderScope::kNationalFocal: return "NationalFocal";
    case FunderScope::kForeignPublic: return "ForeignPublic";
    case FunderScope::kOtherOrUnknown: return "OtherOrUnknown";
  }
  return "?";
}

const char* funding_category_name(FundingCategory c) {
  switch (c) {
    case FundingCategory::kEuropean: return "European";
    case FundingCategory::kNational: return "National";
    case FundingCategory::kNationalAndEuropean: return "NationalAndEuropean";
    case FundingCategory::kOther: return "Other";
    case FundingCategory::kNonFunded: return "NonFunded";
  }
  return "?";
}

std::optional<FundingCategory> parse_funding_category(std::string_view s) {
  for (FundingCategory c : {FundingCategory::kEuropean, FundingCategory::kNational,
                            FundingCategory::kNationalAndEuropean, FundingCategory::kOther,
                            FundingCategory::kNonFunded}) {
    if (s == funding_category_name(c)) return c;
  }
  return std::nullopt;
}

namespace {

bool known_country(const std::string& c) { return !c.empty(); }

void index_alias(FunderRegistry* reg, std::unordered_map<std::string, size_t>* index,
                 std::vector<std::pair<std::vector<std::string>, size_t>>* token_aliases,
                 const std::string& alias, size_t entry_idx) {
  std::string norm = normalize_term(alias);
  if (norm.empty())
    throw Error(ErrorCode::kMalformedRow, "funder '" + reg->entries()[entry_idx].funder_id +
                                              "' has an alias that is empty after normalization");
  auto [it, inserted] = index->try_emplace(norm, entry_idx);
  if (!inserted) {
    if (it->second == entry_idx) return;  // same entry listing a variant twice
    throw Error(ErrorCode::kAliasCollision,
                "alias '" + alias + "' maps to both '" + reg->entries()[it->second].funder_id +
                    "' and '" + reg->entries()[entry_idx].funder_id + "'");
  }
  auto tokens = tokenize(norm);
  if (tokens.size() >= 2) token_aliases->emplace_back(std::move(tokens), entry_idx);
}

}  // namespace

FunderRegistry load_funder_registry(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open funder registry: " + path);
  skip_bom(in);

  FunderRegistry reg;
  std::unordered_set<std::string> seen_ids;

  auto add_entry = [&](FunderEntry e, int line) {
    if (e.funder_id.empty() || trim(e.canonical_name).empty())
      throw Error(ErrorCode::kMalformedRow,
                  "line " + std::to_string(line) + ": funder_id and canonical_name are required");
    if (!seen_ids.insert(e.funder_id).second)
      throw Error(ErrorCode::kDuplicateFunderId,
                  "line " + std::to_string(line) + ": duplicate funder_id '" + e.funder_id + "'");
    reg.entries_.push_back(std::move(e));
  };

  if (path.ends_with(".json")) {
    json doc;
    try {
      in >> doc;
    } catch (const json::exception& ex) {
      throw Error(ErrorCode::kMalformedRow, std::string("invalid registry JSON: ") + ex.what());
    }
    if (!doc.is_array())
      throw Error(ErrorCode::kMalformedRow, "funder registry JSON must be an array");
    int idx = 0;
    for (const auto& j : doc) {
      ++idx;
      FunderEntry e;
      e.funder_id = j.value("funder_id", "");
      e.canonical_name = j.value("canonical_name", "");
      if (auto it = j.find("aliases"); it != j.end() && !it->is_null())
        e.aliases = it->get<std::vector<std::string>>();
      e.country = j.value("country", "");
      auto ot = parse_org_type(j.value("org_type", "Unknown"));
      if (!ot)
        throw Error(ErrorCode::kMalformedRow,
                    "entry " + std::to_string(idx) + ": unknown org_type");
      e.org_type = *ot;
      add_entry(std::move(e), idx);
    }
  } else {
    std::vector<std::string> fields;
    int line = 1;
    bool header_skipped = false;
    while (true) {
      int record_line = line;
      if (!read_csv_record(in, &fields, &line)) break;
      if (fields.size() == 1 && (fields[0].empty() || fields[0][0] == '#')) continue;
      if (!header_skipped && trim(fields[0]) == "funder_id") {
        header_skipped = true;
        continue;
      }
      if (fields.size() < 5)
        throw Error(ErrorCode::kMalformedRow,
                    "line " + std::to_string(record_line) + ": expected 5 columns");
      FunderEntry e;
      e.funder_id = trim(fields[0]);
      e.canonical_name = trim(fields[1]);
      e.aliases = split_multi(fields[2], '|');
      e.country = trim(fields[3]);
      if (e.country == "Unknown") e.country.clear();
      auto ot = parse_org_type(trim(fields[4]));
      if (!ot)
        throw Error(ErrorCode::kMalformedRow, "line " + std::to_string(record_line) +
                                                  ": unknown org_type '" + trim(fields[4]) + "'");
      e.org_type = *ot;
      add_entry(std::move(e), record_line);
    }
  }

  for (size_t i = 0; i < reg.entries_.size(); ++i) {
    index_alias(&reg, &reg.alias_index_, &reg.token_aliases_, reg.entries_[i].canonical_name, i);
    for (const auto& a : reg.entries_[i].aliases)
      index_alias(&reg, &reg.alias_index_, &reg.token_aliases_, a, i);
  }
  return reg;
}

FunderRegistry::Resolution FunderRegistry::resolve(std::string_view org_text,
                                                   bool token_subset) const {
  std::string norm = normalize_term(org_text);
  if (auto it = alias_index_.find(norm); it != alias_index_.end()) {
    return {&entries_[it->second], Resolution::Kind::kExact};
  }
  if (!token_subset) return {};

  auto mention_tokens = tokenize(norm);
  std::set<std::string> mention_set(mention_tokens.begin(), mention_tokens.end());
  size_t best_len = 0;
  size_t best_entry = 0;
  bool ambiguous = false;
  for (const auto& [alias_tokens, entry_idx] : token_aliases_) {
    if (alias_tokens.size() < best_len || alias_tokens.size() > mention_set.size()) continue;
    bool contained = std::all_of(alias_tokens.begin(), alias_tokens.end(),
                                 [&](const std::string& t) { return mention_set.count(t) > 0; });
    if (!contained) continue;
    if (alias_tokens.size() > best_len) {
      best_len = alias_tokens.size();
      best_entry = entry_idx;
      ambiguous = false;
    } else if (entry_idx != best_entry) {
      ambiguous = true;
    }
  }
  if (best_len == 0 || ambiguous) return {};
  return {&entries_[best_entry], Resolution::Kind::kTokenSubset};
}

std::vector<FunderMention> parse_funding_text(std::string_view fa_text) {
  std::vector<FunderMention> mentions;

  // Split at top-level delimiters; parenthesized/bracketed stretches are
  // kept intact so grant lists like "(G1, G2)" survive.
  std::vector<std::string> pieces;
  std::string current;
  size_t depth = 0;
  size_t i = 0;
  auto flush = [&] {
    std::string t = trim(current);
    if (!t.empty()) pieces.push_back(std::move(t));
    current.clear();
  };
  while (i < fa_text.size()) {
    char c = fa_text[i];
    if (c == '(' || c == '[') ++depth;
    if ((c == ')' || c == ']') && depth > 0) --depth;
    if (depth == 0) {
      if (c == ';') {
        flush();
        ++i;
        continue;
      }
      auto rest = fa_text.substr(i);
      size_t delim = 0;
      if (rest.starts_with(", and ")) delim = 6;
      else if (rest.starts_with(" and ")) delim = 5;
      else if (rest.starts_with(", ")) delim = 2;
      if (delim > 0) {
        flush();
        i += delim;
        continue;
      }
    }
    current.push_back(c);
    ++i;
  }
  flush();

  auto grant_token = [](std::string_view t) {
    if (t.empty() || !std::isalnum(static_cast<unsigned char>(t[0]))) return false;
    bool has_digit = false;
    for (char c : t) {
      if (std::isdigit(static_cast<unsigned char>(c))) has_digit = true;
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '/' && c != '-' && c != '.')
        return false;
    }
    return has_digit;
  };

  for (auto& piece : pieces) {
    std::string org = piece;
    std::vector<std::string> grants;
    // Peel trailing (…) / […] groups whose content is all grant tokens.
    while (true) {
      std::string t = trim(org);
      if (t.empty() || (t.back() != ')' && t.back() != ']')) break;
      char open = t.back() == ')' ? '(' : '[';
      size_t pos = t.rfind(open);
      if (pos == std::string::npos) break;
      std::string inner = t.substr(pos + 1, t.size() - pos - 2);
      std::vector<std::string> tokens;
      std::string tok;
      for (char c : inner + ",") {
        if (c == ',' || c == ';' || std::isspace(static_cast<unsigned char>(c))) {
          if (!tok.empty()) tokens.push_back(std::exchange(tok, {}));
        } else {
          tok.push_back(c);
        }
      }
      if (tokens.empty() || !std::all_of(tokens.begin(), tokens.end(), grant_token)) break;
      grants.insert(grants.begin(), tokens.begin(), tokens.end());
      org = t.substr(0, pos);
    }
    org = trim(org);
    while (!org.empty() && (org.back() == ',' || org.back() == '.')) org.pop_back();
    org = trim(org);
    if (org.empty()) org = trim(piece);  // grants-only piece: keep it verbatim
    mentions.push_back({std::move(org), std::move(grants)});
  }

  if (mentions.empty()) {
    std::string whole = trim(fa_text);
    if (!whole.empty()) mentions.push_back({std::move(whole), {}});
  }
  return mentions;
}

FunderClass classify_funder(const FunderMention& mention, const FunderRegistry& registry,
                            const std::string& focal_country, const ClassifyOptions& opts) {
  FunderClass fc;
  fc.mention = mention;

  auto res = registry.resolve(mention.org_text, opts.token_subset);
  fc.match_kind = res.kind;
  if (res.entry == nullptr) {
    // Unresolved: identity unknown, so scope is unknowable too.
    return fc;
  }
  fc.funder_id = res.entry->funder_id;
  fc.org_type = res.entry->org_type;
  fc.country = res.entry->country;

  bool domestic_eligible = fc.org_type == OrgType::kNationalAgency ||
                           fc.org_type == OrgType::kCharity ||
                           fc.org_type == OrgType::kRegionalPublic ||
                           fc.org_type == OrgType::kOtherPublic;
  if (fc.org_type == OrgType::kEcFrameworkProgram) {
    fc.scope = FunderScope::kEuropean;
  } else if (fc.org_type == OrgType::kPanEuropeanNonEc) {
    fc.scope = opts.embo_as_european ? FunderScope::kEuropean : FunderScope::kOtherOrUnknown;
  } else if (domestic_eligible && known_country(fc.country) && fc.country == focal_country) {
    fc.scope = FunderScope::kNationalFocal;
  } else if (domestic_eligible && known_country(fc.country)) {
    fc.scope = FunderScope::kForeignPublic;
  } else {
    // Companies, unknown countries, anything else.
    fc.scope = FunderScope::kOtherOrUnknown;
  }
  return fc;
}

FundingCategory assign_funding_category(const std::vector<FunderClass>& classes,
                                        bool fa_present) {
  if (!fa_present || classes.empty()) return FundingCategory::kNonFunded;
  bool has_european = false;
  bool has_national = false;
  for (const auto& c : classes) {
    if (c.scope == FunderScope::kEuropean) has_european = true;
    if (c.scope == FunderScope::kNationalFocal) has_national = true;
  }
  if (has_european && has_national) return FundingCategory::kNationalAndEuropean;
  if (has_european) return FundingCategory::kEuropean;
  if (has_national) return FundingCategory::kNational;
  return FundingCategory::kOther;
}

}  // namespace fundscape
