#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fundscape/errors.hpp"

namespace fundscape {

// One registry entry: a disease with its preferred name, synonyms, and the
// subset of those terms flagged as unsafe to match (too short, common
// English words, dictionary-word acronyms).
struct DiseaseEntry {
  std::string disease_id;
  std::string preferred_name;
  std::vector<std::string> synonyms;
  std::set<std::string> ambiguous_terms;  // subset of {preferred_name} ∪ synonyms

  bool operator==(const DiseaseEntry&) const = default;
};

enum class MatchPolicy {
  kPreferredOnly,               // synonyms never match
  kPreferredPlusVettedSynonyms  // preferred names plus non-ambiguous synonyms
};

const char* match_policy_name(MatchPolicy p);

struct DiseaseLexicon {
  std::vector<DiseaseEntry> entries;
  MatchPolicy match_policy = MatchPolicy::kPreferredOnly;
};

// Heuristics deciding which terms are too ambiguous to match. A term is
// flagged when it is shorter than min_length codepoints, equals a
// common-word entry case-insensitively, or is an all-caps acronym of at
// most acronym_max_length codepoints that spells a dictionary word.
struct AmbiguityRules {
  size_t min_length = 4;
  std::set<std::string> common_words;  // lowercase
  bool acronym_rule = true;
  size_t acronym_max_length = 5;
  // Word list for the acronym rule; falls back to common_words when empty.
  std::set<std::string> dictionary_words;
};

// Rules with the bundled ~3,000-entry English frequency list.
const AmbiguityRules& default_ambiguity_rules();
const std::set<std::string>& builtin_common_words();

// Loads the registry snapshot. CSV columns:
//   disease_id,preferred_name,synonyms,ambiguous
// (synonyms and ambiguous are `|`-separated; ambiguous is optional). The
// JSON mirror is an array of objects with the same field names. Every term
// is normalized once for duplicate detection; the given ambiguity rules are
// applied as an auto-flagging pass on top of any flags in the file.
DiseaseLexicon load_lexicon(const std::string& path,
                            const AmbiguityRules& rules = default_ambiguity_rules(),
                            MatchPolicy policy = MatchPolicy::kPreferredOnly);

// Returns a lexicon with every rule-matching term flagged; never unflags,
// so the pass is monotone and idempotent.
DiseaseLexicon flag_ambiguous(const DiseaseLexicon& lexicon, const AmbiguityRules& rules);

// The (term, disease_id) pairs eligible for matching under the lexicon's
// policy. Never contains a flagged term; surface forms are returned as-is
// (the matcher normalizes).
std::vector<std::pair<std::string, std::string>> effective_terms(const DiseaseLexicon& lexicon);

}  // namespace fundscape
