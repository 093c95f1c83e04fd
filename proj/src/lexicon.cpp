#include "fundscape/lexicon.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "fundscape/csv.hpp"
#include "fundscape/text.hpp"

// Generated from data/common_words.txt at configure time; defines
// kCommonWordsBlob, one word per line.
#include "common_words_data.hpp"

namespace fundscape {

using nlohmann::json;

const char* match_policy_name(MatchPolicy p) {
  return p == MatchPolicy::kPreferredOnly ? "preferred_only" : "preferred_plus_vetted_synonyms";
}

const std::set<std::string>& builtin_common_words() {
  static const std::set<std::string> words = [] {
    std::set<std::string> w;
    std::istringstream in{std::string(kCommonWordsBlob)};
    std::string line;
    while (std::getline(in, line)) {
      std::string t = trim(line);
      if (!t.empty() && t[0] != '#') w.insert(ascii_lower(t));
    }
    return w;
  }();
  return words;
}

const AmbiguityRules& default_ambiguity_rules() {
  static const AmbiguityRules rules = [] {
    AmbiguityRules r;
    r.common_words = builtin_common_words();
    return r;
  }();
  return rules;
}

namespace {

void validate_entry(const DiseaseEntry& e, int line) {
  auto fail = [&](ErrorCode code, const std::string& msg) {
    throw Error(code, "line " + std::to_string(line) + ": " + msg);
  };
  if (trim(e.preferred_name).empty())
    fail(ErrorCode::kEmptyPreferredName, "entry '" + e.disease_id + "' has no preferred name");
  std::unordered_set<std::string> seen;
  seen.insert(normalize_term(e.preferred_name));
  for (const auto& s : e.synonyms) {
    if (trim(s).empty())
      fail(ErrorCode::kMalformedRow, "entry '" + e.disease_id + "' has an empty synonym");
    if (!seen.insert(normalize_term(s)).second)
      fail(ErrorCode::kMalformedRow,
           "entry '" + e.disease_id + "' lists term '" + s + "' twice after normalization");
  }
  for (const auto& a : e.ambiguous_terms) {
    if (a != e.preferred_name &&
        std::find(e.synonyms.begin(), e.synonyms.end(), a) == e.synonyms.end())
      fail(ErrorCode::kMalformedRow,
           "entry '" + e.disease_id + "' flags unknown term '" + a + "' as ambiguous");
  }
}

bool rule_flags(const std::string& term, const AmbiguityRules& rules) {
  if (codepoint_count(term) < rules.min_length) return true;
  std::string folded = normalize_term(term);
  if (rules.common_words.count(folded)) return true;
  if (rules.acronym_rule && is_all_caps(term) &&
      codepoint_count(term) <= rules.acronym_max_length) {
    const auto& dict = rules.dictionary_words.empty() ? rules.common_words : rules.dictionary_words;
    if (dict.count(folded)) return true;
  }
  return false;
}

}  // namespace

DiseaseLexicon flag_ambiguous(const DiseaseLexicon& lexicon, const AmbiguityRules& rules) {
  DiseaseLexicon out = lexicon;
  for (auto& e : out.entries) {
    if (rule_flags(e.preferred_name, rules)) e.ambiguous_terms.insert(e.preferred_name);
    for (const auto& s : e.synonyms) {
      if (rule_flags(s, rules)) e.ambiguous_terms.insert(s);
    }
  }
  return out;
}

DiseaseLexicon load_lexicon(const std::string& path, const AmbiguityRules& rules,
                            MatchPolicy policy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open lexicon file: " + path);
  skip_bom(in);

  DiseaseLexicon lex;
  lex.match_policy = policy;
  std::unordered_set<std::string> seen_ids;

  auto add_entry = [&](DiseaseEntry e, int line) {
    validate_entry(e, line);
    if (!seen_ids.insert(e.disease_id).second)
      throw Error(ErrorCode::kDuplicateDiseaseId,
                  "line " + std::to_string(line) + ": duplicate disease_id '" + e.disease_id + "'");
    lex.entries.push_back(std::move(e));
  };

  if (path.ends_with(".json")) {
    json doc;
    try {
      in >> doc;
    } catch (const json::exception& ex) {
      throw Error(ErrorCode::kMalformedRow, std::string("invalid lexicon JSON: ") + ex.what());
    }
    if (!doc.is_array())
      throw Error(ErrorCode::kMalformedRow, "lexicon JSON must be an array of entries");
    int idx = 0;
    for (const auto& j : doc) {
      ++idx;
      if (!j.is_object() || !j.contains("disease_id") || !j.contains("preferred_name"))
        throw Error(ErrorCode::kMalformedRow,
                    "entry " + std::to_string(idx) + ": missing disease_id or preferred_name");
      DiseaseEntry e;
      e.disease_id = j["disease_id"].get<std::string>();
      e.preferred_name = j["preferred_name"].get<std::string>();
      if (auto it = j.find("synonyms"); it != j.end() && !it->is_null())
        e.synonyms = it->get<std::vector<std::string>>();
      if (auto it = j.find("ambiguous"); it != j.end() && !it->is_null())
        for (const auto& a : *it) e.ambiguous_terms.insert(a.get<std::string>());
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
      if (!header_skipped && trim(fields[0]) == "disease_id") {
        header_skipped = true;
        continue;
      }
      if (fields.size() < 2)
        throw Error(ErrorCode::kMalformedRow,
                    "line " + std::to_string(record_line) + ": expected at least 2 columns");
      DiseaseEntry e;
      e.disease_id = trim(fields[0]);
      e.preferred_name = trim(fields[1]);
      if (fields.size() > 2) e.synonyms = split_multi(fields[2], '|');
      if (fields.size() > 3)
        for (auto& a : split_multi(fields[3], '|')) e.ambiguous_terms.insert(std::move(a));
      add_entry(std::move(e), record_line);
    }
  }

  return flag_ambiguous(lex, rules);
}

std::vector<std::pair<std::string, std::string>> effective_terms(const DiseaseLexicon& lexicon) {
  std::vector<std::pair<std::string, std::string>> terms;
  for (const auto& e : lexicon.entries) {
    if (!e.ambiguous_terms.count(e.preferred_name))
      terms.emplace_back(e.preferred_name, e.disease_id);
    if (lexicon.match_policy == MatchPolicy::kPreferredPlusVettedSynonyms) {
      for (const auto& s : e.synonyms) {
        if (!e.ambiguous_terms.count(s)) terms.emplace_back(s, e.disease_id);
      }
    }
  }
  return terms;
}

}  // namespace fundscape
