#include <doctest.h>

#include "fundscape/lexicon.hpp"
#include "test_util.hpp"

using namespace fundscape;
using namespace fundscape::testutil;

TEST_CASE("loads a two-entry registry (malaria is a rare disease here)") {
  TempDir dir("lex_basic");
  auto path = dir.write("lex.csv",
                        "disease_id,preferred_name,synonyms,ambiguous\n"
                        "ORPHA:586,cystic fibrosis,,\n"
                        "ORPHA:673,malaria,,\n");
  DiseaseLexicon lex = load_lexicon(path);
  REQUIRE(lex.entries.size() == 2);
  CHECK(lex.entries[0].disease_id == "ORPHA:586");
  CHECK(lex.entries[1].preferred_name == "malaria");
  auto terms = effective_terms(lex);
  REQUIRE(terms.size() == 2);
}

TEST_CASE("synonym GET is auto-flagged and excluded from effective terms") {
  TempDir dir("lex_get");
  auto path = dir.write("lex.csv",
                        "disease_id,preferred_name,synonyms\n"
                        "D1,growth enzyme trisomy,GET|trisomy variant\n");
  DiseaseLexicon lex =
      load_lexicon(path, default_ambiguity_rules(), MatchPolicy::kPreferredPlusVettedSynonyms);
  REQUIRE(lex.entries.size() == 1);
  CHECK(lex.entries[0].ambiguous_terms.count("GET") == 1);
  auto terms = effective_terms(lex);
  for (const auto& [term, id] : terms) CHECK(term != "GET");
  CHECK(terms.size() == 2);  // preferred + the non-ambiguous synonym
}

TEST_CASE("duplicate disease ids are rejected") {
  TempDir dir("lex_dup");
  auto path = dir.write("lex.csv",
                        "disease_id,preferred_name\n"
                        "D1,alpha mannosidosis\n"
                        "D1,beta mannosidosis\n");
  try {
    load_lexicon(path);
    FAIL("expected DuplicateDiseaseId");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDuplicateDiseaseId);
  }
}

TEST_CASE("empty preferred name and bad flags are rejected") {
  TempDir dir("lex_bad");
  auto empty = dir.write("e.csv", "disease_id,preferred_name\nD1, \n");
  try {
    load_lexicon(empty);
    FAIL("expected EmptyPreferredName");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyPreferredName);
  }

  auto unknown_flag = dir.write("u.csv",
                                "disease_id,preferred_name,synonyms,ambiguous\n"
                                "D1,gaucher disease,,never listed\n");
  CHECK_THROWS_AS(load_lexicon(unknown_flag), Error);

  auto dup_term = dir.write("d.csv",
                            "disease_id,preferred_name,synonyms\n"
                            "D1,gaucher disease,Gaucher-Disease\n");
  // same term after normalization
  CHECK_THROWS_AS(load_lexicon(dup_term), Error);
}

TEST_CASE("json mirror loads the same content") {
  TempDir dir("lex_json");
  auto path = dir.write("lex.json",
                        R"([{"disease_id":"D1","preferred_name":"cystic fibrosis",
                             "synonyms":["CF syndrome"],"ambiguous":[]}])");
  DiseaseLexicon lex = load_lexicon(path);
  REQUIRE(lex.entries.size() == 1);
  CHECK(lex.entries[0].synonyms.size() == 1);
}

TEST_CASE("effective terms follow the match policy") {
  DiseaseEntry e;
  e.disease_id = "D1";
  e.preferred_name = "fabry disease";
  e.synonyms = {"anderson fabry disease", "alpha galactosidase deficiency", "FABRY"};
  e.ambiguous_terms = {"FABRY"};

  DiseaseLexicon lex;
  lex.entries = {e};

  lex.match_policy = MatchPolicy::kPreferredOnly;
  auto preferred = effective_terms(lex);
  REQUIRE(preferred.size() == 1);
  CHECK(preferred[0].first == "fabry disease");

  lex.match_policy = MatchPolicy::kPreferredPlusVettedSynonyms;
  auto with_syn = effective_terms(lex);
  CHECK(with_syn.size() == 3);  // 1 preferred + 3 synonyms - 1 flagged

  // PreferredOnly terms are always a subset of the synonym-mode terms
  for (const auto& t : preferred) {
    CHECK(std::find(with_syn.begin(), with_syn.end(), t) != with_syn.end());
  }
}

TEST_CASE("ambiguity rules: length, common word, acronym") {
  AmbiguityRules rules;
  rules.min_length = 4;
  rules.common_words = {"get", "sperm", "still"};

  DiseaseLexicon lex;
  DiseaseEntry e;
  e.disease_id = "D1";
  e.preferred_name = "cystic fibrosis";
  e.synonyms = {"GET", "SPERM", "CF", "Still disease", "sperm"};
  lex.entries = {e};

  DiseaseLexicon flagged = flag_ambiguous(lex, rules);
  const auto& f = flagged.entries[0].ambiguous_terms;
  CHECK(f.count("GET") == 1);    // length 3 < 4, and a common word
  CHECK(f.count("SPERM") == 1);  // all-caps acronym spelling a dictionary word
  CHECK(f.count("CF") == 1);     // too short
  CHECK(f.count("sperm") == 1);  // common word, case-insensitive
  CHECK(f.count("Still disease") == 0);
  CHECK(f.count("cystic fibrosis") == 0);
}

TEST_CASE("flag_ambiguous is monotone and idempotent") {
  Rng rng(7);
  AmbiguityRules rules;
  rules.min_length = 4;
  rules.common_words = {"time", "state", "house"};

  for (int iter = 0; iter < 50; ++iter) {
    DiseaseLexicon lex;
    size_t n = std::uniform_int_distribution<size_t>(1, 8)(rng);
    for (size_t i = 0; i < n; ++i) {
      DiseaseEntry e;
      e.disease_id = "D" + std::to_string(i);
      e.preferred_name = random_phrase(rng, 1, 2);
      size_t ns = std::uniform_int_distribution<size_t>(0, 3)(rng);
      for (size_t k = 0; k < ns; ++k) {
        std::string s;
        switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
          case 0: s = "GE" + std::string(1, static_cast<char>('A' + i)); break;  // short
          case 1: s = "time"; break;
          case 2: s = random_word(rng, 5, 9); break;
          default: s = random_phrase(rng, 2, 3); break;
        }
        if (std::find(e.synonyms.begin(), e.synonyms.end(), s) == e.synonyms.end() &&
            normalize_term(s) != normalize_term(e.preferred_name))
          e.synonyms.push_back(s);
      }
      // pre-flag a random synonym: flags must survive the pass
      if (!e.synonyms.empty() && std::uniform_int_distribution<int>(0, 1)(rng) == 0)
        e.ambiguous_terms.insert(e.synonyms[0]);
      lex.entries.push_back(std::move(e));
    }

    DiseaseLexicon once = flag_ambiguous(lex, rules);
    DiseaseLexicon twice = flag_ambiguous(once, rules);
    for (size_t i = 0; i < lex.entries.size(); ++i) {
      // monotone: previous flags retained
      for (const auto& t : lex.entries[i].ambiguous_terms)
        CHECK(once.entries[i].ambiguous_terms.count(t) == 1);
      // idempotent
      CHECK(once.entries[i].ambiguous_terms == twice.entries[i].ambiguous_terms);

      // per-rule oracle: a term is flagged iff some rule fires or it was flagged
      auto all_terms = lex.entries[i].synonyms;
      all_terms.push_back(lex.entries[i].preferred_name);
      for (const auto& t : all_terms) {
        bool short_rule = codepoint_count(t) < rules.min_length;
        bool common_rule = rules.common_words.count(normalize_term(t)) > 0;
        bool acro_rule = is_all_caps(t) && codepoint_count(t) <= rules.acronym_max_length &&
                         rules.common_words.count(normalize_term(t)) > 0;
        bool pre = lex.entries[i].ambiguous_terms.count(t) > 0;
        bool expected = short_rule || common_rule || acro_rule || pre;
        CHECK(once.entries[i].ambiguous_terms.count(t) == (expected ? 1u : 0u));
      }
    }
  }
}

TEST_CASE("no effective term is shorter than L or a common word (default rules)") {
  TempDir dir("lex_prop");
  auto path = dir.write("lex.csv",
                        "disease_id,preferred_name,synonyms\n"
                        "D1,cystic fibrosis,CF|get|acid\n"
                        "D2,gaucher disease,GD\n");
  DiseaseLexicon lex =
      load_lexicon(path, default_ambiguity_rules(), MatchPolicy::kPreferredPlusVettedSynonyms);
  const auto& common = builtin_common_words();
  for (const auto& [term, id] : effective_terms(lex)) {
    CHECK(codepoint_count(term) >= 4);
    CHECK(common.count(normalize_term(term)) == 0);
  }
}

TEST_CASE("builtin common words include the documented failure modes") {
  const auto& w = builtin_common_words();
  CHECK(w.size() > 2500);
  CHECK(w.count("get") == 1);
  CHECK(w.count("sperm") == 1);
  CHECK(w.count("malaria") == 0);
}

TEST_CASE("effective terms equal brute-force set construction on random lexicons") {
  Rng rng(909);
  AmbiguityRules rules;
  rules.min_length = 4;
  rules.common_words = {"house", "state", "world"};

  for (int iter = 0; iter < 40; ++iter) {
    DiseaseLexicon lex;
    lex.match_policy = std::uniform_int_distribution<int>(0, 1)(rng) == 0
                           ? MatchPolicy::kPreferredOnly
                           : MatchPolicy::kPreferredPlusVettedSynonyms;
    size_t n = std::uniform_int_distribution<size_t>(1, 10)(rng);
    for (size_t i = 0; i < n; ++i) {
      DiseaseEntry e;
      e.disease_id = "D" + std::to_string(i);
      e.preferred_name = random_phrase(rng, 1, 3);
      size_t ns = std::uniform_int_distribution<size_t>(0, 4)(rng);
      for (size_t k = 0; k < ns; ++k) {
        std::string s = std::uniform_int_distribution<int>(0, 3)(rng) == 0
                            ? std::string("house")
                            : random_phrase(rng, 1, 2);
        if (normalize_term(s) != normalize_term(e.preferred_name) &&
            std::find(e.synonyms.begin(), e.synonyms.end(), s) == e.synonyms.end())
          e.synonyms.push_back(s);
      }
      lex.entries.push_back(std::move(e));
    }
    DiseaseLexicon flagged = flag_ambiguous(lex, rules);

    // brute-force construction straight from the flags
    std::vector<std::pair<std::string, std::string>> expected;
    for (const auto& e : flagged.entries) {
      std::vector<std::string> candidates = {e.preferred_name};
      if (flagged.match_policy == MatchPolicy::kPreferredPlusVettedSynonyms)
        candidates.insert(candidates.end(), e.synonyms.begin(), e.synonyms.end());
      for (const auto& t : candidates) {
        if (!e.ambiguous_terms.count(t)) expected.emplace_back(t, e.disease_id);
      }
    }
    CHECK(effective_terms(flagged) == expected);
  }
}
