#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fundscape/corpus.hpp"
#include "fundscape/text.hpp"

namespace fundscape {

struct MatcherOptions {
  bool case_fold = true;
  bool diacritic_fold = true;
  // Only WordBoundary / LongestMatchWins exist; the fields pin the contract.
  enum class BoundaryRule { kWordBoundary } boundary_rule = BoundaryRule::kWordBoundary;
  enum class OverlapRule { kLongestMatchWins } overlap_rule = OverlapRule::kLongestMatchWins;

  FoldOptions fold_options() const { return {case_fold, diacritic_fold}; }
};

enum class TextField { kTitle, kAbstract, kKeyword };

const char* text_field_name(TextField f);

// One dictionary occurrence. start/end are byte offsets into the folded
// field text; orig_start/orig_end map the span back to the raw field.
struct MatchSpan {
  TextField field = TextField::kTitle;
  uint32_t field_index = 0;  // which keyword; 0 for title/abstract
  uint32_t start = 0;
  uint32_t end = 0;
  uint32_t orig_start = 0;
  uint32_t orig_end = 0;
  std::string term;  // normalized surface form, equals folded[start:end]
  std::string disease_id;

  bool operator==(const MatchSpan&) const = default;
};

struct MatchedPublication {
  const PublicationRecord* record = nullptr;
  size_t record_index = 0;
  std::vector<MatchSpan> spans;            // non-empty
  std::vector<std::string> disease_ids;    // sorted unique ids drawn from spans
};

// A raw automaton hit, before disease-id expansion.
struct MatchHit {
  uint32_t start = 0;
  uint32_t end = 0;
  uint32_t term_index = 0;
};

// Immutable multi-pattern automaton over the folded alphabet. Patterns are
// compiled into an Aho-Corasick trie whose goto/fail transitions are
// flattened into a dense DFA over byte equivalence classes, so the scan
// costs two table loads per input byte regardless of dictionary size.
class Matcher {
 public:
  // Every occurrence in the folded text satisfying the word-boundary rule,
  // longest-match-wins at equal start, sorted by (start, end).
  std::vector<MatchHit> find(std::string_view folded_text) const;

  const std::string& term(uint32_t term_index) const { return terms_[term_index]; }
  const std::vector<std::string>& disease_ids(uint32_t term_index) const {
    return term_disease_ids_[term_index];
  }
  size_t term_count() const { return terms_.size(); }
  size_t state_count() const { return num_states_; }
  size_t memory_bytes() const;
  const FoldOptions& fold_options() const { return fold_; }

 private:
  friend Matcher compile_matcher(const std::vector<std::pair<std::string, std::string>>&,
                                 const MatcherOptions&);

  struct Emit {
    uint32_t term_index;
    int32_t next;  // chain through dictionary suffix links, -1 ends
  };

  FoldOptions fold_;
  uint16_t byte_class_[256] = {};  // 0 = byte absent from every pattern
  uint32_t num_classes_ = 1;
  uint32_t num_states_ = 1;
  std::vector<int32_t> dfa_;         // num_states_ x num_classes_
  std::vector<int32_t> state_emit_;  // per state, head into emits_ or -1
  std::vector<Emit> emits_;
  std::vector<std::string> terms_;   // unique normalized patterns
  std::vector<uint32_t> term_len_;
  std::vector<std::vector<std::string>> term_disease_ids_;  // sorted per term
};

// Compiles the effective term list. Terms are normalized with the matcher's
// fold options; exact duplicate (term, id) pairs collapse; two ids sharing
// one surface form are both reported on a hit. Throws Error(kEmptyTermSet)
// / Error(kEmptyTerm).
Matcher compile_matcher(const std::vector<std::pair<std::string, std::string>>& terms,
                        const MatcherOptions& options = {});

// Folds `text` and expands automaton hits into MatchSpans with original
// offsets attached. Empty text yields an empty list.
std::vector<MatchSpan> find_matches(const Matcher& matcher, std::string_view text,
                                    TextField field, uint32_t field_index = 0);

// Runs find_matches over title, abstract and each keyword; nullopt when no
// span is found in any field.
std::optional<MatchedPublication> tag_publication(const PublicationRecord& record,
                                                  const Matcher& matcher);

}  // namespace fundscape
