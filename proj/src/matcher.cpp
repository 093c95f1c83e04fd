#include "fundscape/matcher.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace fundscape {

const char* text_field_name(TextField f) {
  switch (f) {
    case TextField::kTitle: return "title";
    case TextField::kAbstract: return "abstract";
    case TextField::kKeyword: return "keyword";
  }
  return "?";
}

size_t Matcher::memory_bytes() const {
  size_t total = sizeof(*this);
  total += dfa_.capacity() * sizeof(int32_t);
  total += state_emit_.capacity() * sizeof(int32_t);
  total += emits_.capacity() * sizeof(Emit);
  for (const auto& t : terms_) total += t.capacity();
  total += term_len_.capacity() * sizeof(uint32_t);
  for (const auto& ids : term_disease_ids_) {
    total += ids.capacity() * sizeof(std::string);
    for (const auto& id : ids) total += id.capacity();
  }
  return total;
}

Matcher compile_matcher(const std::vector<std::pair<std::string, std::string>>& terms,
                        const MatcherOptions& options) {
  if (terms.empty()) throw Error(ErrorCode::kEmptyTermSet, "no terms to compile");

  Matcher m;
  m.fold_ = options.fold_options();

  // Normalize, deduplicate (term, id) pairs, group ids per unique pattern.
  std::map<std::string, uint32_t> term_index;
  std::vector<std::set<std::string>> id_sets;
  for (const auto& [raw, id] : terms) {
    std::string norm = normalize_term(raw, m.fold_);
    if (norm.empty())
      throw Error(ErrorCode::kEmptyTerm, "term '" + raw + "' is empty after normalization");
    auto [it, inserted] = term_index.try_emplace(norm, static_cast<uint32_t>(m.terms_.size()));
    if (inserted) {
      m.terms_.push_back(norm);
      id_sets.emplace_back();
    }
    id_sets[it->second].insert(id);
  }
  m.term_len_.reserve(m.terms_.size());
  for (const auto& t : m.terms_) m.term_len_.push_back(static_cast<uint32_t>(t.size()));
  m.term_disease_ids_.reserve(id_sets.size());
  for (auto& s : id_sets)
    m.term_disease_ids_.emplace_back(s.begin(), s.end());

  // Byte equivalence classes: class 0 is every byte absent from the
  // patterns; such bytes reset nothing and share one DFA column.
  for (const auto& t : m.terms_) {
    for (unsigned char b : t) {
      if (m.byte_class_[b] == 0) m.byte_class_[b] = static_cast<uint16_t>(m.num_classes_++);
    }
  }

  // Trie construction.
  struct BuildNode {
    std::map<uint16_t, int32_t> next;
    int32_t fail = 0;
    int32_t term = -1;
  };
  std::vector<BuildNode> trie(1);
  for (uint32_t ti = 0; ti < m.terms_.size(); ++ti) {
    int32_t node = 0;
    for (unsigned char b : m.terms_[ti]) {
      uint16_t cls = m.byte_class_[b];
      auto it = trie[node].next.find(cls);
      if (it == trie[node].next.end()) {
        trie[node].next.emplace(cls, static_cast<int32_t>(trie.size()));
        node = static_cast<int32_t>(trie.size());
        trie.emplace_back();
      } else {
        node = it->second;
      }
    }
    trie[node].term = static_cast<int32_t>(ti);
  }

  // Flatten goto/fail into a dense DFA (breadth-first, so a node's fail
  // state is always completed before the node itself). Emit chains link
  // each state's own pattern to the patterns of its dictionary suffixes.
  const uint32_t C = m.num_classes_;
  m.num_states_ = static_cast<uint32_t>(trie.size());
  m.dfa_.assign(static_cast<size_t>(m.num_states_) * C, 0);
  m.state_emit_.assign(m.num_states_, -1);

  std::queue<int32_t> bfs;
  for (uint16_t c = 0; c < C; ++c) {
    auto it = trie[0].next.find(c);
    if (it != trie[0].next.end()) {
      m.dfa_[c] = it->second;
      trie[it->second].fail = 0;
      bfs.push(it->second);
    }
  }
  if (trie[0].term != -1) {
    m.emits_.push_back({static_cast<uint32_t>(trie[0].term), -1});
    m.state_emit_[0] = 0;
  }
  while (!bfs.empty()) {
    int32_t s = bfs.front();
    bfs.pop();
    int32_t fail = trie[s].fail;
    int32_t emit_tail = m.state_emit_[fail];
    if (trie[s].term != -1) {
      m.emits_.push_back({static_cast<uint32_t>(trie[s].term), emit_tail});
      m.state_emit_[s] = static_cast<int32_t>(m.emits_.size() - 1);
    } else {
      m.state_emit_[s] = emit_tail;
    }
    int32_t* row = &m.dfa_[static_cast<size_t>(s) * C];
    const int32_t* fail_row = &m.dfa_[static_cast<size_t>(fail) * C];
    for (uint16_t c = 0; c < C; ++c) {
      auto it = trie[s].next.find(c);
      if (it != trie[s].next.end()) {
        row[c] = it->second;
        trie[it->second].fail = fail_row[c];
        bfs.push(it->second);
      } else {
        row[c] = fail_row[c];
      }
    }
  }
  return m;
}

std::vector<MatchHit> Matcher::find(std::string_view folded_text) const {
  std::vector<MatchHit> hits;
  const size_t n = folded_text.size();
  const uint32_t C = num_classes_;
  int32_t s = 0;
  for (size_t i = 0; i < n; ++i) {
    s = dfa_[static_cast<size_t>(s) * C + byte_class_[static_cast<unsigned char>(folded_text[i])]];
    for (int32_t e = state_emit_[s]; e != -1; e = emits_[e].next) {
      uint32_t len = term_len_[emits_[e].term_index];
      size_t start = i + 1 - len;
      bool left_ok = start == 0 || !is_word_byte(static_cast<unsigned char>(folded_text[start - 1]));
      bool right_ok = i + 1 == n || !is_word_byte(static_cast<unsigned char>(folded_text[i + 1]));
      if (left_ok && right_ok) {
        hits.push_back({static_cast<uint32_t>(start), static_cast<uint32_t>(i + 1),
                        emits_[e].term_index});
      }
    }
  }

  // Longest match wins at equal start: keep only the maximal end per start.
  // Distinct patterns cannot share a (start, end), so one hit survives.
  std::sort(hits.begin(), hits.end(), [](const MatchHit& a, const MatchHit& b) {
    if (a.start != b.start) return a.start < b.start;
    return a.end > b.end;
  });
  std::vector<MatchHit> out;
  out.reserve(hits.size());
  size_t i = 0;
  while (i < hits.size()) {
    out.push_back(hits[i]);
    uint32_t start = hits[i].start;
    while (i < hits.size() && hits[i].start == start) ++i;
  }
  return out;
}

std::vector<MatchSpan> find_matches(const Matcher& matcher, std::string_view text,
                                    TextField field, uint32_t field_index) {
  std::vector<MatchSpan> spans;
  if (text.empty()) return spans;
  FoldedText folded = fold_text(text, matcher.fold_options(), /*with_offsets=*/true);
  for (const MatchHit& h : matcher.find(folded.text)) {
    for (const std::string& id : matcher.disease_ids(h.term_index)) {
      MatchSpan s;
      s.field = field;
      s.field_index = field_index;
      s.start = h.start;
      s.end = h.end;
      s.orig_start = folded.src_begin[h.start];
      s.orig_end = folded.src_end[h.end - 1];
      s.term = matcher.term(h.term_index);
      s.disease_id = id;
      spans.push_back(std::move(s));
    }
  }
  return spans;
}

std::optional<MatchedPublication> tag_publication(const PublicationRecord& record,
                                                  const Matcher& matcher) {
  MatchedPublication mp;
  mp.record = &record;

  auto run = [&](std::string_view text, TextField field, uint32_t index) {
    auto spans = find_matches(matcher, text, field, index);
    mp.spans.insert(mp.spans.end(), std::make_move_iterator(spans.begin()),
                    std::make_move_iterator(spans.end()));
  };
  run(record.title, TextField::kTitle, 0);
  run(record.abstract, TextField::kAbstract, 0);
  for (size_t k = 0; k < record.keywords.size(); ++k) {
    run(record.keywords[k], TextField::kKeyword, static_cast<uint32_t>(k));
  }
  if (mp.spans.empty()) return std::nullopt;

  std::set<std::string> ids;
  for (const auto& s : mp.spans) ids.insert(s.disease_id);
  mp.disease_ids.assign(ids.begin(), ids.end());
  return mp;
}

}  // namespace fundscape
