#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fundscape {

struct FoldOptions {
  bool case_fold = true;
  bool diacritic_fold = true;

  bool operator==(const FoldOptions&) const = default;
};

// Result of the normalization pipeline: case fold, diacritic strip, and
// collapse of whitespace/hyphen runs to single spaces. `text` is UTF-8;
// codepoints outside the folded ranges (ASCII, Latin-1, Latin Extended-A)
// pass through unchanged. When built with offsets, `src_begin[i]` /
// `src_end[i]` give the byte range in the source string that produced
// folded byte i, so folded spans can be reported in original coordinates.
struct FoldedText {
  std::string text;
  std::vector<uint32_t> src_begin;
  std::vector<uint32_t> src_end;
};

void fold_text_into(std::string_view raw, const FoldOptions& opts, bool with_offsets,
                    FoldedText& out);
FoldedText fold_text(std::string_view raw, const FoldOptions& opts = {},
                     bool with_offsets = true);

// fold + trim of leading/trailing spaces; the canonical form for dictionary
// terms and registry aliases.
std::string normalize_term(std::string_view raw, const FoldOptions& opts = {});

// Word-boundary classification on folded bytes: ASCII alphanumerics are
// word bytes, and so is everything >= 0x80 (unfolded scripts stay opaque
// and never act as a boundary). A match must be delimited on both sides by
// non-word bytes or the string ends.
inline bool is_word_byte(unsigned char b) {
  return (b >= 'a' && b <= 'z') || (b >= 'A' && b <= 'Z') || (b >= '0' && b <= '9') || b >= 0x80;
}

// Splits an already-normalized string on spaces; empty tokens dropped.
std::vector<std::string> tokenize(std::string_view normalized);

// Number of Unicode codepoints in a UTF-8 string (malformed bytes count 1).
size_t codepoint_count(std::string_view s);

// True when every alphabetic character is uppercase and there is at least
// one of them. Covers ASCII plus the folded Latin ranges.
bool is_all_caps(std::string_view s);

std::string ascii_lower(std::string_view s);

}  // namespace fundscape
