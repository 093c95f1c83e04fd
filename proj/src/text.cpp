#include "fundscape/text.hpp"

#include <array>
#include <cctype>

namespace fundscape {
namespace {

// Decodes one UTF-8 sequence starting at i. Returns the number of bytes
// consumed (>= 1); malformed sequences yield the single raw byte as a
// codepoint so nothing is ever dropped.
size_t decode_utf8(std::string_view s, size_t i, uint32_t* cp) {
  unsigned char b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    *cp = b0;
    return 1;
  }
  size_t len = 0;
  uint32_t v = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    v = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    v = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    v = b0 & 0x07;
  } else {
    *cp = b0;
    return 1;
  }
  if (i + len > s.size()) {
    *cp = b0;
    return 1;
  }
  for (size_t k = 1; k < len; ++k) {
    unsigned char bk = static_cast<unsigned char>(s[i + k]);
    if ((bk & 0xC0) != 0x80) {
      *cp = b0;
      return 1;
    }
    v = (v << 6) | (bk & 0x3F);
  }
  *cp = v;
  return len;
}

void encode_utf8(uint32_t cp, std::string* out) {
  if (cp < 0x80) {
    out->push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out->push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out->push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out->push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_space_cp(uint32_t cp) {
  switch (cp) {
    case '\t':
    case '\n':
    case '\v':
    case '\f':
    case '\r':
    case ' ':
    case 0x00A0:  // no-break space
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x3000:
      return true;
    default:
      return (cp >= 0x2000 && cp <= 0x200A);
  }
}

bool is_hyphen_cp(uint32_t cp) {
  // ASCII hyphen plus the Unicode dash block and the minus sign.
  return cp == '-' || (cp >= 0x2010 && cp <= 0x2015) || cp == 0x2212;
}

uint32_t lower_cp(uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp == 0x178) return 0xFF;  // Ÿ
  if (cp == 0x130) return 'i';   // İ (dotted capital I)
  if (cp >= 0x100 && cp <= 0x137) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x139 && cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x14A && cp <= 0x177) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x179 && cp <= 0x17E) return (cp % 2 == 1) ? cp + 1 : cp;
  return cp;
}

bool is_upper_cp(uint32_t cp) { return lower_cp(cp) != cp; }

// ASCII expansion (lowercase) for a lowercase Latin-1 / Latin Extended-A
// codepoint, or nullptr when the codepoint carries no diacritic mapping.
const char* base_ascii(uint32_t lower) {
  switch (lower) {
    case 0xE0: case 0xE1: case 0xE2: case 0xE3: case 0xE4: case 0xE5:
      return "a";
    case 0xE6: return "ae";
    case 0xE7: return "c";
    case 0xE8: case 0xE9: case 0xEA: case 0xEB: return "e";
    case 0xEC: case 0xED: case 0xEE: case 0xEF: return "i";
    case 0xF0: return "d";
    case 0xF1: return "n";
    case 0xF2: case 0xF3: case 0xF4: case 0xF5: case 0xF6: case 0xF8: return "o";
    case 0xF9: case 0xFA: case 0xFB: case 0xFC: return "u";
    case 0xFD: case 0xFF: return "y";
    case 0xFE: return "th";
    case 0xDF: return "ss";
    default: break;
  }
  if (lower >= 0x101 && lower <= 0x105) return "a";   // ā ă ą
  if (lower >= 0x107 && lower <= 0x10D) return "c";   // ć ĉ ċ č
  if (lower == 0x10F || lower == 0x111) return "d";   // ď đ
  if (lower >= 0x113 && lower <= 0x11B) return "e";   // ē ĕ ė ę ě
  if (lower >= 0x11D && lower <= 0x123) return "g";
  if (lower == 0x125 || lower == 0x127) return "h";
  if (lower >= 0x129 && lower <= 0x131) return "i";   // ĩ ī ĭ į ı
  if (lower == 0x133) return "ij";
  if (lower == 0x135) return "j";
  if (lower == 0x137 || lower == 0x138) return "k";
  if (lower >= 0x13A && lower <= 0x142) return "l";   // ĺ ļ ľ ŀ ł
  if (lower >= 0x144 && lower <= 0x14B) return "n";   // ń ņ ň ŉ ŋ
  if (lower >= 0x14D && lower <= 0x151) return "o";
  if (lower == 0x153) return "oe";
  if (lower >= 0x155 && lower <= 0x159) return "r";
  if (lower >= 0x15B && lower <= 0x161) return "s";
  if (lower >= 0x163 && lower <= 0x167) return "t";
  if (lower >= 0x169 && lower <= 0x173) return "u";
  if (lower == 0x175) return "w";
  if (lower == 0x177 || lower == 0xFF) return "y";
  if (lower >= 0x17A && lower <= 0x17E) return "z";
  if (lower == 0x17F) return "s";                     // long s
  return nullptr;
}

}  // namespace

void fold_text_into(std::string_view raw, const FoldOptions& opts, bool with_offsets,
                    FoldedText& out) {
  out.text.clear();
  out.src_begin.clear();
  out.src_end.clear();
  out.text.reserve(raw.size());
  if (with_offsets) {
    out.src_begin.reserve(raw.size());
    out.src_end.reserve(raw.size());
  }

  auto emit = [&](char c, size_t begin, size_t end) {
    if (c == ' ' && !out.text.empty() && out.text.back() == ' ') return;  // collapse runs
    out.text.push_back(c);
    if (with_offsets) {
      out.src_begin.push_back(static_cast<uint32_t>(begin));
      out.src_end.push_back(static_cast<uint32_t>(end));
    }
  };

  size_t i = 0;
  while (i < raw.size()) {
    uint32_t cp = 0;
    size_t n = decode_utf8(raw, i, &cp);
    size_t end = i + n;

    if (is_space_cp(cp) || is_hyphen_cp(cp)) {
      emit(' ', i, end);
      i = end;
      continue;
    }
    if (cp == 0x2018 || cp == 0x2019) {
      emit('\'', i, end);
      i = end;
      continue;
    }
    if (cp == 0x201C || cp == 0x201D) {
      emit('"', i, end);
      i = end;
      continue;
    }

    bool upper = is_upper_cp(cp);
    uint32_t work = opts.case_fold ? lower_cp(cp) : cp;
    const char* base = opts.diacritic_fold ? base_ascii(lower_cp(cp)) : nullptr;
    if (base != nullptr) {
      for (const char* p = base; *p != '\0'; ++p) {
        char c = *p;
        if (!opts.case_fold && upper) c = static_cast<char>(std::toupper(c));
        emit(c, i, end);
      }
    } else if (work < 0x80) {
      emit(static_cast<char>(work), i, end);
    } else {
      std::string tmp;
      encode_utf8(work, &tmp);
      for (char c : tmp) emit(c, i, end);
    }
    i = end;
  }
}

FoldedText fold_text(std::string_view raw, const FoldOptions& opts, bool with_offsets) {
  FoldedText out;
  fold_text_into(raw, opts, with_offsets, out);
  return out;
}

std::string normalize_term(std::string_view raw, const FoldOptions& opts) {
  FoldedText folded;
  fold_text_into(raw, opts, false, folded);
  std::string_view v = folded.text;
  while (!v.empty() && v.front() == ' ') v.remove_prefix(1);
  while (!v.empty() && v.back() == ' ') v.remove_suffix(1);
  return std::string(v);
}

std::vector<std::string> tokenize(std::string_view normalized) {
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < normalized.size()) {
    while (i < normalized.size() && normalized[i] == ' ') ++i;
    size_t j = i;
    while (j < normalized.size() && normalized[j] != ' ') ++j;
    if (j > i) tokens.emplace_back(normalized.substr(i, j - i));
    i = j;
  }
  return tokens;
}

size_t codepoint_count(std::string_view s) {
  size_t count = 0;
  size_t i = 0;
  while (i < s.size()) {
    uint32_t cp;
    i += decode_utf8(s, i, &cp);
    ++count;
  }
  return count;
}

bool is_all_caps(std::string_view s) {
  bool saw_alpha = false;
  size_t i = 0;
  while (i < s.size()) {
    uint32_t cp;
    i += decode_utf8(s, i, &cp);
    bool lower_alpha = (cp >= 'a' && cp <= 'z') || (lower_cp(cp) == cp && base_ascii(cp) != nullptr);
    bool upper_alpha = is_upper_cp(cp);
    if (upper_alpha) saw_alpha = true;
    if (lower_alpha) return false;
  }
  return saw_alpha;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 0x20);
  }
  return out;
}

}  // namespace fundscape
