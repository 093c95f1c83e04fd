#include "fundscape/csv.hpp"

#include <cctype>
#include <istream>

#include "fundscape/errors.hpp"

namespace fundscape {

bool read_csv_record(std::istream& in, std::vector<std::string>* fields, int* line) {
  fields->clear();
  int c = in.get();
  if (c == EOF) return false;

  std::string field;
  bool in_quotes = false;
  int start_line = *line;

  while (true) {
    if (c == EOF) {
      if (in_quotes) {
        throw Error(ErrorCode::kMalformedRow,
                    "unterminated quoted field starting near line " + std::to_string(start_line));
      }
      break;
    }
    char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++*line;
        field.push_back(ch);
      }
    } else if (ch == '"' && field.empty()) {
      in_quotes = true;
    } else if (ch == ',') {
      fields->push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      ++*line;
      break;
    } else if (ch == '\r') {
      // swallow; \r\n handled by the \n branch next iteration
    } else {
      field.push_back(ch);
    }
    c = in.get();
  }
  fields->push_back(std::move(field));
  return true;
}

std::string csv_escape(std::string_view field) {
  bool needs_quotes = field.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<std::string> split_multi(std::string_view cell, char sep) {
  std::vector<std::string> parts;
  size_t i = 0;
  while (i <= cell.size()) {
    size_t j = cell.find(sep, i);
    if (j == std::string_view::npos) j = cell.size();
    std::string part = trim(cell.substr(i, j - i));
    if (!part.empty()) parts.push_back(std::move(part));
    i = j + 1;
  }
  return parts;
}

void skip_bom(std::istream& in) {
  static const char bom[3] = {'\xEF', '\xBB', '\xBF'};
  for (int i = 0; i < 3; ++i) {
    if (in.peek() != static_cast<unsigned char>(bom[i])) {
      for (; i > 0; --i) in.unget();
      return;
    }
    in.get();
  }
}

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace fundscape
