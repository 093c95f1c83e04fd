#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fundscape {

// Minimal RFC-4180-style CSV: comma separated, double quotes for fields
// containing commas/quotes/newlines, "" as an escaped quote. Good enough
// for the registry/lexicon snapshots this project consumes and emits.

// Parses one logical CSV record from `in` (may span physical lines inside
// quotes). Returns false at EOF. `line` tracks the 1-based line number of
// the record start. Throws Error(kMalformedRow) on unbalanced quotes.
bool read_csv_record(std::istream& in, std::vector<std::string>* fields, int* line);

std::string csv_escape(std::string_view field);

// Splits a multi-value cell on `sep`, trimming surrounding whitespace and
// dropping empty parts.
std::vector<std::string> split_multi(std::string_view cell, char sep);

std::string trim(std::string_view s);

// Consumes a UTF-8 byte-order mark at the stream position, if present.
void skip_bom(std::istream& in);

}  // namespace fundscape
