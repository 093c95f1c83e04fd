#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fundscape/errors.hpp"

namespace fundscape {

enum class DocType { kArticle, kReview };

const char* doc_type_name(DocType t);
std::optional<DocType> parse_doc_type(std::string_view s);

// One funder credited in a funding acknowledgement, as indexed by the
// source database or recovered from raw FA text.
struct FunderMention {
  std::string org_text;
  std::vector<std::string> grant_numbers;

  bool operator==(const FunderMention&) const = default;
};

struct PublicationRecord {
  std::string record_id;
  std::string title;
  std::string abstract;
  std::vector<std::string> keywords;
  DocType doc_type = DocType::kArticle;
  int pub_year = 0;
  std::set<std::string> subject_categories;
  std::set<std::string> countries;  // ISO-3166 alpha-2, author affiliations
  int64_t citation_count = 0;       // citations received up to the census year
  bool fa_present = false;
  std::vector<FunderMention> funder_mentions;
  std::optional<std::string> fa_raw_text;

  bool operator==(const PublicationRecord&) const = default;
};

struct Corpus {
  std::vector<PublicationRecord> records;
  int census_year = 0;  // citation counts observed through this year

  bool operator==(const Corpus&) const = default;
};

struct IngestionOptions {
  enum class Format { kAuto, kJsonLines, kCsv };
  Format format = Format::kAuto;
  // Overrides the sidecar "#census_year=YYYY" header when set; one of the
  // two must provide the census year.
  std::optional<int> census_year;
  // When set, records outside these bounds are rejected at ingestion.
  std::optional<std::pair<int, int>> year_bounds;
};

// Loads and validates a corpus. JSON-lines schema (field names exact):
//   id, title, abstract, keywords[], doc_type, year, categories[],
//   countries[], citations, funding: [{org, grants[]}] | null, fa_text?
// The CSV variant has one column per field with `;`-delimited multi-value
// cells; its funding cell holds one raw FA string. A `#census_year=YYYY`
// sidecar line may precede the data in either format.
//
// With `issues == nullptr` the first invalid line throws Error; otherwise
// invalid lines are skipped and reported, and the valid subset is returned.
Corpus load_corpus(const std::string& path, const IngestionOptions& opts = {},
                   std::vector<LoadIssue>* issues = nullptr);
Corpus load_corpus_stream(std::istream& in, IngestionOptions::Format format,
                          const IngestionOptions& opts, std::vector<LoadIssue>* issues);

// Canonical JSON-lines serialization: sidecar census line, then one record
// per line with sorted keys and no extra whitespace. load(save(c)) == c,
// and save(load(save(c))) is byte-identical.
void save_corpus(const Corpus& corpus, std::ostream& out);
void save_corpus(const Corpus& corpus, const std::string& path);

struct CorpusFilter {
  std::optional<std::pair<int, int>> years;              // inclusive
  std::optional<std::set<std::string>> countries;        // keep if any affiliation matches
  std::optional<std::set<std::string>> categories;       // keep if any category whitelisted
  std::optional<std::set<DocType>> doc_types;
};

// Keeps exactly the records passing every enabled criterion; order and
// record contents preserved. Throws Error(kEmptyWhitelist) when category
// filtering is requested with an empty set.
Corpus filter_corpus(const Corpus& corpus, const CorpusFilter& filter);

}  // namespace fundscape
