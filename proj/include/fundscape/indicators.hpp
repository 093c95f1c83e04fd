#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "fundscape/corpus.hpp"
#include "fundscape/funders.hpp"

namespace fundscape {

struct NormalizationOptions {
  // Reference cells are (subject category, year, doc type); doc type can be
  // dropped to normalize on (category, year) only.
  bool by_doc_type = true;
  // How a multi-category record combines its cells: divide citations by the
  // mean of the cell expectations, or average the per-cell ratios.
  enum class Variant { kMeanOfExpected, kMeanOfRatios };
  Variant variant = Variant::kMeanOfExpected;
};

const char* normalization_variant_name(NormalizationOptions::Variant v);

// Mean citation rates of the reference ("world") corpus per cell.
class ReferenceStats {
 public:
  struct Cell {
    int64_t count = 0;
    double citation_sum = 0.0;
    double mean() const { return citation_sum / static_cast<double>(count); }
  };
  using Key = std::tuple<std::string, int, int>;  // category, year, doc-type rank (-1 = merged)

  const Cell* find(const std::string& category, int year, DocType doc_type) const;
  const std::map<Key, Cell>& cells() const { return cells_; }
  bool by_doc_type() const { return by_doc_type_; }

 private:
  friend ReferenceStats compute_reference_stats(const Corpus&, const NormalizationOptions&);

  std::map<Key, Cell> cells_;
  bool by_doc_type_ = true;
};

// Builds the per-(category, year[, doc type]) means. A record carrying k
// categories contributes its full citation count to all k cells (whole
// counting into cells). Throws Error(kEmptyCorpus) on an empty corpus.
ReferenceStats compute_reference_stats(const Corpus& reference_corpus,
                                       const NormalizationOptions& opts = {});

struct NormalizedScore {
  std::string record_id;
  int64_t raw_citations = 0;
  double expected = 0.0;          // mean of the record's cell means
  std::optional<double> ncs;      // absent when every cell mean is zero
};

// Field-normalized score of one record: citations divided by the expected
// citations of its cells. A record whose cell is absent from the stats is
// an error (the reference corpus must cover the analyzed set); a record
// whose expectation is zero gets an undefined ncs and is excluded from MNCS
// aggregation.
NormalizedScore normalized_score(const PublicationRecord& record, const ReferenceStats& stats,
                                 const NormalizationOptions& opts = {});

// Arithmetic mean of the scores; 1.0 is the worldwide average impact level.
// Throws Error(kEmptyGroup) on an empty list and Error(kZeroExpected) if any
// score is undefined.
double mncs(const std::vector<NormalizedScore>& scores);

// One publication occurrence to aggregate: a matched publication attributed
// to one focal country with its funding category and normalized score.
// Multi-country publications appear once per focal country (full counting).
struct TaggedPublication {
  const PublicationRecord* record = nullptr;
  std::string country;
  FundingCategory category = FundingCategory::kNonFunded;
  NormalizedScore score;
};

struct IndicatorRow {
  std::string country;
  int year = 0;
  FundingCategory category = FundingCategory::kNonFunded;
  int64_t p = 0;                 // publications in the cell
  std::optional<double> mncs;    // null when no member has a defined ncs
};

struct CountryYearTotal {
  std::string country;
  int year = 0;
  int64_t p = 0;
  std::optional<double> mncs;
};

struct IndicatorReport {
  std::vector<IndicatorRow> rows;         // sorted by (country, year, category label)
  std::vector<CountryYearTotal> totals;   // sorted by (country, year)
};

IndicatorReport aggregate(const std::vector<TaggedPublication>& tagged);

// CSV: header `country,year,category,p,mncs`; mncs with 6 decimals, empty
// for null; rows in report order.
void write_indicator_csv(const IndicatorReport& report, std::ostream& out);

// Plot-data JSON mirroring the report series: per-country annual output and
// impact, per-country category shares, and per-country-per-category output
// and impact series. Keys sorted, floats with 6 decimals, nulls preserved;
// emission is byte-deterministic.
void write_plot_data(const IndicatorReport& report, std::ostream& out);

}  // namespace fundscape
