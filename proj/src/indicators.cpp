#include "fundscape/indicators.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace fundscape {

const char* normalization_variant_name(NormalizationOptions::Variant v) {
  return v == NormalizationOptions::Variant::kMeanOfExpected ? "mean_of_expected"
                                                             : "mean_of_ratios";
}

namespace {

int doc_type_rank(DocType t, bool by_doc_type) {
  if (!by_doc_type) return -1;
  return t == DocType::kArticle ? 0 : 1;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

const ReferenceStats::Cell* ReferenceStats::find(const std::string& category, int year,
                                                 DocType doc_type) const {
  auto it = cells_.find({category, year, doc_type_rank(doc_type, by_doc_type_)});
  return it == cells_.end() ? nullptr : &it->second;
}

ReferenceStats compute_reference_stats(const Corpus& reference_corpus,
                                       const NormalizationOptions& opts) {
  if (reference_corpus.records.empty())
    throw Error(ErrorCode::kEmptyCorpus, "reference corpus has no records");
  ReferenceStats stats;
  stats.by_doc_type_ = opts.by_doc_type;
  for (const auto& r : reference_corpus.records) {
    for (const auto& category : r.subject_categories) {
      auto& cell =
          stats.cells_[{category, r.pub_year, doc_type_rank(r.doc_type, opts.by_doc_type)}];
      cell.count += 1;
      cell.citation_sum += static_cast<double>(r.citation_count);
    }
  }
  return stats;
}

NormalizedScore normalized_score(const PublicationRecord& record, const ReferenceStats& stats,
                                 const NormalizationOptions& opts) {
  NormalizedScore score;
  score.record_id = record.record_id;
  score.raw_citations = record.citation_count;

  if (record.subject_categories.empty())
    throw Error(ErrorCode::kMissingReferenceCell,
                "record '" + record.record_id + "' has no subject categories to normalize by");

  std::vector<double> means;
  means.reserve(record.subject_categories.size());
  for (const auto& category : record.subject_categories) {
    const auto* cell = stats.find(category, record.pub_year, record.doc_type);
    if (cell == nullptr)
      throw Error(ErrorCode::kMissingReferenceCell,
                  "record '" + record.record_id + "': no reference cell for (" + category + ", " +
                      std::to_string(record.pub_year) + ", " + doc_type_name(record.doc_type) +
                      ")");
    means.push_back(cell->mean());
  }

  double mean_sum = 0.0;
  for (double m : means) mean_sum += m;
  score.expected = mean_sum / static_cast<double>(means.size());

  if (opts.variant == NormalizationOptions::Variant::kMeanOfExpected) {
    if (score.expected > 0.0) {
      score.ncs = static_cast<double>(record.citation_count) / score.expected;
    }
    // expected == 0: every cell mean is zero, ncs undefined (ZeroExpected).
  } else {
    bool any_zero = std::any_of(means.begin(), means.end(), [](double m) { return m <= 0.0; });
    if (!any_zero) {
      double ratio_sum = 0.0;
      for (double m : means) ratio_sum += static_cast<double>(record.citation_count) / m;
      score.ncs = ratio_sum / static_cast<double>(means.size());
    }
  }
  return score;
}

double mncs(const std::vector<NormalizedScore>& scores) {
  if (scores.empty())
    throw Error(ErrorCode::kEmptyGroup, "MNCS is undefined for an empty publication set");
  double sum = 0.0;
  for (const auto& s : scores) {
    if (!s.ncs)
      throw Error(ErrorCode::kZeroExpected,
                  "record '" + s.record_id + "' has an undefined normalized score");
    sum += *s.ncs;
  }
  return sum / static_cast<double>(scores.size());
}

IndicatorReport aggregate(const std::vector<TaggedPublication>& tagged) {
  struct Acc {
    int64_t p = 0;
    int64_t defined = 0;
    double ncs_sum = 0.0;
    std::optional<double> mncs() const {
      if (defined == 0) return std::nullopt;
      return ncs_sum / static_cast<double>(defined);
    }
  };

  std::map<std::tuple<std::string, int, std::string>, Acc> cells;  // (country, year, label)
  std::map<std::pair<std::string, int>, Acc> totals;
  for (const auto& t : tagged) {
    int year = t.record->pub_year;
    auto& cell = cells[{t.country, year, funding_category_name(t.category)}];
    auto& total = totals[{t.country, year}];
    for (Acc* acc : {&cell, &total}) {
      acc->p += 1;
      if (t.score.ncs) {
        acc->defined += 1;
        acc->ncs_sum += *t.score.ncs;
      }
    }
  }

  IndicatorReport report;
  for (const auto& [key, acc] : cells) {
    IndicatorRow row;
    row.country = std::get<0>(key);
    row.year = std::get<1>(key);
    row.category = *parse_funding_category(std::get<2>(key));
    row.p = acc.p;
    row.mncs = acc.mncs();
    report.rows.push_back(std::move(row));
  }
  for (const auto& [key, acc] : totals) {
    report.totals.push_back({key.first, key.second, acc.p, acc.mncs()});
  }
  return report;
}

void write_indicator_csv(const IndicatorReport& report, std::ostream& out) {
  out << "country,year,category,p,mncs\n";
  for (const auto& row : report.rows) {
    out << row.country << ',' << row.year << ',' << funding_category_name(row.category) << ','
        << row.p << ',';
    if (row.mncs) out << format_double(*row.mncs);
    out << '\n';
  }
}

void write_plot_data(const IndicatorReport& report, std::ostream& out) {
  // Hand-rolled writer: nested sorted maps, %.6f floats, compact JSON. The
  // std::map iteration order gives the byte determinism the outputs promise.
  std::map<std::string, std::map<int, int64_t>> output_by_country;
  std::map<std::string, std::map<int, std::optional<double>>> impact_by_country;
  std::map<std::string, std::map<std::string, std::map<int, int64_t>>> output_by_cat;
  std::map<std::string, std::map<std::string, std::map<int, std::optional<double>>>> impact_by_cat;
  std::map<std::string, std::map<int, std::map<std::string, double>>> shares;

  for (const auto& t : report.totals) {
    output_by_country[t.country][t.year] = t.p;
    impact_by_country[t.country][t.year] = t.mncs;
  }
  for (const auto& row : report.rows) {
    const char* label = funding_category_name(row.category);
    output_by_cat[row.country][label][row.year] = row.p;
    impact_by_cat[row.country][label][row.year] = row.mncs;
  }
  for (const auto& row : report.rows) {
    auto totals_it = output_by_country.find(row.country);
    int64_t total = totals_it->second.at(row.year);
    shares[row.country][row.year][funding_category_name(row.category)] =
        static_cast<double>(row.p) / static_cast<double>(total);
  }

  std::string json;
  auto emit_str = [&](const std::string& s) {
    json += '"';
    json += s;  // keys here are country codes / labels / years: no escapes needed
    json += '"';
  };
  auto open_obj = [&] { json += '{'; };
  auto close_obj = [&] { json += '}'; };

  json += '{';
  emit_str("category_shares");
  json += ':';
  open_obj();
  bool c0 = true;
  for (const auto& [country, by_year] : shares) {
    if (!c0) json += ',';
    c0 = false;
    emit_str(country);
    json += ':';
    open_obj();
    bool y0 = true;
    for (const auto& [year, by_cat] : by_year) {
      if (!y0) json += ',';
      y0 = false;
      emit_str(std::to_string(year));
      json += ':';
      open_obj();
      bool k0 = true;
      for (const auto& [label, share] : by_cat) {
        if (!k0) json += ',';
        k0 = false;
        emit_str(label);
        json += ':';
        json += format_double(share);
      }
      close_obj();
    }
    close_obj();
  }
  close_obj();

  auto emit_year_map_int = [&](const std::map<int, int64_t>& m) {
    open_obj();
    bool first = true;
    for (const auto& [year, v] : m) {
      if (!first) json += ',';
      first = false;
      emit_str(std::to_string(year));
      json += ':';
      json += std::to_string(v);
    }
    close_obj();
  };
  auto emit_year_map_opt = [&](const std::map<int, std::optional<double>>& m) {
    open_obj();
    bool first = true;
    for (const auto& [year, v] : m) {
      if (!first) json += ',';
      first = false;
      emit_str(std::to_string(year));
      json += ':';
      json += v ? format_double(*v) : "null";
    }
    close_obj();
  };

  json += ',';
  emit_str("impact_by_country");
  json += ':';
  open_obj();
  c0 = true;
  for (const auto& [country, m] : impact_by_country) {
    if (!c0) json += ',';
    c0 = false;
    emit_str(country);
    json += ':';
    emit_year_map_opt(m);
  }
  close_obj();

  json += ',';
  emit_str("impact_by_country_category");
  json += ':';
  open_obj();
  c0 = true;
  for (const auto& [country, by_cat] : impact_by_cat) {
    if (!c0) json += ',';
    c0 = false;
    emit_str(country);
    json += ':';
    open_obj();
    bool k0 = true;
    for (const auto& [label, m] : by_cat) {
      if (!k0) json += ',';
      k0 = false;
      emit_str(label);
      json += ':';
      emit_year_map_opt(m);
    }
    close_obj();
  }
  close_obj();

  json += ',';
  emit_str("output_by_country");
  json += ':';
  open_obj();
  c0 = true;
  for (const auto& [country, m] : output_by_country) {
    if (!c0) json += ',';
    c0 = false;
    emit_str(country);
    json += ':';
    emit_year_map_int(m);
  }
  close_obj();

  json += ',';
  emit_str("output_by_country_category");
  json += ':';
  open_obj();
  c0 = true;
  for (const auto& [country, by_cat] : output_by_cat) {
    if (!c0) json += ',';
    c0 = false;
    emit_str(country);
    json += ':';
    open_obj();
    bool k0 = true;
    for (const auto& [label, m] : by_cat) {
      if (!k0) json += ',';
      k0 = false;
      emit_str(label);
      json += ':';
      emit_year_map_int(m);
    }
    close_obj();
  }
  close_obj();
  json += '}';

  out << json << '\n';
}

}  // namespace fundscape
