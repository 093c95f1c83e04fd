#include "fundscape/corpus.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "fundscape/csv.hpp"
#include "fundscape/funders.hpp"

namespace fundscape {

using nlohmann::json;

const char* doc_type_name(DocType t) {
  return t == DocType::kArticle ? "Article" : "Review";
}

std::optional<DocType> parse_doc_type(std::string_view s) {
  if (s == "Article") return DocType::kArticle;
  if (s == "Review") return DocType::kReview;
  return std::nullopt;
}

namespace {

constexpr std::string_view kCensusPrefix = "#census_year=";

bool valid_country_code(const std::string& c) {
  return c.size() == 2 && c[0] >= 'A' && c[0] <= 'Z' && c[1] >= 'A' && c[1] <= 'Z';
}

struct LineFail {
  ErrorCode code;
  std::string message;
};

PublicationRecord record_from_json(const json& j) {
  if (!j.is_object()) throw LineFail{ErrorCode::kMalformedRecord, "record is not a JSON object"};

  auto require = [&](const char* key) -> const json& {
    auto it = j.find(key);
    if (it == j.end())
      throw LineFail{ErrorCode::kMalformedRecord, std::string("missing field '") + key + "'"};
    return *it;
  };

  PublicationRecord r;
  const json& id = require("id");
  if (!id.is_string() || id.get<std::string>().empty())
    throw LineFail{ErrorCode::kMalformedRecord, "'id' must be a non-empty string"};
  r.record_id = id.get<std::string>();

  const json& title = require("title");
  if (!title.is_string()) throw LineFail{ErrorCode::kMalformedRecord, "'title' must be a string"};
  r.title = title.get<std::string>();

  if (auto it = j.find("abstract"); it != j.end() && !it->is_null()) {
    if (!it->is_string())
      throw LineFail{ErrorCode::kMalformedRecord, "'abstract' must be a string"};
    r.abstract = it->get<std::string>();
  }
  if (auto it = j.find("keywords"); it != j.end() && !it->is_null()) {
    if (!it->is_array())
      throw LineFail{ErrorCode::kMalformedRecord, "'keywords' must be an array"};
    for (const auto& k : *it) {
      if (!k.is_string())
        throw LineFail{ErrorCode::kMalformedRecord, "'keywords' entries must be strings"};
      r.keywords.push_back(k.get<std::string>());
    }
  }

  const json& dt = require("doc_type");
  if (!dt.is_string()) throw LineFail{ErrorCode::kMalformedRecord, "'doc_type' must be a string"};
  auto parsed = parse_doc_type(dt.get<std::string>());
  if (!parsed)
    throw LineFail{ErrorCode::kUnknownDocType,
                   "doc_type '" + dt.get<std::string>() + "' is not Article or Review"};
  r.doc_type = *parsed;

  const json& year = require("year");
  if (!year.is_number_integer())
    throw LineFail{ErrorCode::kMalformedRecord, "'year' must be an integer"};
  r.pub_year = year.get<int>();

  if (auto it = j.find("categories"); it != j.end() && !it->is_null()) {
    if (!it->is_array())
      throw LineFail{ErrorCode::kMalformedRecord, "'categories' must be an array"};
    for (const auto& c : *it) {
      if (!c.is_string())
        throw LineFail{ErrorCode::kMalformedRecord, "'categories' entries must be strings"};
      r.subject_categories.insert(c.get<std::string>());
    }
  }
  if (auto it = j.find("countries"); it != j.end() && !it->is_null()) {
    if (!it->is_array())
      throw LineFail{ErrorCode::kMalformedRecord, "'countries' must be an array"};
    for (const auto& c : *it) {
      if (!c.is_string() || !valid_country_code(c.get<std::string>()))
        throw LineFail{ErrorCode::kMalformedRecord,
                       "'countries' entries must be ISO-3166 alpha-2 codes"};
      r.countries.insert(c.get<std::string>());
    }
  }

  const json& cites = require("citations");
  if (!cites.is_number_integer() || cites.get<int64_t>() < 0)
    throw LineFail{ErrorCode::kMalformedRecord, "'citations' must be a non-negative integer"};
  r.citation_count = cites.get<int64_t>();

  const json& funding = require("funding");
  if (funding.is_null()) {
    r.fa_present = false;
  } else if (funding.is_array()) {
    r.fa_present = true;
    for (const auto& f : funding) {
      if (!f.is_object() || !f.contains("org") || !f["org"].is_string())
        throw LineFail{ErrorCode::kMalformedRecord, "funding entries must be {org, grants[]}"};
      FunderMention m;
      m.org_text = f["org"].get<std::string>();
      if (trim(m.org_text).empty())
        throw LineFail{ErrorCode::kMalformedRecord, "funding org must be non-empty"};
      if (auto g = f.find("grants"); g != f.end() && !g->is_null()) {
        if (!g->is_array())
          throw LineFail{ErrorCode::kMalformedRecord, "'grants' must be an array"};
        for (const auto& s : *g) {
          if (!s.is_string())
            throw LineFail{ErrorCode::kMalformedRecord, "'grants' entries must be strings"};
          m.grant_numbers.push_back(s.get<std::string>());
        }
      }
      r.funder_mentions.push_back(std::move(m));
    }
  } else {
    throw LineFail{ErrorCode::kMalformedRecord, "'funding' must be an array or null"};
  }

  if (auto it = j.find("fa_text"); it != j.end() && !it->is_null()) {
    if (!it->is_string())
      throw LineFail{ErrorCode::kMalformedRecord, "'fa_text' must be a string"};
    if (!r.fa_present)
      throw LineFail{ErrorCode::kMalformedRecord, "fa_text given but funding is null"};
    r.fa_raw_text = it->get<std::string>();
  }
  return r;
}

// CSV columns, in order:
//   id,title,abstract,keywords,doc_type,year,categories,countries,citations,funding,fa_text
// keywords/categories/countries are `;`-delimited cells; the funding cell is
// one raw FA string (empty = no FA) parsed with the FA fallback parser.
PublicationRecord record_from_csv(const std::vector<std::string>& f) {
  if (f.size() < 10)
    throw LineFail{ErrorCode::kMalformedRecord,
                   "expected at least 10 CSV columns, got " + std::to_string(f.size())};
  PublicationRecord r;
  r.record_id = trim(f[0]);
  if (r.record_id.empty())
    throw LineFail{ErrorCode::kMalformedRecord, "'id' must be a non-empty string"};
  r.title = f[1];
  r.abstract = f[2];
  r.keywords = split_multi(f[3], ';');
  auto parsed = parse_doc_type(trim(f[4]));
  if (!parsed)
    throw LineFail{ErrorCode::kUnknownDocType,
                   "doc_type '" + trim(f[4]) + "' is not Article or Review"};
  r.doc_type = *parsed;
  try {
    r.pub_year = std::stoi(trim(f[5]));
  } catch (const std::exception&) {
    throw LineFail{ErrorCode::kMalformedRecord, "'year' must be an integer"};
  }
  for (auto& c : split_multi(f[6], ';')) r.subject_categories.insert(std::move(c));
  for (auto& c : split_multi(f[7], ';')) {
    if (!valid_country_code(c))
      throw LineFail{ErrorCode::kMalformedRecord,
                     "'countries' entries must be ISO-3166 alpha-2 codes"};
    r.countries.insert(std::move(c));
  }
  try {
    r.citation_count = std::stoll(trim(f[8]));
  } catch (const std::exception&) {
    throw LineFail{ErrorCode::kMalformedRecord, "'citations' must be an integer"};
  }
  if (r.citation_count < 0)
    throw LineFail{ErrorCode::kMalformedRecord, "'citations' must be non-negative"};

  std::string fa_cell = trim(f[9]);
  std::string fa_text = f.size() > 10 ? trim(f[10]) : std::string();
  if (!fa_cell.empty()) {
    r.fa_present = true;
    r.funder_mentions = parse_funding_text(fa_cell);
  }
  if (!fa_text.empty()) {
    r.fa_present = true;
    r.fa_raw_text = fa_text;
  }
  return r;
}

void check_record_bounds(const PublicationRecord& r, const IngestionOptions& opts) {
  int lo = 1000, hi = 9999;
  if (opts.year_bounds) {
    lo = opts.year_bounds->first;
    hi = opts.year_bounds->second;
  }
  if (r.pub_year < lo || r.pub_year > hi)
    throw LineFail{ErrorCode::kMalformedRecord,
                   "pub_year " + std::to_string(r.pub_year) + " outside bounds [" +
                       std::to_string(lo) + ", " + std::to_string(hi) + "]"};
}

}  // namespace

Corpus load_corpus_stream(std::istream& in, IngestionOptions::Format format,
                          const IngestionOptions& opts, std::vector<LoadIssue>* issues) {
  skip_bom(in);
  Corpus corpus;
  std::optional<int> census = opts.census_year;
  std::unordered_set<std::string> seen_ids;
  int max_year = 0;

  auto fail = [&](int line, const LineFail& f) {
    if (issues != nullptr) {
      issues->push_back({line, f.code, f.message});
      return;
    }
    throw Error(f.code, "line " + std::to_string(line) + ": " + f.message);
  };

  if (format == IngestionOptions::Format::kCsv) {
    std::vector<std::string> fields;
    int line = 1;
    bool header_skipped = false;
    // peek for sidecar / header lines
    while (true) {
      int record_line = line;
      if (!read_csv_record(in, &fields, &line)) break;
      if (fields.size() == 1 && fields[0].starts_with(kCensusPrefix)) {
        if (!opts.census_year) {
          try {
            census = std::stoi(fields[0].substr(kCensusPrefix.size()));
          } catch (const std::exception&) {
            fail(record_line, {ErrorCode::kMalformedRecord, "bad census_year sidecar line"});
          }
        }
        continue;
      }
      if (fields.size() == 1 && (fields[0].empty() || fields[0][0] == '#')) continue;
      if (!header_skipped && !fields.empty() && trim(fields[0]) == "id") {
        header_skipped = true;  // column header row
        continue;
      }
      try {
        PublicationRecord r = record_from_csv(fields);
        check_record_bounds(r, opts);
        if (!seen_ids.insert(r.record_id).second)
          throw LineFail{ErrorCode::kDuplicateId, "duplicate record id '" + r.record_id + "'"};
        max_year = std::max(max_year, r.pub_year);
        corpus.records.push_back(std::move(r));
      } catch (const LineFail& f) {
        fail(record_line, f);
      }
    }
  } else {
    std::string linebuf;
    int line = 0;
    while (std::getline(in, linebuf)) {
      ++line;
      std::string_view v = linebuf;
      if (!v.empty() && v.back() == '\r') v.remove_suffix(1);
      if (v.empty()) continue;
      if (v.starts_with(kCensusPrefix)) {
        if (!opts.census_year) {
          try {
            census = std::stoi(std::string(v.substr(kCensusPrefix.size())));
          } catch (const std::exception&) {
            fail(line, {ErrorCode::kMalformedRecord, "bad census_year sidecar line"});
          }
        }
        continue;
      }
      if (v[0] == '#') continue;
      try {
        json j = json::parse(v, nullptr, false);
        if (j.is_discarded()) throw LineFail{ErrorCode::kMalformedRecord, "invalid JSON"};
        PublicationRecord r = record_from_json(j);
        check_record_bounds(r, opts);
        if (!seen_ids.insert(r.record_id).second)
          throw LineFail{ErrorCode::kDuplicateId, "duplicate record id '" + r.record_id + "'"};
        max_year = std::max(max_year, r.pub_year);
        corpus.records.push_back(std::move(r));
      } catch (const LineFail& f) {
        fail(line, f);
      }
    }
  }

  if (!census) {
    LineFail f{ErrorCode::kInvalidConfig,
               "census year not given (no #census_year sidecar line and no override)"};
    fail(0, f);
    corpus.census_year = max_year;  // collecting mode: degrade gracefully
  } else {
    corpus.census_year = *census;
  }
  if (census && !corpus.records.empty() && corpus.census_year < max_year) {
    LineFail f{ErrorCode::kCensusYearBeforePubYear,
               "census year " + std::to_string(corpus.census_year) +
                   " precedes latest publication year " + std::to_string(max_year)};
    fail(0, f);
  }
  return corpus;
}

Corpus load_corpus(const std::string& path, const IngestionOptions& opts,
                   std::vector<LoadIssue>* issues) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open corpus file: " + path);
  auto format = opts.format;
  if (format == IngestionOptions::Format::kAuto) {
    format = path.ends_with(".csv") ? IngestionOptions::Format::kCsv
                                    : IngestionOptions::Format::kJsonLines;
  }
  return load_corpus_stream(in, format, opts, issues);
}

void save_corpus(const Corpus& corpus, std::ostream& out) {
  out << kCensusPrefix << corpus.census_year << "\n";
  for (const auto& r : corpus.records) {
    json j;
    j["id"] = r.record_id;
    j["title"] = r.title;
    j["abstract"] = r.abstract;
    j["keywords"] = r.keywords;
    j["doc_type"] = doc_type_name(r.doc_type);
    j["year"] = r.pub_year;
    j["categories"] = r.subject_categories;
    j["countries"] = r.countries;
    j["citations"] = r.citation_count;
    if (r.fa_present) {
      json arr = json::array();
      for (const auto& m : r.funder_mentions) {
        arr.push_back({{"org", m.org_text}, {"grants", m.grant_numbers}});
      }
      j["funding"] = arr;
    } else {
      j["funding"] = nullptr;
    }
    if (r.fa_raw_text) j["fa_text"] = *r.fa_raw_text;
    out << j.dump() << "\n";
  }
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write corpus file: " + path);
  save_corpus(corpus, out);
}

Corpus filter_corpus(const Corpus& corpus, const CorpusFilter& filter) {
  if (filter.categories && filter.categories->empty())
    throw Error(ErrorCode::kEmptyWhitelist,
                "category filtering requested with an empty whitelist");

  auto keep = [&](const PublicationRecord& r) {
    if (filter.years && (r.pub_year < filter.years->first || r.pub_year > filter.years->second))
      return false;
    if (filter.doc_types && !filter.doc_types->count(r.doc_type)) return false;
    if (filter.countries) {
      bool any = false;
      for (const auto& c : r.countries) {
        if (filter.countries->count(c)) {
          any = true;
          break;
        }
      }
      if (!any) return false;
    }
    if (filter.categories) {
      bool any = false;
      for (const auto& c : r.subject_categories) {
        if (filter.categories->count(c)) {
          any = true;
          break;
        }
      }
      if (!any) return false;
    }
    return true;
  };

  Corpus out;
  out.census_year = corpus.census_year;
  for (const auto& r : corpus.records) {
    if (keep(r)) out.records.push_back(r);
  }
  return out;
}

}  // namespace fundscape
