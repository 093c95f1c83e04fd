#include "fundscape/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fundscape/csv.hpp"
#include "fundscape/version.hpp"

namespace fundscape {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Static contiguous split over [0, n); fn(begin, end) runs on each worker.
// The partition depends only on n and the worker count, and results are
// written to index-addressed slots, so outputs never depend on scheduling.
template <typename Fn>
void parallel_chunks(size_t n, int workers, Fn&& fn) {
  if (n == 0) return;
  size_t w = std::min<size_t>(std::max(workers, 1), n);
  if (w <= 1) {
    fn(size_t{0}, n);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(w);
  size_t chunk = (n + w - 1) / w;
  for (size_t t = 0; t < w; ++t) {
    size_t begin = t * chunk;
    size_t end = std::min(n, begin + chunk);
    threads.emplace_back([&, t, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string resolve_path(const fs::path& base, const std::string& p) {
  if (p.empty()) return p;
  fs::path path(p);
  if (path.is_absolute()) return p;
  return (base / path).string();
}

Error stage_error(const std::string& stage, const Error& e) {
  return Error(e.code(), "[" + stage + "] " + e.what());
}

const char* match_kind_name(FunderRegistry::Resolution::Kind k) {
  switch (k) {
    case FunderRegistry::Resolution::Kind::kExact: return "exact";
    case FunderRegistry::Resolution::Kind::kTokenSubset: return "tokens";
    case FunderRegistry::Resolution::Kind::kNone: return "none";
  }
  return "?";
}

}  // namespace

AmbiguityRules AmbiguityConfig::rules() const {
  AmbiguityRules r;
  r.min_length = min_term_length;
  r.acronym_rule = acronym_rule;
  r.acronym_max_length = acronym_max_length;
  if (common_words_path) {
    std::ifstream in(*common_words_path);
    if (!in) throw Error(ErrorCode::kIoError, "cannot open common-words list: " + *common_words_path);
    std::string line;
    while (std::getline(in, line)) {
      std::string t = trim(line);
      if (!t.empty() && t[0] != '#') r.common_words.insert(ascii_lower(t));
    }
    if (r.common_words.empty())
      throw Error(ErrorCode::kInvalidConfig, "common-words list is empty: " + *common_words_path);
  } else {
    r.common_words = builtin_common_words();
  }
  return r;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kInvalidConfig, std::string("config is not valid JSON: ") + ex.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "config must be a JSON object");

  fs::path base = fs::path(path).parent_path();
  PipelineConfig c;
  c.raw_paths.emplace();
  try {
    c.raw_paths->corpus = j.value("corpus", "");
    c.raw_paths->reference_corpus = j.value("reference_corpus", "");
    c.raw_paths->lexicon = j.value("lexicon", "");
    c.raw_paths->funders = j.value("funders", "");
    if (j.contains("category_whitelist") && !j["category_whitelist"].is_null())
      c.raw_paths->category_whitelist = j["category_whitelist"].get<std::string>();
    if (j.contains("ambiguity") && j["ambiguity"].contains("common_words") &&
        !j["ambiguity"]["common_words"].is_null())
      c.raw_paths->common_words = j["ambiguity"]["common_words"].get<std::string>();

    c.corpus_path = resolve_path(base, j.value("corpus", ""));
    c.lexicon_path = resolve_path(base, j.value("lexicon", ""));
    c.funders_path = resolve_path(base, j.value("funders", ""));
    c.reference_corpus_path = resolve_path(base, j.value("reference_corpus", ""));
    c.output_dir = resolve_path(base, j.value("output_dir", "out"));
    if (j.contains("category_whitelist") && !j["category_whitelist"].is_null())
      c.category_whitelist_path = resolve_path(base, j["category_whitelist"].get<std::string>());

    if (j.contains("period")) {
      c.start_year = j["period"].value("start", c.start_year);
      c.end_year = j["period"].value("end", c.end_year);
    }
    if (j.contains("focal_countries"))
      c.focal_countries = j["focal_countries"].get<std::vector<std::string>>();
    if (j.contains("census_year") && !j["census_year"].is_null())
      c.census_year = j["census_year"].get<int>();

    if (j.contains("matcher")) {
      c.matcher.case_fold = j["matcher"].value("case_fold", true);
      c.matcher.diacritic_fold = j["matcher"].value("diacritic_fold", true);
    }
    if (j.contains("match_policy")) {
      std::string p = j["match_policy"].get<std::string>();
      if (p == "preferred_only") c.match_policy = MatchPolicy::kPreferredOnly;
      else if (p == "preferred_plus_vetted_synonyms")
        c.match_policy = MatchPolicy::kPreferredPlusVettedSynonyms;
      else throw Error(ErrorCode::kInvalidConfig, "unknown match_policy '" + p + "'");
    }
    c.embo_as_european = j.value("embo_as_european", false);
    c.alias_token_subset = j.value("alias_token_subset", false);

    if (j.contains("normalization")) {
      c.normalization.by_doc_type = j["normalization"].value("by_doc_type", true);
      std::string v = j["normalization"].value("variant", "mean_of_expected");
      if (v == "mean_of_expected")
        c.normalization.variant = NormalizationOptions::Variant::kMeanOfExpected;
      else if (v == "mean_of_ratios")
        c.normalization.variant = NormalizationOptions::Variant::kMeanOfRatios;
      else throw Error(ErrorCode::kInvalidConfig, "unknown normalization variant '" + v + "'");
    }
    if (j.contains("ambiguity")) {
      const auto& a = j["ambiguity"];
      c.ambiguity.min_term_length = a.value("min_term_length", size_t{4});
      c.ambiguity.acronym_rule = a.value("acronym_rule", true);
      c.ambiguity.acronym_max_length = a.value("acronym_max_length", size_t{5});
      if (a.contains("common_words") && !a["common_words"].is_null())
        c.ambiguity.common_words_path = resolve_path(base, a["common_words"].get<std::string>());
    }
    if (j.contains("doc_types")) {
      c.doc_types.clear();
      for (const auto& d : j["doc_types"]) {
        auto t = parse_doc_type(d.get<std::string>());
        if (!t) throw Error(ErrorCode::kInvalidConfig, "unknown doc_type in config");
        c.doc_types.insert(*t);
      }
    }
    c.worker_count = j.value("workers", 1);
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kInvalidConfig, std::string("bad config field: ") + ex.what());
  }
  return c;
}

std::set<std::string> load_category_whitelist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open category whitelist: " + path);
  std::set<std::string> categories;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (!t.empty() && t[0] != '#') categories.insert(t);
  }
  return categories;
}

std::vector<Diagnostic> validate_inputs(const PipelineConfig& config) {
  std::vector<Diagnostic> diags;
  auto add = [&](const std::string& stage, const std::string& msg) {
    diags.push_back({stage, msg});
  };

  if (config.start_year > config.end_year)
    add("config", "period start " + std::to_string(config.start_year) + " is after end " +
                      std::to_string(config.end_year));
  if (config.focal_countries.empty()) add("config", "focal_countries must be non-empty");
  for (const auto& c : config.focal_countries) {
    if (c.size() != 2 || c[0] < 'A' || c[0] > 'Z' || c[1] < 'A' || c[1] > 'Z')
      add("config", "focal country '" + c + "' is not an ISO-3166 alpha-2 code");
  }
  if (config.worker_count < 1) add("config", "worker_count must be >= 1");
  if (config.doc_types.empty()) add("config", "doc_types must be non-empty");

  AmbiguityRules rules;
  bool rules_ok = true;
  try {
    rules = config.ambiguity.rules();
  } catch (const Error& e) {
    add("config", e.what());
    rules_ok = false;
  }

  std::optional<std::set<std::string>> whitelist;
  if (config.category_whitelist_path) {
    try {
      whitelist = load_category_whitelist(*config.category_whitelist_path);
      if (whitelist->empty())
        add("whitelist", "category whitelist '" + *config.category_whitelist_path + "' is empty");
    } catch (const Error& e) {
      add("whitelist", e.what());
    }
  }

  IngestionOptions opts;
  opts.census_year = config.census_year;
  for (const auto& [stage, path] :
       {std::pair<std::string, std::string>{"corpus", config.corpus_path},
        {"reference", config.reference_corpus_path}}) {
    if (path.empty()) {
      add(stage, "no path configured");
      continue;
    }
    try {
      std::vector<LoadIssue> issues;
      Corpus c = load_corpus(path, opts, &issues);
      for (const auto& i : issues) {
        add(stage, path + ":" + std::to_string(i.line) + ": " + i.message + " (" +
                       error_code_name(i.code) + ")");
      }
      if (stage == std::string("reference") && c.records.empty() && issues.empty())
        add(stage, "reference corpus has no records");
    } catch (const Error& e) {
      add(stage, e.what());
    }
  }

  if (config.lexicon_path.empty()) {
    add("lexicon", "no path configured");
  } else if (rules_ok) {
    try {
      DiseaseLexicon lex = load_lexicon(config.lexicon_path, rules, config.match_policy);
      if (effective_terms(lex).empty())
        add("lexicon", "lexicon yields no effective terms (everything flagged ambiguous?)");
    } catch (const Error& e) {
      add("lexicon", e.what());
    }
  }

  if (config.funders_path.empty()) {
    add("funders", "no path configured");
  } else {
    try {
      load_funder_registry(config.funders_path);
    } catch (const Error& e) {
      add("funders", e.what());
    }
  }

  return diags;
}

PipelineArtifacts execute_pipeline(const PipelineConfig& config, PipelineStage stage) {
  PipelineArtifacts art;

  // load
  Corpus loaded;
  size_t reference_count = 0;
  ReferenceStats stats;
  DiseaseLexicon lexicon;
  FunderRegistry registry;
  std::optional<std::set<std::string>> whitelist;
  try {
    IngestionOptions opts;
    opts.census_year = config.census_year;
    loaded = load_corpus(config.corpus_path, opts);
    if (stage == PipelineStage::kFull) {
      Corpus reference = load_corpus(config.reference_corpus_path, opts);
      reference_count = reference.records.size();
      stats = compute_reference_stats(reference, config.normalization);
    }
    lexicon = load_lexicon(config.lexicon_path, config.ambiguity.rules(), config.match_policy);
    if (stage != PipelineStage::kMatch) registry = load_funder_registry(config.funders_path);
    if (config.category_whitelist_path)
      whitelist = load_category_whitelist(*config.category_whitelist_path);
  } catch (const Error& e) {
    throw stage_error("load", e);
  }
  art.counts.loaded = loaded.records.size();
  art.counts.reference_loaded = reference_count;
  std::cerr << "[load] corpus=" << loaded.records.size() << " reference=" << reference_count
            << " lexicon_entries=" << lexicon.entries.size()
            << " funders=" << registry.entries().size() << "\n";

  // filter
  try {
    CorpusFilter filter;
    filter.years = {{config.start_year, config.end_year}};
    filter.countries = std::set<std::string>(config.focal_countries.begin(),
                                             config.focal_countries.end());
    filter.categories = whitelist;
    filter.doc_types = config.doc_types;
    art.filtered = filter_corpus(loaded, filter);
  } catch (const Error& e) {
    throw stage_error("filter", e);
  }
  art.counts.filtered = art.filtered.records.size();
  std::cerr << "[filter] kept=" << art.counts.filtered << " of " << art.counts.loaded << "\n";

  // match
  try {
    Matcher matcher = compile_matcher(effective_terms(lexicon), config.matcher);
    const auto& records = art.filtered.records;
    std::vector<std::optional<MatchedPublication>> slots(records.size());
    parallel_chunks(records.size(), config.worker_count, [&](size_t begin, size_t end) {
      for (size_t i = begin; i < end; ++i) {
        slots[i] = tag_publication(records[i], matcher);
        if (slots[i]) slots[i]->record_index = i;
      }
    });
    for (auto& s : slots) {
      if (s) art.matched.push_back(std::move(*s));
    }
  } catch (const Error& e) {
    throw stage_error("match", e);
  }
  art.counts.matched = art.matched.size();
  std::cerr << "[match] matched=" << art.counts.matched << "\n";
  if (stage == PipelineStage::kMatch) return art;

  // score
  if (stage == PipelineStage::kFull) {
    try {
      art.scores.resize(art.matched.size());
      parallel_chunks(art.matched.size(), config.worker_count, [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
          art.scores[i] = normalized_score(*art.matched[i].record, stats, config.normalization);
        }
      });
    } catch (const Error& e) {
      throw stage_error("score", e);
    }
  }

  // classify
  try {
    ClassifyOptions copts;
    copts.token_subset = config.alias_token_subset;
    copts.embo_as_european = config.embo_as_european;
    std::set<std::string> focal(config.focal_countries.begin(), config.focal_countries.end());

    std::vector<std::vector<ClassifiedRow>> slots(art.matched.size());
    parallel_chunks(art.matched.size(), config.worker_count, [&](size_t begin, size_t end) {
      for (size_t i = begin; i < end; ++i) {
        const PublicationRecord& rec = *art.matched[i].record;
        std::vector<FunderMention> mentions = rec.funder_mentions;
        if (rec.fa_present && mentions.empty() && rec.fa_raw_text)
          mentions = parse_funding_text(*rec.fa_raw_text);
        for (const auto& country : rec.countries) {
          if (!focal.count(country)) continue;
          ClassifiedRow row;
          row.matched_index = i;
          row.country = country;
          for (const auto& m : mentions)
            row.classes.push_back(classify_funder(m, registry, country, copts));
          row.category = assign_funding_category(row.classes, rec.fa_present);
          slots[i].push_back(std::move(row));
        }
      }
    });
    for (auto& rows : slots) {
      for (auto& row : rows) art.classified.push_back(std::move(row));
    }
  } catch (const Error& e) {
    throw stage_error("classify", e);
  }
  art.counts.classified = art.classified.size();
  std::cerr << "[classify] rows=" << art.counts.classified << "\n";
  if (stage == PipelineStage::kClassify) return art;

  // aggregate
  try {
    std::vector<TaggedPublication> tagged;
    tagged.reserve(art.classified.size());
    for (const auto& row : art.classified) {
      tagged.push_back({art.matched[row.matched_index].record, row.country, row.category,
                        art.scores[row.matched_index]});
    }
    art.report = aggregate(tagged);
  } catch (const Error& e) {
    throw stage_error("aggregate", e);
  }
  std::cerr << "[aggregate] rows=" << art.report.rows.size()
            << " totals=" << art.report.totals.size() << "\n";

  return art;
}

void write_matched_jsonl(const PipelineArtifacts& artifacts, std::ostream& out) {
  for (const auto& m : artifacts.matched) {
    json spans = json::array();
    for (const auto& s : m.spans) {
      spans.push_back({{"field", text_field_name(s.field)},
                       {"field_index", s.field_index},
                       {"start", s.start},
                       {"end", s.end},
                       {"orig_start", s.orig_start},
                       {"orig_end", s.orig_end},
                       {"term", s.term},
                       {"disease_id", s.disease_id}});
    }
    json j{{"record_id", m.record->record_id},
           {"disease_ids", m.disease_ids},
           {"spans", spans}};
    out << j.dump() << "\n";
  }
}

void write_classification_jsonl(const PipelineArtifacts& artifacts, std::ostream& out) {
  for (const auto& row : artifacts.classified) {
    json classes = json::array();
    for (const auto& c : row.classes) {
      json jc{{"org", c.mention.org_text},
              {"grants", c.mention.grant_numbers},
              {"org_type", org_type_name(c.org_type)},
              {"scope", funder_scope_name(c.scope)},
              {"match", match_kind_name(c.match_kind)}};
      jc["funder_id"] = c.funder_id ? json(*c.funder_id) : json(nullptr);
      jc["country"] = c.country.empty() ? json(nullptr) : json(c.country);
      classes.push_back(std::move(jc));
    }
    json j{{"record_id", artifacts.matched[row.matched_index].record->record_id},
           {"focal_country", row.country},
           {"category", funding_category_name(row.category)},
           {"classes", classes}};
    out << j.dump() << "\n";
  }
}

void write_manifest(const PipelineConfig& config, const StageCounts& counts, std::ostream& out) {
  // Only analysis-determining settings are echoed; runtime knobs (worker
  // count, output dir) are omitted so equal analyses give equal manifests.
  json cfg;
  PipelineConfig::RawPaths paths;
  if (config.raw_paths) {
    paths = *config.raw_paths;
  } else {
    paths = {config.corpus_path, config.reference_corpus_path, config.lexicon_path,
             config.funders_path, config.category_whitelist_path,
             config.ambiguity.common_words_path};
  }
  cfg["corpus"] = paths.corpus;
  cfg["reference_corpus"] = paths.reference_corpus;
  cfg["lexicon"] = paths.lexicon;
  cfg["funders"] = paths.funders;
  cfg["category_whitelist"] =
      paths.category_whitelist ? json(*paths.category_whitelist) : json(nullptr);
  cfg["period"] = {{"start", config.start_year}, {"end", config.end_year}};
  cfg["focal_countries"] = config.focal_countries;
  cfg["census_year"] = config.census_year ? json(*config.census_year) : json(nullptr);
  cfg["matcher"] = {{"case_fold", config.matcher.case_fold},
                    {"diacritic_fold", config.matcher.diacritic_fold}};
  cfg["match_policy"] = match_policy_name(config.match_policy);
  cfg["embo_as_european"] = config.embo_as_european;
  cfg["alias_token_subset"] = config.alias_token_subset;
  cfg["normalization"] = {{"by_doc_type", config.normalization.by_doc_type},
                          {"variant", normalization_variant_name(config.normalization.variant)}};
  cfg["ambiguity"] = {{"min_term_length", config.ambiguity.min_term_length},
                      {"acronym_rule", config.ambiguity.acronym_rule},
                      {"acronym_max_length", config.ambiguity.acronym_max_length},
                      {"common_words",
                       paths.common_words ? json(*paths.common_words) : json("builtin")}};
  std::vector<std::string> doc_types;
  for (DocType t : config.doc_types) doc_types.push_back(doc_type_name(t));
  cfg["doc_types"] = doc_types;

  json j;
  j["version"] = kVersion;
  j["config"] = cfg;
  j["counts"] = {{"loaded", counts.loaded},
                 {"filtered", counts.filtered},
                 {"matched", counts.matched},
                 {"classified", counts.classified},
                 {"reference_loaded", counts.reference_loaded}};
  out << j.dump() << "\n";
}

int run_pipeline(const PipelineConfig& config) {
  auto diags = validate_inputs(config);
  if (!diags.empty()) {
    for (const auto& d : diags) std::cerr << "[validate:" << d.stage << "] " << d.message << "\n";
    std::cerr << "validation failed with " << diags.size() << " problem(s)\n";
    return 1;
  }

  try {
    PipelineArtifacts art = execute_pipeline(config);

    fs::create_directories(config.output_dir);
    struct Target {
      const char* name;
      std::function<void(std::ostream&)> write;
    };
    std::vector<Target> targets = {
        {"matched.jsonl", [&](std::ostream& o) { write_matched_jsonl(art, o); }},
        {"classification.jsonl", [&](std::ostream& o) { write_classification_jsonl(art, o); }},
        {"indicators.csv", [&](std::ostream& o) { write_indicator_csv(art.report, o); }},
        {"plot_data.json", [&](std::ostream& o) { write_plot_data(art.report, o); }},
        {"manifest.json", [&](std::ostream& o) { write_manifest(config, art.counts, o); }},
    };

    // Stage everything into temp files first so an interrupted run leaves
    // the output directory untouched.
    std::vector<std::pair<fs::path, fs::path>> renames;
    try {
      for (const auto& t : targets) {
        fs::path final_path = fs::path(config.output_dir) / t.name;
        fs::path tmp_path = fs::path(config.output_dir) / (std::string(".tmp.") + t.name);
        std::ofstream out(tmp_path, std::ios::binary);
        if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp_path.string());
        t.write(out);
        out.flush();
        if (!out) throw Error(ErrorCode::kIoError, "write failed for " + tmp_path.string());
        renames.emplace_back(tmp_path, final_path);
      }
    } catch (...) {
      for (const auto& [tmp, _] : renames) fs::remove(tmp);
      throw;
    }
    for (const auto& [tmp, final_path] : renames) fs::rename(tmp, final_path);

    std::cerr << "[done] wrote " << targets.size() << " artifacts to " << config.output_dir
              << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

IndicatorReport read_indicator_csv(std::istream& in) {
  IndicatorReport report;
  std::vector<std::string> fields;
  int line = 1;
  bool header = true;
  struct Tot {
    int64_t p = 0;
    int64_t weighted_n = 0;
    double weighted_sum = 0.0;
  };
  std::map<std::pair<std::string, int>, Tot> totals;
  while (read_csv_record(in, &fields, &line)) {
    if (header) {
      header = false;
      continue;
    }
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 5)
      throw Error(ErrorCode::kMalformedRow,
                  "indicators.csv line " + std::to_string(line) + ": expected 5 columns");
    IndicatorRow row;
    row.country = fields[0];
    row.year = std::stoi(fields[1]);
    auto cat = parse_funding_category(fields[2]);
    if (!cat)
      throw Error(ErrorCode::kMalformedRow, "unknown category label '" + fields[2] + "'");
    row.category = *cat;
    row.p = std::stoll(fields[3]);
    if (!fields[4].empty()) row.mncs = std::stod(fields[4]);
    auto& tot = totals[{row.country, row.year}];
    tot.p += row.p;
    if (row.mncs) {
      tot.weighted_n += row.p;
      tot.weighted_sum += static_cast<double>(row.p) * *row.mncs;
    }
    report.rows.push_back(std::move(row));
  }
  for (const auto& [key, tot] : totals) {
    CountryYearTotal t;
    t.country = key.first;
    t.year = key.second;
    t.p = tot.p;
    if (tot.weighted_n > 0) t.mncs = tot.weighted_sum / static_cast<double>(tot.weighted_n);
    report.totals.push_back(std::move(t));
  }
  return report;
}

}  // namespace fundscape
