#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fundscape/corpus.hpp"
#include "fundscape/errors.hpp"
#include "fundscape/funders.hpp"
#include "fundscape/indicators.hpp"
#include "fundscape/lexicon.hpp"
#include "fundscape/matcher.hpp"

namespace fundscape {

struct AmbiguityConfig {
  size_t min_term_length = 4;
  bool acronym_rule = true;
  size_t acronym_max_length = 5;
  std::optional<std::string> common_words_path;  // bundled list when absent

  AmbiguityRules rules() const;
};

struct PipelineConfig {
  std::string corpus_path;
  std::string lexicon_path;
  std::string funders_path;
  std::string reference_corpus_path;
  std::string output_dir = "out";
  std::optional<std::string> category_whitelist_path;

  int start_year = 2009;
  int end_year = 2015;
  std::vector<std::string> focal_countries = {"FR", "GB", "NL", "ES"};
  std::optional<int> census_year;

  MatcherOptions matcher;
  MatchPolicy match_policy = MatchPolicy::kPreferredOnly;
  bool embo_as_european = false;
  bool alias_token_subset = false;
  NormalizationOptions normalization;
  AmbiguityConfig ambiguity;
  std::set<DocType> doc_types = {DocType::kArticle, DocType::kReview};
  int worker_count = 1;

  // Path strings exactly as written in the config file; the manifest echoes
  // these so equal configs give byte-equal manifests regardless of where
  // the checkout lives. Filled by load_pipeline_config.
  struct RawPaths {
    std::string corpus, reference_corpus, lexicon, funders;
    std::optional<std::string> category_whitelist, common_words;
  };
  std::optional<RawPaths> raw_paths;
};

// Parses the JSON config file; relative paths are resolved against the
// config file's directory. Throws Error(kInvalidConfig) on schema problems.
PipelineConfig load_pipeline_config(const std::string& path);

// Checks everything run_pipeline needs at load time — config invariants,
// file presence, schema validity, alias collisions, whitelist content —
// without starting the pipeline. Empty result == the pipeline will get
// past loading.
std::vector<Diagnostic> validate_inputs(const PipelineConfig& config);

// One classification output row: a matched publication viewed from one
// focal country.
struct ClassifiedRow {
  size_t matched_index = 0;  // into PipelineArtifacts::matched
  std::string country;
  FundingCategory category = FundingCategory::kNonFunded;
  std::vector<FunderClass> classes;
};

struct StageCounts {
  size_t loaded = 0;
  size_t filtered = 0;
  size_t matched = 0;
  size_t classified = 0;
  size_t reference_loaded = 0;
};

// In-memory results of a full run. `matched[i].record` points into
// `filtered.records`; keep the struct alive while using them.
struct PipelineArtifacts {
  Corpus filtered;
  std::vector<MatchedPublication> matched;
  std::vector<NormalizedScore> scores;  // parallel to matched
  std::vector<ClassifiedRow> classified;
  IndicatorReport report;
  StageCounts counts;
};

// How far to run: kMatch needs only corpus/lexicon/whitelist, kClassify
// additionally loads the funder registry, kFull also loads the reference
// corpus and computes scores and indicators.
enum class PipelineStage { kMatch, kClassify, kFull };

// Runs load → filter → match [→ classify [→ score → aggregate]] and returns
// everything in memory. Throws Error with a stage-labeled message.
PipelineArtifacts execute_pipeline(const PipelineConfig& config,
                                   PipelineStage stage = PipelineStage::kFull);

// Output emitters (deterministic byte-for-byte given equal artifacts).
void write_matched_jsonl(const PipelineArtifacts& artifacts, std::ostream& out);
void write_classification_jsonl(const PipelineArtifacts& artifacts, std::ostream& out);
void write_manifest(const PipelineConfig& config, const StageCounts& counts, std::ostream& out);

// Full run: validates, executes, then writes matched.jsonl,
// classification.jsonl, indicators.csv, plot_data.json and manifest.json
// into config.output_dir. Files appear atomically (temp + rename) only
// after every stage succeeded. Returns 0 on success, 1 on validation
// failure, 2 on runtime failure; problems go to stderr.
int run_pipeline(const PipelineConfig& config);

// Rebuilds plot data from a previously written indicators.csv. Country-year
// totals are recombined from the category cells (exact whenever each cell's
// members all have defined scores).
IndicatorReport read_indicator_csv(std::istream& in);

// Loads the category whitelist file: one code per line, '#' comments.
std::set<std::string> load_category_whitelist(const std::string& path);

}  // namespace fundscape
