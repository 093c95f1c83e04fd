#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fundscape/indicators.hpp"
#include "test_util.hpp"

using namespace fundscape;
using namespace fundscape::testutil;

namespace {

PublicationRecord make_record(const std::string& id, int year, DocType dt,
                              std::set<std::string> cats, int64_t citations) {
  PublicationRecord r;
  r.record_id = id;
  r.title = "t";
  r.doc_type = dt;
  r.pub_year = year;
  r.subject_categories = std::move(cats);
  r.citation_count = citations;
  return r;
}

Corpus corpus_of(std::vector<PublicationRecord> records, int census = 2016) {
  Corpus c;
  c.records = std::move(records);
  c.census_year = census;
  return c;
}

}  // namespace

TEST_CASE("reference stats: mean per cell") {
  Corpus c = corpus_of({make_record("a", 2010, DocType::kArticle, {"X"}, 2),
                        make_record("b", 2010, DocType::kArticle, {"X"}, 4)});
  ReferenceStats stats = compute_reference_stats(c);
  const auto* cell = stats.find("X", 2010, DocType::kArticle);
  REQUIRE(cell != nullptr);
  CHECK(cell->count == 2);
  CHECK(cell->mean() == doctest::Approx(3.0));
  CHECK(stats.find("X", 2011, DocType::kArticle) == nullptr);
  CHECK(stats.find("X", 2010, DocType::kReview) == nullptr);
}

TEST_CASE("multi-category records whole-count into every cell") {
  Corpus c = corpus_of({make_record("a", 2010, DocType::kArticle, {"A", "B"}, 6)});
  ReferenceStats stats = compute_reference_stats(c);
  CHECK(stats.find("A", 2010, DocType::kArticle)->mean() == doctest::Approx(6.0));
  CHECK(stats.find("B", 2010, DocType::kArticle)->mean() == doctest::Approx(6.0));
}

TEST_CASE("doc-type cells can be merged") {
  Corpus c = corpus_of({make_record("a", 2010, DocType::kArticle, {"X"}, 2),
                        make_record("b", 2010, DocType::kReview, {"X"}, 8)});
  NormalizationOptions merged;
  merged.by_doc_type = false;
  ReferenceStats stats = compute_reference_stats(c, merged);
  CHECK(stats.find("X", 2010, DocType::kArticle)->mean() == doctest::Approx(5.0));
  CHECK(stats.find("X", 2010, DocType::kReview)->mean() == doctest::Approx(5.0));
}

TEST_CASE("empty corpus is an error") {
  CHECK_THROWS_AS(compute_reference_stats(corpus_of({})), Error);
}

TEST_CASE("stats equal an independent group-by pass on random corpora") {
  Rng rng(11);
  std::vector<std::string> cats = {"A", "B", "C"};
  std::vector<std::string> countries = {"GB", "FR"};
  Corpus c;
  c.census_year = 2016;
  for (size_t i = 0; i < 400; ++i)
    c.records.push_back(random_record(rng, i, cats, countries));
  ReferenceStats stats = compute_reference_stats(c);

  // brute-force group-by
  std::map<std::tuple<std::string, int, int>, std::pair<int64_t, double>> expected;
  for (const auto& r : c.records) {
    for (const auto& cat : r.subject_categories) {
      auto& [count, sum] = expected[{cat, r.pub_year, r.doc_type == DocType::kArticle ? 0 : 1}];
      count += 1;
      sum += static_cast<double>(r.citation_count);
    }
  }
  REQUIRE(stats.cells().size() == expected.size());
  for (const auto& [key, cell] : stats.cells()) {
    auto it = expected.find(key);
    REQUIRE(it != expected.end());
    CHECK(cell.count == it->second.first);
    CHECK(cell.citation_sum == doctest::Approx(it->second.second));
  }
}

TEST_CASE("normalized score: specified spot values") {
  // 10 citations over field mean 5.0 -> 2.0
  Corpus ref = corpus_of({make_record("r1", 2010, DocType::kArticle, {"X"}, 5)});
  ReferenceStats stats = compute_reference_stats(ref);
  auto s = normalized_score(make_record("p", 2010, DocType::kArticle, {"X"}, 10), stats);
  REQUIRE(s.ncs.has_value());
  CHECK(*s.ncs == doctest::Approx(2.0));
  CHECK(s.expected == doctest::Approx(5.0));

  // 0 citations -> 0.0
  auto zero = normalized_score(make_record("p0", 2010, DocType::kArticle, {"X"}, 0), stats);
  REQUIRE(zero.ncs.has_value());
  CHECK(*zero.ncs == 0.0);

  // two fields with means {2.0, 4.0} and 6 citations -> expected 3.0, ncs 2.0
  Corpus ref2 = corpus_of({make_record("a", 2010, DocType::kArticle, {"A"}, 2),
                           make_record("b", 2010, DocType::kArticle, {"B"}, 4)});
  ReferenceStats stats2 = compute_reference_stats(ref2);
  auto multi = normalized_score(make_record("p2", 2010, DocType::kArticle, {"A", "B"}, 6), stats2);
  REQUIRE(multi.ncs.has_value());
  CHECK(multi.expected == doctest::Approx(3.0));
  CHECK(*multi.ncs == doctest::Approx(2.0));

  // mean-of-ratios variant: (6/2 + 6/4) / 2 = 2.25
  NormalizationOptions ratios;
  ratios.variant = NormalizationOptions::Variant::kMeanOfRatios;
  auto ratio_score =
      normalized_score(make_record("p3", 2010, DocType::kArticle, {"A", "B"}, 6), stats2, ratios);
  REQUIRE(ratio_score.ncs.has_value());
  CHECK(*ratio_score.ncs == doctest::Approx(2.25));
}

TEST_CASE("missing cells and zero expectations") {
  Corpus ref = corpus_of({make_record("r1", 2010, DocType::kArticle, {"X"}, 0)});
  ReferenceStats stats = compute_reference_stats(ref);

  try {
    normalized_score(make_record("p", 2011, DocType::kArticle, {"X"}, 1), stats);
    FAIL("expected MissingReferenceCell");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingReferenceCell);
  }

  // all cell means zero: ncs undefined, not an exception
  auto s = normalized_score(make_record("p", 2010, DocType::kArticle, {"X"}, 0), stats);
  CHECK_FALSE(s.ncs.has_value());
  CHECK(s.expected == 0.0);
}

TEST_CASE("monotonicity: more citations, strictly larger ncs") {
  Corpus ref = corpus_of({make_record("r1", 2010, DocType::kArticle, {"X"}, 7)});
  ReferenceStats stats = compute_reference_stats(ref);
  double last = -1.0;
  for (int64_t c : {0, 1, 5, 20, 100}) {
    auto s = normalized_score(make_record("p", 2010, DocType::kArticle, {"X"}, c), stats);
    REQUIRE(s.ncs.has_value());
    CHECK(*s.ncs > last);
    last = *s.ncs;
  }
}

TEST_CASE("mncs: mean, empty group, undefined member") {
  std::vector<NormalizedScore> scores(2);
  scores[0].ncs = 0.5;
  scores[1].ncs = 1.5;
  CHECK(mncs(scores) == doctest::Approx(1.0));

  CHECK_THROWS_AS(mncs({}), Error);

  scores[1].ncs.reset();
  CHECK_THROWS_AS(mncs(scores), Error);
}

TEST_CASE("self-referential single-field corpus has MNCS 1 within 1e-9") {
  Rng rng(303);
  for (size_t n : {10u, 137u, 2000u}) {
    Corpus c;
    c.census_year = 2016;
    for (size_t i = 0; i < n; ++i) {
      auto r = make_record("p" + std::to_string(i),
                           std::uniform_int_distribution<int>(2009, 2015)(rng),
                           DocType::kArticle, {"X"},
                           std::uniform_int_distribution<int64_t>(0, 60)(rng));
      c.records.push_back(std::move(r));
    }
    // ensure no all-zero cell
    std::map<int, int64_t> year_sum;
    for (const auto& r : c.records) year_sum[r.pub_year] += r.citation_count;
    for (auto& r : c.records) {
      if (year_sum[r.pub_year] == 0) {
        r.citation_count = 1;
        year_sum[r.pub_year] = 1;
      }
    }

    ReferenceStats stats = compute_reference_stats(c);
    std::vector<NormalizedScore> scores;
    for (const auto& r : c.records) scores.push_back(normalized_score(r, stats));
    CHECK(std::abs(mncs(scores) - 1.0) < 1e-9);
  }
}

TEST_CASE("ncs is invariant under rescaling every citation count") {
  Rng rng(404);
  std::vector<std::string> cats = {"A", "B", "C"};
  std::vector<std::string> countries = {"GB"};
  Corpus c;
  c.census_year = 2016;
  for (size_t i = 0; i < 300; ++i)
    c.records.push_back(random_record(rng, i, cats, countries));
  for (auto& r : c.records)
    if (r.citation_count == 0) r.citation_count = 1;  // keep expectations positive

  ReferenceStats stats = compute_reference_stats(c);
  for (int64_t k : {2, 10}) {
    Corpus scaled = c;
    for (auto& r : scaled.records) r.citation_count *= k;
    ReferenceStats scaled_stats = compute_reference_stats(scaled);
    for (size_t i = 0; i < c.records.size(); ++i) {
      auto a = normalized_score(c.records[i], stats);
      auto b = normalized_score(scaled.records[i], scaled_stats);
      REQUIRE(a.ncs.has_value());
      REQUIRE(b.ncs.has_value());
      CHECK(std::abs(*a.ncs - *b.ncs) < 1e-9);
    }
  }
}

TEST_CASE("aggregate: fixture from the module contract") {
  // GB 2010 National with ncs {1.0, 3.0}; GB 2010 NonFunded with ncs {0.0}
  auto r1 = make_record("a", 2010, DocType::kArticle, {"X"}, 0);
  auto r2 = make_record("b", 2010, DocType::kArticle, {"X"}, 0);
  auto r3 = make_record("c", 2010, DocType::kArticle, {"X"}, 0);
  NormalizedScore s1{"a", 0, 1.0, 1.0};
  NormalizedScore s2{"b", 0, 1.0, 3.0};
  NormalizedScore s3{"c", 0, 1.0, 0.0};

  std::vector<TaggedPublication> tagged = {
      {&r1, "GB", FundingCategory::kNational, s1},
      {&r2, "GB", FundingCategory::kNational, s2},
      {&r3, "GB", FundingCategory::kNonFunded, s3},
  };
  IndicatorReport report = aggregate(tagged);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].country == "GB");
  CHECK(report.rows[0].category == FundingCategory::kNational);
  CHECK(report.rows[0].p == 2);
  CHECK(*report.rows[0].mncs == doctest::Approx(2.0));
  CHECK(report.rows[1].category == FundingCategory::kNonFunded);
  CHECK(report.rows[1].p == 1);
  CHECK(*report.rows[1].mncs == doctest::Approx(0.0));

  REQUIRE(report.totals.size() == 1);
  CHECK(report.totals[0].p == 3);
  CHECK(*report.totals[0].mncs == doctest::Approx(4.0 / 3.0));

  SUBCASE("empty input gives an empty report") {
    IndicatorReport empty = aggregate({});
    CHECK(empty.rows.empty());
    CHECK(empty.totals.empty());
  }
}

TEST_CASE("partition: per (country, year) the category counts sum to the total") {
  Rng rng(717);
  std::vector<PublicationRecord> store;
  store.reserve(2000);
  std::vector<TaggedPublication> tagged;
  const FundingCategory cats[] = {FundingCategory::kEuropean, FundingCategory::kNational,
                                  FundingCategory::kNationalAndEuropean, FundingCategory::kOther,
                                  FundingCategory::kNonFunded};
  for (size_t i = 0; i < 2000; ++i) {
    store.push_back(make_record("p" + std::to_string(i),
                                std::uniform_int_distribution<int>(2009, 2015)(rng),
                                DocType::kArticle, {"X"}, 1));
    NormalizedScore s;
    s.record_id = store.back().record_id;
    s.ncs = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
    const char* countries[] = {"GB", "FR", "NL", "ES"};
    tagged.push_back({&store.back(), countries[std::uniform_int_distribution<int>(0, 3)(rng)],
                      cats[std::uniform_int_distribution<int>(0, 4)(rng)], s});
  }
  IndicatorReport report = aggregate(tagged);

  std::map<std::pair<std::string, int>, int64_t> sums;
  for (const auto& row : report.rows) sums[{row.country, row.year}] += row.p;
  REQUIRE(!report.totals.empty());
  for (const auto& t : report.totals) {
    CHECK(sums[{t.country, t.year}] == t.p);
  }
}

TEST_CASE("undefined scores: excluded from MNCS, null only when no member is defined") {
  auto r1 = make_record("a", 2010, DocType::kArticle, {"X"}, 0);
  auto r2 = make_record("b", 2010, DocType::kArticle, {"X"}, 0);
  NormalizedScore defined{"a", 0, 1.0, 2.0};
  NormalizedScore undefined_score{"b", 0, 0.0, std::nullopt};

  IndicatorReport mixed = aggregate({{&r1, "GB", FundingCategory::kNational, defined},
                                     {&r2, "GB", FundingCategory::kNational, undefined_score}});
  REQUIRE(mixed.rows.size() == 1);
  CHECK(mixed.rows[0].p == 2);
  REQUIRE(mixed.rows[0].mncs.has_value());
  CHECK(*mixed.rows[0].mncs == doctest::Approx(2.0));

  IndicatorReport all_undef =
      aggregate({{&r2, "GB", FundingCategory::kNonFunded, undefined_score}});
  REQUIRE(all_undef.rows.size() == 1);
  CHECK(all_undef.rows[0].p == 1);
  CHECK_FALSE(all_undef.rows[0].mncs.has_value());
}

TEST_CASE("csv and plot data emission") {
  auto r1 = make_record("a", 2010, DocType::kArticle, {"X"}, 0);
  auto r2 = make_record("b", 2011, DocType::kArticle, {"X"}, 0);
  NormalizedScore s1{"a", 0, 1.0, 1.5};
  NormalizedScore s2{"b", 0, 0.0, std::nullopt};
  IndicatorReport report = aggregate({{&r1, "GB", FundingCategory::kNational, s1},
                                      {&r2, "GB", FundingCategory::kNonFunded, s2}});

  std::ostringstream csv;
  write_indicator_csv(report, csv);
  CHECK(csv.str() ==
        "country,year,category,p,mncs\n"
        "GB,2010,National,1,1.500000\n"
        "GB,2011,NonFunded,1,\n");

  std::ostringstream plot;
  write_plot_data(report, plot);
  std::string s = plot.str();
  CHECK(s.find("\"output_by_country\":{\"GB\":{\"2010\":1,\"2011\":1}}") != std::string::npos);
  CHECK(s.find("\"impact_by_country\":{\"GB\":{\"2010\":1.500000,\"2011\":null}}") !=
        std::string::npos);
  CHECK(s.find("\"category_shares\"") != std::string::npos);
  CHECK(s.back() == '\n');
}

TEST_CASE("full pipeline table equals a straight-line brute-force implementation") {
  Rng rng(2718);
  std::vector<std::string> cats = {"A", "B"};
  std::vector<std::string> countries = {"GB", "FR"};
  Corpus c;
  c.census_year = 2016;
  for (size_t i = 0; i < 300; ++i) {
    auto r = random_record(rng, i, cats, countries);
    if (r.citation_count == 0) r.citation_count = 2;
    c.records.push_back(std::move(r));
  }
  ReferenceStats stats = compute_reference_stats(c);

  const FundingCategory cat_values[] = {FundingCategory::kEuropean, FundingCategory::kNational,
                                        FundingCategory::kNationalAndEuropean,
                                        FundingCategory::kOther, FundingCategory::kNonFunded};
  std::vector<TaggedPublication> tagged;
  for (const auto& r : c.records) {
    for (const auto& country : r.countries) {
      tagged.push_back({&r, country,
                        cat_values[std::uniform_int_distribution<int>(0, 4)(rng)],
                        normalized_score(r, stats)});
    }
  }
  IndicatorReport report = aggregate(tagged);

  // independent re-aggregation
  struct Acc {
    int64_t p = 0;
    std::vector<double> ncs;
  };
  std::map<std::tuple<std::string, int, std::string>, Acc> cells;
  for (const auto& t : tagged) {
    auto& acc = cells[{t.country, t.record->pub_year, funding_category_name(t.category)}];
    acc.p += 1;
    if (t.score.ncs) acc.ncs.push_back(*t.score.ncs);
  }
  REQUIRE(report.rows.size() == cells.size());
  for (const auto& row : report.rows) {
    const auto& acc = cells.at({row.country, row.year, funding_category_name(row.category)});
    CHECK(row.p == acc.p);
    if (acc.ncs.empty()) {
      CHECK_FALSE(row.mncs.has_value());
    } else {
      double sum = 0;
      for (double v : acc.ncs) sum += v;
      REQUIRE(row.mncs.has_value());
      CHECK(*row.mncs == doctest::Approx(sum / static_cast<double>(acc.ncs.size())).epsilon(1e-12));
    }
  }
}
