#include <gtest/gtest.h>

#include <sstream>

#include "json.hpp"
#include "refint/errors.hpp"
#include "refint/pipeline.hpp"
#include "refint/synth.hpp"

namespace refint {
namespace {

ReportTable small_table() {
  const auto cohort = synth::generate(synth::iga_profile(), 11, 150);
  RunConfig cfg;
  cfg.cuts = {0, 10};
  cfg.seed = 11;
  return run_matrix(cohort, cfg);
}

TEST(Report, JsonRoundTripsLosslessly) {
  const auto table = small_table();
  const auto text = emit_report(table, ReportFormat::json);
  const auto back = parse_report_json(text);
  EXPECT_EQ(back, table);
  EXPECT_EQ(emit_report(back, ReportFormat::json), text);
}

TEST(Report, JsonCarriesMetadataAndNulls) {
  auto table = small_table();
  table.segments[0].eliminations[0].records[0].lower.reset();
  table.segments[0].eliminations[0].records[0].upper.reset();
  table.segments[0].eliminations[0].records[0].error = "insufficient_data: test";
  const auto j = nlohmann::json::parse(emit_report(table, "json"));
  EXPECT_EQ(j["metadata"]["engine"], "refint");
  EXPECT_EQ(j["metadata"]["config"]["seed"], 11);
  const auto& rec = j["segments"][0]["eliminations"][0]["records"][0];
  EXPECT_TRUE(rec["lower"].is_null());
  EXPECT_EQ(rec["error"], "insufficient_data: test");
  EXPECT_EQ(parse_report_json(j.dump()), table);
}

TEST(Report, CsvHasOneRowPerCell) {
  const auto csv = emit_report(small_table(), ReportFormat::csv);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line,
            "segment,sex,n,elimination,n_eliminated,method,lower,upper,transform_applied,"
            "lambda1,lambda2,flags,error");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 9);
}

TEST(Report, PlotdataArithmetic) {
  auto table = small_table();
  auto& rec = table.segments[0].eliminations[0].records[0];
  rec.lower = 0.170;
  rec.upper = 2.100;
  const auto j = nlohmann::json::parse(emit_report(table, ReportFormat::plotdata));
  const auto& iv = j["intervals"][0];
  EXPECT_NEAR(iv["midpoint"].get<double>(), 1.135, 1e-12);
  EXPECT_NEAR(iv["width"].get<double>(), 1.930, 1e-12);
  ASSERT_FALSE(j["boxplots"].empty());
  const auto& box = j["boxplots"][0];
  EXPECT_LE(box["q1"].get<double>(), box["median"].get<double>());
  EXPECT_LE(box["median"].get<double>(), box["q3"].get<double>());
}

TEST(Report, FormatNames) {
  EXPECT_EQ(parse_report_format("csv"), ReportFormat::csv);
  EXPECT_FALSE(parse_report_format("xml").has_value());
  EXPECT_THROW(emit_report(small_table(), "xml"), PreconditionError);
  EXPECT_THROW(parse_report_json("{"), InputError);
}

}  // namespace
}  // namespace refint
