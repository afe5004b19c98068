#include "driftscope/error.hpp"
#include "driftscope/report.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace driftscope;

namespace {

std::size_t count(const std::string& s, const std::string& needle)
{
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1))
    ++n;
  return n;
}

SweepResult toy_sweep(AnalysisConfig c = {})
{
  DatasetDescriptor d;
  d.name = "toy";
  d.formula = dstest::log_log();
  c.grid_hi = 20;
  return run_sweep(dstest::yearly({{1990, 4}, {1991, 3}, {1992, 5}, {1993, 4}}, 0.3), d, c);
}

} // namespace

TEST(Report, CurvesCsvRoundTripsExactly)
{
  const auto s = toy_sweep();
  std::stringstream buf;
  write_curves_csv(s, buf);
  EXPECT_EQ(buf.str().substr(0, buf.str().find('\n')),
            "dataset,split,kernel,bandwidth,re_train_nu,re_test_nu,re_train_u,re_test_u");
  const auto back = read_curves_csv(buf);
  EXPECT_EQ(back, curve_rows(s));
  EXPECT_EQ(back.size(), s.cells.size());
}

TEST(Report, CurvesCsvRejectsGarbage)
{
  std::istringstream bad_header("a,b,c\n");
  EXPECT_THROW(read_curves_csv(bad_header), ValidationError);
  std::istringstream bad_number(
      "dataset,split,kernel,bandwidth,re_train_nu,re_test_nu,re_train_u,re_test_u\n"
      "toy,1,gaussian,x,0.1,,0.1,\n");
  EXPECT_THROW(read_curves_csv(bad_number), ValidationError);
}

TEST(Report, SvgHasFourCurvesOnlyWhenThereIsATestSet)
{
  const auto s = toy_sweep();
  const auto rows = curve_rows(s);
  const auto& first = s.splits.front();
  const auto& last = s.splits.back();
  ASSERT_GT(first.test_size, 0u);
  ASSERT_EQ(last.test_size, 0u);

  const auto a = render_svg(rows, first.ordinal, KernelKind::Gaussian);
  EXPECT_EQ(count(a, "<polyline"), 4u);
  EXPECT_NE(a.find("version=\"1.1\""), std::string::npos);
  const auto b = render_svg(rows, last.ordinal, KernelKind::Gaussian);
  EXPECT_EQ(count(b, "<polyline"), 2u);

  EXPECT_THROW(render_svg(rows, 99, KernelKind::Gaussian), ValidationError);
  EXPECT_THROW(render_svg(rows, 1, KernelKind::Uniform), ValidationError);
}

TEST(Report, Sha256KnownAnswers)
{
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Report, AtomicWriteReplacesAndLeavesNoTemp)
{
  const auto dir = std::filesystem::temp_directory_path() / "driftscope_report_test";
  std::filesystem::create_directories(dir);
  const auto p = dir / "x.txt";
  write_file_atomic(p, "one");
  write_file_atomic(p, "two");
  std::ifstream in(p);
  std::string s;
  std::getline(in, s);
  EXPECT_EQ(s, "two");
  EXPECT_FALSE(std::filesystem::exists(dir / "x.txt.tmp"));
  std::filesystem::remove_all(dir);
}

TEST(Report, TimestampHonorsSourceDateEpoch)
{
  ::setenv("SOURCE_DATE_EPOCH", "0", 1);
  EXPECT_EQ(utc_timestamp(), "1970-01-01T00:00:00Z");
  ::unsetenv("SOURCE_DATE_EPOCH");
  EXPECT_EQ(utc_timestamp().size(), 20u);
}

TEST(Report, VerdictsJsonIsStable)
{
  AnalysisConfig c;
  c.grid_hi = 20;
  const auto s = toy_sweep(c);
  const auto sum = summarize(s, c);
  RunManifest m;
  m.config = to_json(c);
  m.timestamp = "2000-01-01T00:00:00Z";
  const auto j = verdicts_json(s, sum, m);
  EXPECT_EQ(j.dump(), verdicts_json(s, sum, m).dump());
  EXPECT_EQ(j.dump().find("2000-01-01"), std::string::npos);
  EXPECT_EQ(j["verdicts"].size(), s.splits.size() * c.kernels.size());
  EXPECT_TRUE(j["verdicts"].contains("1:gaussian"));
  EXPECT_EQ(j["overall"], to_string(sum.overall));
}
