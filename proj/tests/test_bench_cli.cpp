#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "dense_oracle.hpp"
#include "reference_values.hpp"
#include "qcfk/bench.hpp"

using namespace qcfk;
using namespace qcfk::testing;

namespace {

RunSpec parse(std::vector<std::string> args) { return parse_run_spec(args); }

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST(ParseRunSpec, Defaults) {
  const auto s = parse({"table2"});
  EXPECT_EQ(s.mode, Mode::table2);
  EXPECT_EQ(s.chain_lengths(), std::vector<int>{1000});
  const auto p = s.params(1000);
  EXPECT_EQ(p.k0, 1.0);
  EXPECT_EQ(p.k1, 2.0);
  EXPECT_EQ(p.k2, 2.0);
  EXPECT_EQ(p.a0, 1.0);
  EXPECT_EQ(p.bc, (std::array<double, 4>{-1000, -999, 999, 1000}));
  EXPECT_EQ(s.k_values().front(), 0);
  EXPECT_EQ(s.k_values().back(), 50);
  EXPECT_EQ(parse({"table1"}).chain_lengths().back(), 1000000);
  EXPECT_EQ(parse({"profile"}).chain_lengths(), std::vector<int>{500});
  EXPECT_EQ(parse({"profile"}).k_values(), std::vector<int>{20});
  EXPECT_EQ(parse({"table3"}).tolerances().size(), 13u);
}

TEST(ParseRunSpec, Constants) {
  const auto s = parse({"fixed-k", "--k1", "3", "--k2", "0.5"});
  EXPECT_DOUBLE_EQ(s.params(1000).k12(), 5.0);
}

TEST(ParseRunSpec, Lists) {
  const auto s = parse({"sweep-k", "--m", "200", "--k", "0,4,8", "--bc", "-200,-199,199,200"});
  EXPECT_EQ(s.k_list, (std::vector<int>{0, 4, 8}));
  EXPECT_EQ(s.chain_lengths(), std::vector<int>{200});
  EXPECT_TRUE(s.bc);
  const auto t = parse({"table3", "--tau-list", "1e-3,1e-5"});
  EXPECT_EQ(t.tolerances(), (std::vector<double>{1e-3, 1e-5}));
}

TEST(ParseRunSpec, UsageErrors) {
  EXPECT_THROW(parse({"adapt", "--tau-div", "0.5"}), usage_error);
  EXPECT_THROW(parse({"adapt", "--bogus"}), usage_error);
  EXPECT_THROW(parse({"adapt", "--k0", "abc"}), usage_error);
  EXPECT_THROW(parse({"table1", "--m", "100,2"}), usage_error);
  EXPECT_THROW(parse({"fixed-k", "--m", "10", "--k", "9"}), usage_error);
  EXPECT_THROW(parse({"nonsense"}), usage_error);
  EXPECT_THROW(parse({}), usage_error);
  EXPECT_THROW(parse({"adapt", "--format", "xml"}), usage_error);
  EXPECT_THROW(parse({"adapt", "--help"}), help_requested);
}

TEST(ParseRunSpec, ConfigFileWithOverride) {
  const auto path = temp_file("qcfk_cfg.ini", "m=300\nk=2,6\nk1=3\ntau-div=5\ngamma-split=true\n");
  const auto s = parse({"sweep-k", "--config", path, "--k1", "4"});
  EXPECT_EQ(s.chain_lengths(), std::vector<int>{300});
  EXPECT_EQ(s.k_list, (std::vector<int>{2, 6}));
  EXPECT_EQ(s.k1, 4.0);
  EXPECT_EQ(s.config.tau_div, 5.0);
  EXPECT_TRUE(s.config.use_gamma);
  std::remove(path.c_str());
}

TEST(ParseRunSpec, ConfigFileErrors) {
  const auto path = temp_file("qcfk_bad.ini", "tau-div=1\n");
  EXPECT_THROW(parse({"adapt", "--config", path}), usage_error);
  std::remove(path.c_str());
  EXPECT_THROW(parse({"adapt", "--config", "/nonexistent/qcfk.ini"}), usage_error);
}

TEST(Table1, SingleChainRows) {
  const auto res = cmd_table1(parse({"table1", "--m", "100"}));
  ASSERT_EQ(res.table.rows.size(), 3u);
  const auto& last = res.table.rows.back();
  EXPECT_EQ(last[0], 100);
  EXPECT_EQ(last[2], 32);
  EXPECT_LT(rel_diff(last[4], 4.878532e-11), 1e-4);
}

TEST(Table1, DefaultRowFormatting) {
  const auto res = cmd_table1(parse({"table1", "--m", "1000"}));
  const auto csv = to_csv(res.table);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "M,iteration,K,tau_at,eta1");
  EXPECT_NE(csv.find("1000,2,28,1.000000e-11,5.915"), std::string::npos) << csv;
}

TEST(Table2, ReferenceRowsAndFlags) {
  const auto res = cmd_table2(parse({"table2", "--k", "8,25,45,50"}));
  ASSERT_EQ(res.table.rows.size(), 4u);
  EXPECT_NEAR(res.table.rows[0][5], 1.787348, 1e-4 * 1.787348);
  const std::vector<double> k25{25, 2.770161e-09, 3.843388e-09, 1.387424, 5.077204e-09, 1.832819};
  for (std::size_t c = 1; c < 6; ++c) EXPECT_LT(rel_diff(res.table.rows[1][c], k25[c]), 1e-4) << c;
  EXPECT_TRUE(res.table.row_notes[0].is_null());
  const auto rows = rows_to_json(res.table);
  EXPECT_TRUE(rows[2].value("precision_floor", false));
  EXPECT_TRUE(rows[3].value("precision_floor", false));
  EXPECT_EQ(to_csv(res.table).find("precision"), std::string::npos);
}

TEST(Table3, ReferenceRows) {
  const auto res = cmd_table3(parse({"table3", "--tau-list", "1e-6,1e-10"}));
  ASSERT_EQ(res.table.rows.size(), 2u);
  EXPECT_EQ(res.table.rows[0], (std::vector<double>{1e-6, 16, 17, 17}));
  EXPECT_EQ(res.table.rows[1], (std::vector<double>{1e-10, 31, 31, 32}));
}

TEST(Profile, SeriesLayout) {
  const auto res = cmd_profile(parse({"profile", "--m", "60", "--k", "5"}));
  ASSERT_EQ(res.table.rows.size(), 120u);
  std::size_t at = 0, el = 0;
  for (const auto& r : res.table.rows) {
    at += !std::isnan(r[1]);
    el += !std::isnan(r[2]);
  }
  EXPECT_EQ(at, 116u);
  EXPECT_EQ(el, 119u);
}

TEST(Profile, AtomisticInteriorNegligibleAndPeakAtInterface) {
  const auto res = cmd_profile(parse({"profile"}));
  double peak = -1.0;
  int peak_atom = 0;
  for (const auto& r : res.table.rows) {
    const int i = static_cast<int>(r[0]);
    if (i >= -15 && i <= 16) {
      EXPECT_LT(r[1], 1e-20) << i;
    }
    if (!std::isnan(r[3]) && r[3] > peak) {
      peak = r[3];
      peak_atom = i;
    }
  }
  EXPECT_LE(std::min(std::abs(peak_atom - 20), std::abs(peak_atom + 19)), 2) << peak_atom;
}

TEST(FixedKCommand, ColumnsAndJson) {
  const auto spec = parse({"fixed-k", "--m", "80", "--k", "3", "--format", "json"});
  const auto res = cmd_fixed_k(spec);
  EXPECT_EQ(res.table.columns.size(), 14u);
  const auto j = json::parse(render(spec, res));
  EXPECT_EQ(j["spec"]["mode"], "fixed-k");
  EXPECT_EQ(j["rows"][0]["K"], 3);
  EXPECT_TRUE(j["reports"][0].contains("eta_low_minus"));
}

TEST(Output, CsvRoundTripIsExact) {
  const auto res = cmd_table2(parse({"table2", "--m", "200", "--k", "0,3,7"}));
  const auto csv = to_csv(res.table);
  const auto back = parse_csv(csv, res.table.columns);
  EXPECT_EQ(to_csv(back), csv);
  for (std::size_t r = 0; r < back.rows.size(); ++r)
    for (std::size_t c = 0; c < back.rows[r].size(); ++c)
      EXPECT_EQ(back.rows[r][c], std::stod(format_cell(res.table.rows[r][c], res.table.columns[c].kind)));
}

TEST(Output, JsonRoundTripIsBitExact) {
  const auto spec = parse({"sweep-k", "--m", "150", "--k", "0,5", "--format", "json"});
  const auto res = run_command(spec);
  const auto j = json::parse(render(spec, res));
  for (std::size_t r = 0; r < res.table.rows.size(); ++r)
    for (std::size_t c = 1; c < res.table.columns.size(); ++c)
      EXPECT_EQ(j["rows"][r][res.table.columns[c].name].get<double>(), res.table.rows[r][c]);
}

TEST(Output, EmptyCellsRoundTrip) {
  Table t;
  t.columns = {{"a", ColumnKind::integer}, {"b", ColumnKind::scientific}};
  t.add_row({1, std::nan("")});
  const auto back = parse_csv(to_csv(t), t.columns);
  EXPECT_TRUE(std::isnan(back.rows[0][1]));
  EXPECT_THROW(parse_csv("a,b\n1,2,3\n", t.columns), invalid_input);
}

TEST(Output, Deterministic) {
  for (const char* mode : {"adapt", "sweep-k", "profile"}) {
    const auto spec = parse({mode, "--m", "120", "--format", "json"});
    EXPECT_EQ(render(spec, run_command(spec)), render(spec, run_command(spec))) << mode;
  }
}
