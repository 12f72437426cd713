#include <gtest/gtest.h>

#include <set>

#include "dense_oracle.hpp"
#include "reference_values.hpp"
#include "qcfk/adaptivity.hpp"

using namespace qcfk;
using namespace qcfk::testing;

namespace {

EstimatorReport profile_report(int M, int K) { return fixed_k_run(ChainParams::standard(M), K, false).report; }

}  // namespace

TEST(Config, Validation) {
  AdaptConfig c;
  EXPECT_NO_THROW(c.validate());
  c.tau_div = 1.0;
  EXPECT_THROW(c.validate(), invalid_input);
  c = {};
  c.tau_gl = 0.0;
  EXPECT_THROW(c.validate(), invalid_input);
  c = {};
  c.max_iterations = 0;
  EXPECT_THROW(c.validate(), invalid_input);
}

TEST(Marking, ThresholdExtremes) {
  const auto rep = profile_report(100, 4);
  EXPECT_TRUE(mark_atoms(rep, 1e10).empty());
  const auto all = mark_atoms(rep, std::numeric_limits<double>::denorm_min());
  // every interior atom whose indicator is positive
  const auto tot = eta2_total(rep);
  const auto positive = std::count_if(tot.begin(), tot.end(), [](double v) { return v > 0.0; });
  EXPECT_EQ(static_cast<long>(all.size()), positive);
  EXPECT_GE(static_cast<long>(all.size()), 190);
  EXPECT_EQ(mark_atoms(rep, 0.0).size(), tot.size());
}

TEST(Marking, UsesGreaterOrEqual) {
  EstimatorReport rep;
  rep.eta2_at = {0.0, 1.0, 0.0, 0.0};  // M = 4
  rep.eta2_el = std::vector<double>(7, 0.0);
  rep.eta2_el[4] = 2.0;  // bond 1: atoms 1 and 2
  EXPECT_EQ(mark_atoms(rep, 1.0), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(mark_atoms(rep, 1.0000001), std::vector<int>{});
}

TEST(Marking, ProfileGivesSymmetricInterval) {
  // together with the current atomistic region -19..20 the marked atoms form an interval
  const auto marked = mark_atoms(profile_report(500, 20), 1e-12);
  ASSERT_FALSE(marked.empty());
  std::set<int> region(marked.begin(), marked.end());
  for (int i = -19; i <= 20; ++i) region.insert(i);
  const int K = *region.rbegin();
  EXPECT_GT(K, 20);
  EXPECT_EQ(*region.begin(), 1 - K);
  EXPECT_EQ(static_cast<int>(region.size()), 2 * K);
  for (int a : marked) EXPECT_TRUE(std::binary_search(marked.begin(), marked.end(), 1 - a)) << a;
}

TEST(Adaptive, ReferenceConvergence) {
  for (int M : {100, 1000, 10000}) {
    const auto trace = run_adaptive(ChainParams::standard(M), {});
    ASSERT_EQ(trace.iterations.size(), 3u) << M;
    EXPECT_EQ(trace.status, AdaptStatus::converged);
    for (const auto& row : adapt_rows()) {
      if (row.M != M) continue;
      const auto& it = trace.iterations[static_cast<std::size_t>(row.iteration - 1)];
      ASSERT_TRUE(it.K);
      EXPECT_EQ(*it.K, row.K);
      EXPECT_DOUBLE_EQ(it.tau_at, row.tau_at);
      EXPECT_LT(rel_diff(it.eta1, row.eta1), 1e-4) << M << " iteration " << row.iteration;
    }
  }
}

TEST(Adaptive, TraceInvariants) {
  AdaptConfig c;
  c.tau_gl = 1e-12;
  c.tau_div = 4.0;
  const auto trace = run_adaptive(ChainParams::standard(400), c);
  ASSERT_GE(trace.iterations.size(), 2u);
  for (std::size_t r = 0; r < trace.iterations.size(); ++r) {
    const auto& it = trace.iterations[r];
    EXPECT_DOUBLE_EQ(it.tau_at, c.tau_gl / std::pow(c.tau_div, static_cast<double>(r)));
    if (r > 0) {
      EXPECT_LE(it.eta1, trace.iterations[r - 1].eta1);
      EXPECT_GE(it.atomistic_count, trace.iterations[r - 1].atomistic_count);
    }
    for (int a : it.marked) EXPECT_NE(std::find(it.marked.begin(), it.marked.end(), 1 - a), it.marked.end()) << a;
  }
}

TEST(Adaptive, HugeToleranceConvergesImmediately) {
  AdaptConfig c;
  c.tau_gl = 1.0;
  const auto trace = run_adaptive(ChainParams::standard(1000), c);
  ASSERT_EQ(trace.iterations.size(), 1u);
  EXPECT_EQ(*trace.iterations[0].K, 0);
  EXPECT_TRUE(trace.final_atomistic.empty());
  EXPECT_EQ(trace.status, AdaptStatus::converged);
}

TEST(Adaptive, IterationCapIsNotAnError) {
  AdaptConfig c;
  c.max_iterations = 2;
  const auto trace = run_adaptive(ChainParams::standard(200), c);
  EXPECT_EQ(trace.iterations.size(), 2u);
  EXPECT_EQ(trace.status, AdaptStatus::iteration_cap);
}

TEST(Adaptive, SymmetrizeGrowsInterval) {
  AdaptConfig c;
  c.symmetrize = true;
  const auto trace = run_adaptive(ChainParams::standard(300), c);
  for (const auto& it : trace.iterations) EXPECT_TRUE(it.K.has_value());
  EXPECT_EQ(trace.status, AdaptStatus::converged);
}

TEST(Adaptive, LooseToleranceNeedsSecondIteration) {
  AdaptConfig c;
  c.tau_gl = 1e-2;
  const auto trace = run_adaptive(ChainParams::standard(1000), c);
  ASSERT_GE(trace.iterations.size(), 2u);
  EXPECT_LE(trace.iterations.back().eta1, 1e-2);
}

TEST(FixedK, ReferenceRows) {
  const auto p = ChainParams::standard(1000);
  const auto r0 = fixed_k_run(p, 0);
  EXPECT_LT(rel_diff(std::abs(*r0.goal_error), 3.627633e-02), 1e-6);
  EXPECT_LT(rel_diff(r0.report.eta1, 3.899208e-02), 1e-6);
  EXPECT_LT(rel_diff(r0.report.eta2, 3.999783e-02), 1e-6);
  const auto r3 = fixed_k_run(p, 3, false);
  EXPECT_FALSE(r3.goal_error);
  EXPECT_LT(r3.report.eta1, 3.872272e-02);
  EXPECT_GT(r3.report.eta1, 4.343595e-03);
}

TEST(FixedK, RejectsOutOfRange) {
  const auto p = ChainParams::standard(20);
  EXPECT_THROW(fixed_k_run(p, 19), invalid_input);
  EXPECT_THROW(fixed_k_run(p, -1), invalid_input);
  EXPECT_NO_THROW(fixed_k_run(p, 18));
}
