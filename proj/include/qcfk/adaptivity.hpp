#pragma once

// Adaptive selection of the atomistic region: estimate globally with eta1,
// refine where the decomposed eta2 indicators exceed a shrinking per-atom
// tolerance.

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "qcfk/estimators.hpp"
#include "qcfk/partition.hpp"

namespace qcfk {

struct AdaptConfig {
  double tau_gl = 1e-10;
  double tau_div = 10.0;
  int max_iterations = 50;
  /// Grow an interval -K+1..K over all marked atoms instead of marking atom by atom.
  bool symmetrize = false;
  bool use_gamma = false;

  void validate() const {
    if (!(tau_gl > 0.0) || !std::isfinite(tau_gl)) throw invalid_input("tau_gl must be positive");
    if (!(tau_div > 1.0) || !std::isfinite(tau_div)) throw invalid_input("tau_div must be greater than 1");
    if (max_iterations < 1) throw invalid_input("max_iterations must be at least 1");
  }
};

struct AdaptIteration {
  int iteration = 0;
  std::optional<int> K;     // set when the atomistic region is -K+1..K
  int atomistic_count = 0;
  double tau_at = 0.0;      // per-atom tolerance that produced this region
  double eta1 = 0.0;
  double eta2 = 0.0;
  std::vector<int> marked;  // atoms marked at the end of this iteration
};

enum class AdaptStatus { converged, iteration_cap };

inline std::string_view to_string(AdaptStatus s) { return s == AdaptStatus::converged ? "converged" : "cap"; }

struct AdaptTrace {
  int M = 0;
  std::vector<AdaptIteration> iterations;
  AdaptStatus status = AdaptStatus::iteration_cap;
  std::vector<int> final_atomistic;
};

/// K if the atomistic atoms are exactly -K+1..K.
inline std::optional<int> interval_half_width(const Partition& p) {
  const auto atoms = p.atomistic_atoms();
  if (atoms.empty()) return 0;
  const int K = atoms.back();
  if (atoms.front() != -K + 1 || static_cast<int>(atoms.size()) != 2 * K) return std::nullopt;
  return K;
}

/**
 * Interior atoms whose indicator eta_at + (eta_el(left bond) + eta_el(right bond)) / 2
 * reaches tau_at.
 */
inline std::vector<int> mark_atoms(const EstimatorReport& report, double tau_at) {
  const int M = static_cast<int>(report.eta2_at.size() + 4) / 2;
  const auto tot = eta2_total(report);
  std::vector<int> marked;
  for (std::size_t k = 0; k < tot.size(); ++k)
    if (tot[k] >= tau_at) marked.push_back(static_cast<int>(k) - M + 3);
  return marked;
}

inline AdaptTrace run_adaptive(const ChainParams& params, const AdaptConfig& config) {
  params.validate();
  config.validate();
  AdaptTrace trace;
  trace.M = params.M;
  std::set<int> atomistic;
  for (int it = 1; it <= config.max_iterations; ++it) {
    const std::vector<int> atoms(atomistic.begin(), atomistic.end());
    const auto part = make_partition(params, atoms);
    const auto pr = make_problem(params, part);
    const auto pair = solve_dual_pair(pr);
    const auto rep = estimate(pr, pair, {.use_gamma = config.use_gamma});

    AdaptIteration rec;
    rec.iteration = it;
    rec.K = interval_half_width(part);
    rec.atomistic_count = part.atomistic_count();
    rec.tau_at = config.tau_gl / std::pow(config.tau_div, it - 1);
    rec.eta1 = rep.eta1;
    rec.eta2 = rep.eta2;

    if (rep.eta1 <= config.tau_gl) {
      trace.iterations.push_back(std::move(rec));
      trace.status = AdaptStatus::converged;
      break;
    }
    const double tau_at = config.tau_gl / std::pow(config.tau_div, it);
    rec.marked = mark_atoms(rep, tau_at);
    if (config.symmetrize && !rec.marked.empty()) {
      int K = 0;
      for (int a : rec.marked) K = std::max(K, a >= 1 ? a : 1 - a);
      for (int a : atomistic) K = std::max(K, a >= 1 ? a : 1 - a);
      for (int a = -K + 1; a <= K; ++a) atomistic.insert(a);
    } else {
      atomistic.insert(rec.marked.begin(), rec.marked.end());
    }
    trace.iterations.push_back(std::move(rec));
  }
  trace.final_atomistic.assign(atomistic.begin(), atomistic.end());
  return trace;
}

struct FixedKResult {
  int K = 0;
  EstimatorReport report;
  std::optional<double> goal_error;  // Q(y^a) - Q(y^ac), when computed
};

/// Estimators for the atomistic interval -K+1..K, plus the true error when
/// `with_exact` is set.
inline FixedKResult fixed_k_run(const ChainParams& params, int K, bool with_exact = true,
                                const EstimatorOptions& opt = {}) {
  params.validate();
  if (K < 0 || K > params.M - 2)
    throw invalid_input("K must lie in 0..M-2, got " + std::to_string(K));
  const auto part = interval_partition(params, K);
  const auto pr = make_problem(params, part);
  const auto pair = solve_dual_pair(pr);
  FixedKResult r;
  r.K = K;
  r.report = estimate(pr, pair, opt);
  if (with_exact) r.goal_error = exact_goal_error(pr, pair).goal_error;
  return r;
}

}  // namespace qcfk
