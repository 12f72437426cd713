#pragma once

// Goal-oriented estimators for the error committed by replacing the
// atomistic chain with the atomistic-continuum chain, measured through the
// dislocation width Q(y) = y_1 - y_0.

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "qcfk/banded.hpp"
#include "qcfk/model.hpp"
#include "qcfk/partition.hpp"

namespace qcfk {

/**
 * Everything needed to estimate the modelling error of one partition: the
 * atomistic and atomistic-continuum models and their reduced systems, the
 * factor of M^ac, the factor of E^a used by the perturbation operator, and
 * the goal vector. Immutable once built.
 */
struct CouplingProblem {
  ChainParams params;
  Partition partition;
  QuadraticModel atomistic;
  QuadraticModel coupled;
  LinearSystem sys_a;
  LinearSystem sys_ac;
  BandedFactor ac_factor;
  BandedFactor ea_factor;
  BandedSpdMatrix e_diff;  // E^a - E^ac
  std::vector<double> q;
};

inline CouplingProblem make_problem(const ChainParams& params, const Partition& partition) {
  CouplingProblem pr;
  pr.params = params;
  pr.partition = partition;
  pr.atomistic = assemble(params, partition, Flavor::atomistic);
  pr.coupled = assemble(params, partition, Flavor::ac);
  pr.sys_a = reduce_system(pr.atomistic, params);
  pr.sys_ac = reduce_system(pr.coupled, params);
  pr.ac_factor = factor_system(pr.sys_ac);
  pr.ea_factor = factor(pr.atomistic.E);
  pr.e_diff = pr.atomistic.E - pr.coupled.E;
  pr.q = goal_vector(params);
  return pr;
}

/// Primal and dual atomistic-continuum solutions with their atomistic residuals.
struct DualPair {
  std::vector<double> u_ac;  // displacement of y_ac from the reference
  std::vector<double> y_ac;  // free positions
  std::vector<double> g_ac;
  std::vector<double> residual_primal;  // f^a - M^a y_ac
  std::vector<double> residual_dual;    // q - M^a g_ac
  std::vector<double> goal;
};

/**
 * The residuals use M^ac u_ac = f^ac and M^ac g_ac = q (both systems share
 * the reference configuration):
 *   f^a - M^a u_ac = (M^ac - M^a) u_ac + (f^a - f^ac),  q - M^a g_ac = (M^ac - M^a) g_ac.
 * Rows where the two models agree come out exactly zero instead of as the
 * difference of two nearly equal numbers.
 */
inline DualPair solve_dual_pair(const CouplingProblem& pr) {
  DualPair d;
  d.goal = pr.q;
  d.u_ac = pr.ac_factor.solve(pr.sys_ac.rhs);
  d.y_ac = pr.sys_ac.positions(d.u_ac);
  d.g_ac = pr.ac_factor.solve(pr.q);
  const auto my = pr.sys_a.mat.multiply(d.u_ac);
  const auto mg = pr.sys_a.mat.multiply(d.g_ac);
  const auto my_ac = pr.sys_ac.mat.multiply(d.u_ac);
  const auto mg_ac = pr.sys_ac.mat.multiply(d.g_ac);
  d.residual_primal.resize(my.size());
  d.residual_dual.resize(mg.size());
  for (std::size_t i = 0; i < my.size(); ++i) {
    d.residual_primal[i] = (my_ac[i] - my[i]) + (pr.sys_a.rhs[i] - pr.sys_ac.rhs[i]);
    d.residual_dual[i] = mg_ac[i] - mg[i];
  }
  return d;
}

/**
 * P v = v - (E^a)^{-1} E^ac v, evaluated as (E^a)^{-1} (E^a - E^ac) v so
 * that bonds where the two stiffnesses agree contribute exact zeros.
 */
inline std::vector<double> apply_perturbation(const BandedFactor& ea_factor, const BandedSpdMatrix& e_diff,
                                              std::span<const double> v) {
  return ea_factor.solve(e_diff.multiply(v));
}

/// Bond strains entering the estimators and their images under P.
struct PerturbedStrains {
  std::vector<double> primal;     // D^a (J y_ac + y_bc - a^a)
  std::vector<double> dual;       // D^a J g_ac
  std::vector<double> p_primal;   // P primal
  std::vector<double> p_dual;     // P dual
  double norm_primal = 0.0;       // ||P primal||_{E^a}
  double norm_dual = 0.0;         // ||P dual||_{E^a}
};

inline PerturbedStrains perturbed_strains(const CouplingProblem& pr, const DualPair& d) {
  PerturbedStrains s;
  // D (reference - a) + D J u_ac; the first part vanishes away from the defect
  std::vector<double> ref_a(pr.sys_ac.reference.size());
  for (std::size_t j = 0; j < ref_a.size(); ++j) ref_a[j] = pr.sys_ac.reference[j] - pr.atomistic.a_eq[j];
  s.primal = pr.atomistic.distances(ref_a);
  const auto du = pr.atomistic.distances(pr.sys_ac.extend(d.u_ac));
  for (std::size_t b = 0; b < du.size(); ++b) s.primal[b] += du[b];
  s.dual = pr.atomistic.distances(pr.sys_ac.extend(d.g_ac));
  s.p_primal = apply_perturbation(pr.ea_factor, pr.e_diff, s.primal);
  s.p_dual = apply_perturbation(pr.ea_factor, pr.e_diff, s.dual);
  s.norm_primal = norm(pr.atomistic.E, s.p_primal);
  s.norm_dual = norm(pr.atomistic.E, s.p_dual);
  return s;
}

/// Scaling that minimises both upper bounds; empty when either perturbed
/// strain vanishes, i.e. the two models agree wherever it matters.
inline std::optional<double> sigma_opt(const PerturbedStrains& s) {
  if (!(s.norm_primal > 0.0) || !(s.norm_dual > 0.0)) return std::nullopt;
  return std::sqrt(s.norm_dual / s.norm_primal);
}

struct PlusMinus {
  double plus = 0.0;
  double minus = 0.0;
};

/// Upper bounds on ||sigma e +- e_hat / sigma||_{M^a}.
inline PlusMinus eta_upp(const CouplingProblem& pr, const PerturbedStrains& s, double sigma) {
  const std::size_t n = s.p_primal.size();
  std::vector<double> vp(n), vm(n);
  for (std::size_t i = 0; i < n; ++i) {
    vp[i] = sigma * s.p_primal[i] + s.p_dual[i] / sigma;
    vm[i] = sigma * s.p_primal[i] - s.p_dual[i] / sigma;
  }
  return {norm(pr.atomistic.E, vp), norm(pr.atomistic.E, vm)};
}

/// Residual combination sigma R^a(y_ac) +- sigma^{-1} R^a_hat(g_ac).
inline std::vector<double> combined_residual(const DualPair& d, double sigma, double sign) {
  std::vector<double> r(d.residual_primal.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = sigma * d.residual_primal[i] + sign * d.residual_dual[i] / sigma;
  return r;
}

/// M^a inner products of the computable test vectors.
struct TestVectorGram {
  double yy = 0.0;  // y^T M^a y
  double gy = 0.0;  // g^T M^a y
  double gg = 0.0;  // g^T M^a g
};

inline TestVectorGram test_vector_gram(const CouplingProblem& pr, const DualPair& d) {
  const auto my = pr.sys_a.mat.multiply(d.y_ac);
  const auto mg = pr.sys_a.mat.multiply(d.g_ac);
  return {dot(d.y_ac, my), dot(d.g_ac, my), dot(d.g_ac, mg)};
}

/// Critical point of theta -> (y + theta g)^T r / ||y + theta g||_{M^a};
/// empty when the closed form has a vanishing denominator.
inline std::optional<double> theta_opt(const DualPair& d, const TestVectorGram& gram, std::span<const double> r) {
  const double ry = dot(r, d.y_ac);
  const double rg = dot(r, d.g_ac);
  const double num = ry * gram.gy - rg * gram.yy;
  const double den = rg * gram.gy - ry * gram.gg;
  if (den == 0.0) return std::nullopt;
  const double t = num / den;
  if (!std::isfinite(t)) return std::nullopt;
  return t;
}

/// Lower bound (y + theta g)^T r / ||y + theta g||_{M^a}. The sign is
/// arbitrary; its magnitude bounds the corresponding norm from below.
inline double eta_low(const CouplingProblem& pr, const DualPair& d, std::span<const double> r, double theta) {
  std::vector<double> v(d.y_ac.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = d.y_ac[i] + theta * d.g_ac[i];
  const double nv = norm(pr.sys_a.mat, v);
  if (!(nv > 0.0)) return 0.0;
  return dot(v, r) / nv;
}

struct EstimatorOptions {
  bool use_gamma = false;
};

struct EstimatorReport {
  double first_term = 0.0;  // g_ac^T R^a(y_ac)
  double sigma_bar = 1.0;
  double theta_plus = 0.0;
  double theta_minus = 0.0;
  double eta_upp_plus = 0.0;
  double eta_upp_minus = 0.0;
  double eta_low_plus = 0.0;
  double eta_low_minus = 0.0;
  double bound_low = 0.0;
  double bound_high = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  std::optional<double> eta2_weighted;
  std::optional<double> gamma;
  std::vector<double> eta2_at;  // interior atoms -M+3..M-2
  std::vector<double> eta2_el;  // bonds -M+1..M-1
  bool sigma_degenerate = false;
  bool theta_plus_fallback = false;
  bool theta_minus_fallback = false;
  bool gamma_forced = false;
};

/// Fills the sandwich bounds and eta1.
inline void eta1(const CouplingProblem& pr, const DualPair& d, const PerturbedStrains& s, EstimatorReport& rep) {
  rep.first_term = dot(d.g_ac, d.residual_primal);
  const auto sigma = sigma_opt(s);
  if (!sigma) {
    rep.sigma_degenerate = true;
    rep.sigma_bar = 1.0;
    rep.eta_upp_plus = rep.eta_upp_minus = rep.eta_low_plus = rep.eta_low_minus = 0.0;
    rep.theta_plus = rep.theta_minus = 0.0;
    rep.bound_low = rep.bound_high = rep.first_term;
    rep.eta1 = std::abs(rep.first_term);
    return;
  }
  rep.sigma_bar = *sigma;
  const auto upp = eta_upp(pr, s, *sigma);
  rep.eta_upp_plus = upp.plus;
  rep.eta_upp_minus = upp.minus;

  const auto gram = test_vector_gram(pr, d);
  const auto rp = combined_residual(d, *sigma, 1.0);
  const auto rm = combined_residual(d, *sigma, -1.0);
  const auto tp = theta_opt(d, gram, rp);
  const auto tm = theta_opt(d, gram, rm);
  rep.theta_plus_fallback = !tp;
  rep.theta_minus_fallback = !tm;
  rep.theta_plus = tp.value_or(0.0);
  rep.theta_minus = tm.value_or(0.0);
  rep.eta_low_plus = eta_low(pr, d, rp, rep.theta_plus);
  rep.eta_low_minus = eta_low(pr, d, rm, rep.theta_minus);

  rep.bound_low = rep.first_term + 0.25 * rep.eta_low_plus * rep.eta_low_plus -
                  0.25 * rep.eta_upp_minus * rep.eta_upp_minus;
  rep.bound_high = rep.first_term + 0.25 * rep.eta_upp_plus * rep.eta_upp_plus -
                   0.25 * rep.eta_low_minus * rep.eta_low_minus;
  rep.eta1 = std::max(std::abs(rep.bound_low), std::abs(rep.bound_high));
}

/// Fills eta2 and its atom-wise and bond-wise contributions.
inline void eta2(const CouplingProblem& pr, const DualPair& d, const PerturbedStrains& s, EstimatorReport& rep,
                 const EstimatorOptions& opt = {}) {
  rep.first_term = dot(d.g_ac, d.residual_primal);
  rep.eta2 = std::abs(rep.first_term) + s.norm_primal * s.norm_dual;

  rep.eta2_at.resize(d.g_ac.size());
  for (std::size_t i = 0; i < d.g_ac.size(); ++i) rep.eta2_at[i] = std::abs(d.g_ac[i] * d.residual_primal[i]);

  double wp = 1.0;
  double wd = 1.0;
  if (opt.use_gamma) {
    double gamma = 1.0;
    if (s.norm_primal > 0.0 && s.norm_dual > 0.0) {
      gamma = s.norm_dual / s.norm_primal;
    } else {
      rep.gamma_forced = true;
    }
    rep.gamma = gamma;
    wp = gamma;
    wd = 1.0 / gamma;
    rep.eta2_weighted = std::abs(rep.first_term) + 0.5 * gamma * s.norm_primal * s.norm_primal +
                        0.5 / gamma * s.norm_dual * s.norm_dual;
  }
  const auto dp = pr.e_diff.multiply(s.primal);
  const auto dd = pr.e_diff.multiply(s.dual);
  rep.eta2_el.resize(dp.size());
  for (std::size_t b = 0; b < dp.size(); ++b)
    rep.eta2_el[b] = 0.5 * wp * std::abs(s.p_primal[b] * dp[b]) + 0.5 * wd * std::abs(s.p_dual[b] * dd[b]);
}

/// Both estimators for a solved pair.
inline EstimatorReport estimate(const CouplingProblem& pr, const DualPair& d, const EstimatorOptions& opt = {}) {
  EstimatorReport rep;
  const auto s = perturbed_strains(pr, d);
  eta1(pr, d, s, rep);
  eta2(pr, d, s, rep, opt);
  return rep;
}

/// Local indicator of interior atom k (0-based, atom k - M + 3): its own
/// contribution plus half of each adjacent bond.
inline std::vector<double> eta2_total(const EstimatorReport& rep) {
  std::vector<double> tot(rep.eta2_at.size());
  for (std::size_t k = 0; k < tot.size(); ++k)
    tot[k] = rep.eta2_at[k] + 0.5 * (rep.eta2_el[k + 1] + rep.eta2_el[k + 2]);
  return tot;
}

/// Atomistic solution and the true modelling error, for chains small enough
/// to solve the atomistic system directly.
struct ExactError {
  double goal_error = 0.0;          // Q(y^a) - Q(y^ac)
  std::vector<double> y_a;
  std::vector<double> e;            // y^a - y^ac
  std::vector<double> g_a;
  std::vector<double> e_hat;        // g^a - g^ac
};

inline ExactError exact_goal_error(const CouplingProblem& pr, const DualPair& d) {
  ExactError x;
  // M^a e = R^a(y_ac) and M^a e_hat = R_hat^a(g_ac): the errors come out
  // directly instead of as differences of two nearly equal solutions
  const auto fa = factor_system(pr.sys_a);
  x.e = fa.solve(d.residual_primal);
  x.e_hat = fa.solve(d.residual_dual);
  x.y_a.resize(x.e.size());
  x.g_a.resize(x.e.size());
  for (std::size_t i = 0; i < x.e.size(); ++i) {
    x.y_a[i] = pr.sys_a.reference[i + 2] + (d.u_ac[i] + x.e[i]);
    x.g_a[i] = d.g_ac[i] + x.e_hat[i];
  }
  x.goal_error = dot(pr.q, x.e);
  return x;
}

inline ExactError exact_goal_error(const ChainParams& params, const Partition& partition) {
  const auto pr = make_problem(params, partition);
  return exact_goal_error(pr, solve_dual_pair(pr));
}

struct IdentityResidual {
  double residual = 0.0;  // infinity norm of the defect
  double scale = 0.0;     // infinity norm of the terms being compared
};

/**
 * Defect of M^a (alpha e + beta e_hat) = -J^T D^T E^a P D (alpha z + beta J g_ac)
 * with z the full atomistic-continuum deformation minus the lattice.
 */
inline IdentityResidual lemma1_check(const CouplingProblem& pr, const DualPair& d, const ExactError& x, double alpha,
                                     double beta) {
  const std::size_t nf = x.e.size();
  std::vector<double> comb(nf);
  for (std::size_t i = 0; i < nf; ++i) comb[i] = alpha * x.e[i] + beta * x.e_hat[i];
  const auto lhs = pr.sys_a.mat.multiply(comb);

  const auto s = perturbed_strains(pr, d);
  std::vector<double> mixed(s.primal.size());
  for (std::size_t b = 0; b < mixed.size(); ++b) mixed[b] = alpha * s.primal[b] + beta * s.dual[b];
  const auto pm = apply_perturbation(pr.ea_factor, pr.e_diff, mixed);
  const auto rhs_full = pr.atomistic.distances_transpose(pr.atomistic.E.multiply(pm));
  const auto rhs = pr.sys_a.restrict(rhs_full);

  IdentityResidual out;
  for (std::size_t i = 0; i < nf; ++i) {
    out.residual = std::max(out.residual, std::abs(lhs[i] + rhs[i]));
    out.scale = std::max({out.scale, std::abs(lhs[i]), std::abs(rhs[i])});
  }
  return out;
}

}  // namespace qcfk
