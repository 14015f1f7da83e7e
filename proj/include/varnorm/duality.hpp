#pragma once

// Conjugate exponents, duality maps, the Holder inequality and the norming
// pairing for the accumulation norms, truncation projections, the extended
// norm, and the special variation norm of absolutely continuous functionals.
//
// Two duality maps live here. duality_map is the pointwise map
// sign(x)|x|^(p-1); it is norming for constant exponents. For varying step
// exponents the accumulation couples cells across exponent jumps and the
// pointwise map is no longer norming; the functional that attains Holder
// equality picks up one scale factor per jump, accumulated from the curve
// phi itself. norming_functional builds that attaining witness (unit dual
// norm); it reduces to J(x)/||J(x)|| exactly when the exponent is constant.

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "varnorm/errors.hpp"
#include "varnorm/function_model.hpp"
#include "varnorm/phi_solver.hpp"

namespace varnorm {

struct ConjugatePair {
  Exponent p;
  Exponent p_star;
};

// Cellwise p* = p/(p-1); requires ess inf p > 1.
inline ConjugatePair conjugate(const Exponent& p) {
  std::vector<double> conj(p.step().cells());
  for (std::size_t k = 0; k < conj.size(); ++k) {
    double pk = p.value(k);
    if (!(pk > 1.0)) {
      std::ostringstream os;
      os << "conjugate exponent undefined where p = 1 (cell " << k << ")";
      throw validation_error(os.str());
    }
    conj[k] = pk / (pk - 1.0);
  }
  return {p, Exponent(StepFunction(p.partition(), std::move(conj)))};
}

// Pointwise duality map J(x) = sign(x) |x|^(p-1).
inline StepFunction duality_map(const StepFunction& x, const Exponent& p) {
  if (!(p.ess_inf() > 1.0)) throw validation_error("duality map requires ess inf p > 1");
  auto [xr, pr] = refine_common(x, p.step());
  std::vector<double> vals(xr.cells());
  for (std::size_t k = 0; k < vals.size(); ++k) {
    double xv = xr.value(k);
    vals[k] = xv == 0.0 ? 0.0 : std::copysign(std::pow(std::fabs(xv), pr.value(k) - 1.0), xv);
  }
  return StepFunction(xr.partition(), std::move(vals));
}

// The attaining witness: the unit-dual-norm functional w with
// integral(x w) = ||x||. Within each cell it is proportional to the
// pointwise map; the per-cell scale is assembled from the curve phi.
inline StepFunction norming_functional(const StepFunction& x, const Exponent& p) {
  auto [xr, pr] = refine_common(x, p.step());
  const std::size_t m = xr.cells();
  auto masses = detail::cell_widths(xr.partition());
  auto phi = detail::propagate(xr.values(), pr.values(), masses, 0.0);

  std::vector<double> w(m, 0.0);
  double log_tail = 0.0;  // sum over later cells of (q-1) log(phi_k / phi_{k+1})
  for (std::size_t k = m; k-- > 0;) {
    const double xv = xr.value(k);
    const double q = pr.value(k);
    if (xv != 0.0) {
      double logw = (q - 1.0) * (std::log(std::fabs(xv)) - std::log(phi[k + 1])) + log_tail;
      w[k] = std::copysign(std::exp(logw), xv);
    }
    if (phi[k] > 0.0 && phi[k + 1] > phi[k])
      log_tail += (q - 1.0) * (std::log(phi[k]) - std::log(phi[k + 1]));
    else if (phi[k] == 0.0 && phi[k + 1] > 0.0)
      log_tail = -std::numeric_limits<double>::infinity();  // cells before any mass
  }
  return StepFunction(xr.partition(), std::move(w));
}

struct HolderReport {
  double lhs;  // integral |f g|
  double rhs;  // ||f||_p ||g||_p*
};

inline HolderReport holder_check(const StepFunction& f, const StepFunction& g,
                                 const ConjugatePair& pair, const SolveConfig& cfg) {
  Partition merged =
      merge_partitions(merge_partitions(f.partition(), g.partition()), pair.p.partition());
  StepFunction fr = f.on(merged), gr = g.on(merged);
  double lhs = 0.0;
  for (std::size_t k = 0; k < merged.cells(); ++k)
    lhs += merged.width(k) * std::fabs(fr.value(k) * gr.value(k));
  double rhs = norm(fr, pair.p.on(merged), cfg) * norm(gr, pair.p_star.on(merged), cfg);
  return {lhs, rhs};
}

struct PairingReport {
  double pairing;  // integral of x times the (scaled) duality witness
  double norm_x;
  double norm_Jx;
  double defect;  // |pairing - norm_x * norm_Jx|
};

// Numerical witness of the isometric duality: the pairing of x with its
// duality witness equals ||x||_p ||J(x)||_p*. The witness is scaled to the
// norm of the pointwise map, which it matches exactly for constant p.
inline PairingReport norming_pairing(const StepFunction& x, const Exponent& p,
                                     const SolveConfig& cfg) {
  if (!(p.ess_inf() > 1.0)) throw validation_error("norming pairing requires ess inf p > 1");
  ConjugatePair pair = conjugate(p);
  if (x.identically_zero()) return {0.0, 0.0, 0.0, 0.0};

  auto [xr, prs] = refine_common(x, p.step());
  Exponent pr(prs);
  Exponent pstar = conjugate(pr).p_star;
  double norm_x = norm(xr, pr, cfg);
  double scale = norm(duality_map(xr, pr), pstar, cfg);
  StepFunction w = norming_functional(xr, pr);
  double paired = 0.0;
  for (std::size_t k = 0; k < xr.cells(); ++k)
    paired += xr.partition().width(k) * xr.value(k) * w.value(k);
  double pairing = scale * paired;
  return {pairing, norm_x, scale, std::fabs(pairing - norm_x * scale)};
}

// Band projection: zero every cell whose exponent falls outside
// [1 + 1/n, n]. Contractive and idempotent.
inline StepFunction truncation_projection(const StepFunction& f, const Exponent& p, int n) {
  if (n < 2) throw validation_error("truncation projection requires n >= 2");
  auto [fr, pr] = refine_common(f, p.step());
  const double lo = 1.0 + 1.0 / static_cast<double>(n);
  const double hi = static_cast<double>(n);
  std::vector<double> vals(fr.values());
  for (std::size_t k = 0; k < vals.size(); ++k) {
    double pk = pr.value(k);
    if (pk < lo || pk > hi) vals[k] = 0.0;
  }
  return StepFunction(fr.partition(), std::move(vals));
}

struct ExtendedNorm {
  double value;                                  // sup over the ladder
  std::vector<std::pair<double, double>> ladder; // (n, ||1_{p<=n} f||)
};

// N(f) = sup_n ||1_{p(.)<=n} f||, evaluated along n = 2, 4, 8, ... until the
// whole support is covered. The ladder is monotone, and step exponents are
// bounded, so coverage always terminates; stopping on value stagnation
// instead would be wrong (the ladder can plateau below a later jump).
inline ExtendedNorm extended_norm(const StepFunction& f, const Exponent& p,
                                  const SolveConfig& cfg) {
  auto [fr, prs] = refine_common(f, p.step());
  Exponent pr(prs);
  double p_needed = 1.0;
  for (std::size_t k = 0; k < fr.cells(); ++k)
    if (fr.value(k) != 0.0) p_needed = std::max(p_needed, pr.value(k));

  ExtendedNorm out{0.0, {}};
  double n = 2.0;
  for (;;) {
    std::vector<double> vals(fr.values());
    for (std::size_t k = 0; k < vals.size(); ++k)
      if (pr.value(k) > n) vals[k] = 0.0;
    double v = norm(StepFunction(fr.partition(), std::move(vals)), pr, cfg);
    out.ladder.emplace_back(n, v);
    out.value = std::max(out.value, v);
    if (n >= p_needed) break;
    n = std::min(n * 2.0, std::max(p_needed, 2.0));
  }
  return out;
}

struct VariationReport {
  double value;         // dual-norm value ||g'||_p*
  double oracle_value;  // direct maximization of integral(f g') over the unit ball
  bool oracle_converged;
  std::size_t sweeps;
};

// Variation norm of the absolutely continuous functional with density g':
// sup { integral(f g') : ||f||_p <= 1 }. By isometric duality the value is
// ||g'||_p*; the oracle maximizes directly by projected coordinate ascent:
// each step maximizes the normalized objective integral(f g') / ||f|| along
// one cell's ray (unimodal in the cell magnitude), so the objective is
// non-decreasing and every iterate is a certified lower bound.
inline VariationReport special_variation(const StepFunction& g_prime, const ConjugatePair& pair,
                                         const SolveConfig& cfg) {
  cfg.validate();
  Partition merged = merge_partitions(g_prime.partition(), pair.p.partition());
  StepFunction gp = g_prime.on(merged);
  Exponent p = pair.p.on(merged);
  Exponent pstar = pair.p_star.on(merged);
  double value = norm(gp, pstar, cfg);
  if (gp.identically_zero()) return {value, 0.0, true, 0};

  const std::size_t m = merged.cells();
  auto masses = detail::cell_widths(merged);
  const auto& q = p.step().values();
  std::vector<double> f(m, 0.0);
  for (std::size_t k = 0; k < m; ++k)
    f[k] = gp.value(k) == 0.0 ? 0.0 : (gp.value(k) > 0 ? 1.0 : -1.0);

  auto fold_norm = [&](const std::vector<double>& vals) {
    return detail::propagate(vals, q, masses, 0.0).back();
  };
  auto objective = [&](const std::vector<double>& vals) {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += masses[k] * vals[k] * gp.value(k);
    return s;
  };
  auto normalized = [&](const std::vector<double>& vals) {
    return objective(vals) / fold_norm(vals);
  };

  double obj = normalized(f);
  bool converged = false;
  std::size_t sweep = 0;
  const std::size_t max_sweeps = 500;
  for (; sweep < max_sweeps; ++sweep) {
    for (std::size_t k = 0; k < m; ++k) {
      if (gp.value(k) == 0.0) continue;
      const double sign = gp.value(k) > 0 ? 1.0 : -1.0;
      auto at = [&](double mag) {
        f[k] = sign * mag;
        return normalized(f);
      };
      // bracket the unimodal peak of the normalized objective in |f_k|
      double hi = std::max(1.0, 4.0 * std::fabs(f[k]));
      for (int grow = 0; grow < 60 && at(hi) > at(0.5 * hi); ++grow) hi *= 2.0;
      double lo = 0.0;
      for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (at(m1) < at(m2)) lo = m1;
        else hi = m2;
      }
      at(0.5 * (lo + hi));
    }
    double nf = fold_norm(f);
    for (double& v : f) v /= nf;  // keep magnitudes near the sphere
    double next = normalized(f);
    if (next - obj <= cfg.abs_tol * 1e-2 * std::max(1.0, std::fabs(next))) {
      obj = next;
      converged = true;
      break;
    }
    obj = next;
  }
  return {value, obj, converged, sweep + 1};
}

}  // namespace varnorm
