#pragma once

// Luxemburg-type comparison norms from the two modulars
//   psi(s,t) = s^p(t) / p(t)   (the Nakano norm used for the constant-2
//                               equivalence with the ODE norm)
//   phi(s,t) = s^p(t)          (the plain variable-exponent Luxemburg norm)
// The norm is the infimum lambda with modular(f/lambda) <= 1, found by
// bracketing plus bisection; the modular is monotone in lambda.

#include <cmath>
#include <cstddef>
#include <limits>

#include "varnorm/errors.hpp"
#include "varnorm/function_model.hpp"
#include "varnorm/phi_solver.hpp"

namespace varnorm {

enum class ModularKind { NakanoPsi, PlainPhi };

// Integral of the modular of f/lambda; may be +inf for extreme inputs,
// which bisection treats as "above 1".
inline double modular(const StepFunction& f, const Exponent& p, double lambda,
                      ModularKind kind) {
  if (!(lambda > 0.0)) throw validation_error("modular requires lambda > 0");
  auto [fr, pr] = refine_common(f, p.step());
  const double llambda = std::log(lambda);
  double sum = 0.0;
  for (std::size_t k = 0; k < fr.cells(); ++k) {
    const double af = std::fabs(fr.value(k));
    if (af == 0.0) continue;
    const double pk = pr.value(k);
    double lt = pk * (std::log(af) - llambda);
    if (kind == ModularKind::NakanoPsi) lt -= std::log(pk);
    if (lt > 700.0) return std::numeric_limits<double>::infinity();
    sum += fr.partition().width(k) * std::exp(lt);
  }
  return sum;
}

// Infimum lambda with modular <= 1, to relative bracket width tol.
inline double nakano_norm(const StepFunction& f, const Exponent& p, ModularKind kind,
                          double tol = 1e-12) {
  if (!(tol > 0.0)) throw validation_error("nakano_norm requires tol > 0");
  if (f.identically_zero()) return 0.0;
  double hi = f.sup_abs();
  // modular(sup|f|) <= integral of 1/p <= 1, so sup|f| already caps the
  // norm; expansion only guards rounding at the boundary.
  int expand = 0;
  while (modular(f, p, hi, kind) > 1.0) {
    hi *= 2.0;
    if (++expand > 200) throw convergence_error("nakano bracket expansion failed", hi);
  }
  double lo = hi / 2.0;
  int shrink = 0;
  while (modular(f, p, lo, kind) <= 1.0) {
    hi = lo;
    lo /= 2.0;
    if (++shrink > 200)
      throw convergence_error("nakano bracket not found after 200 halvings", lo);
  }
  while (hi - lo > tol * hi) {
    double mid = 0.5 * (lo + hi);
    (modular(f, p, mid, kind) <= 1.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// ODE norm over psi-Nakano norm; lands in [1/2, 2] and equals q^(1/q)
// for constant exponent q.
inline double equivalence_ratio(const StepFunction& f, const Exponent& p,
                                const SolveConfig& cfg) {
  if (f.identically_zero())
    throw validation_error("equivalence_ratio requires a non-zero function");
  return norm(f, p, cfg) / nakano_norm(f, p, ModularKind::NakanoPsi);
}

}  // namespace varnorm
