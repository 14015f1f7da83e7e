#pragma once

// The norm engine. On step data the norm-accumulation ODE
//   phi' = |f(t)|^p(t) / p(t) * phi^(1-p(t))
// has the closed-form per-cell solution
//   phi_{k+1} = (phi_k^p_k + mass_k |f_k|^p_k)^(1/p_k),
// so propagation is exact: no time stepping, no truncation error. The
// stabilized solution (initial value 0+) is reached by an initial-value
// ladder a_k = base^k whose curves decrease pointwise; for step data the
// ladder limit equals the a = 0 propagation, which is what gets returned.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <sstream>
#include <vector>

#include "varnorm/errors.hpp"
#include "varnorm/function_model.hpp"
#include "varnorm/sequence_space.hpp"

namespace varnorm {

namespace detail {

// One cell of the accumulation: (phi^p + mass*|f|^p)^(1/p).
// mass is the cell width times any density weight.
inline double cell_update(double phi, double mass, double absf, double p) {
  if (absf == 0.0 || mass == 0.0) return phi;  // zero integrand freezes phi
  if (p == 1.0) return phi + mass * absf;
  if (phi == 0.0) return std::pow(mass, 1.0 / p) * absf;
  const double la = std::log(phi);
  const double lmass = std::log(mass);
  const double lb = lmass / p + std::log(absf);
  double next;
  if (p * std::fabs(la) <= kLogDomainThreshold && p * std::fabs(lb) <= kLogDomainThreshold &&
      std::fabs(lmass) <= 200.0) {
    next = std::pow(std::pow(phi, p) + mass * std::pow(absf, p), 1.0 / p);
  } else {
    const double hi = la >= lb ? phi : std::exp(lb);
    const double t = -p * std::fabs(la - lb);
    next = t < kExpUnderflow ? hi : hi * std::exp(std::log1p(std::exp(t)) / p);
  }
  // Growth is a hard invariant of the update; clamp out sub-ulp rounding.
  return next > phi ? next : phi;
}

// Propagate over all cells, returning phi at every breakpoint.
inline std::vector<double> propagate(std::span<const double> values,
                                     std::span<const double> exponents,
                                     std::span<const double> masses, double a) {
  std::vector<double> phi(values.size() + 1);
  phi[0] = a;
  for (std::size_t k = 0; k < values.size(); ++k)
    phi[k + 1] = cell_update(phi[k], masses[k], std::fabs(values[k]), exponents[k]);
  return phi;
}

inline std::vector<double> cell_widths(const Partition& part) {
  std::vector<double> w(part.cells());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = part.width(k);
  return w;
}

}  // namespace detail

// The accumulation curve phi sampled at partition breakpoints.
class NormCurve {
 public:
  NormCurve(Partition partition, std::vector<double> phi, double initial_value)
      : part_(std::move(partition)), phi_(std::move(phi)), initial_(initial_value) {
    if (phi_.size() != part_.cells() + 1)
      throw validation_error("curve needs one phi value per breakpoint");
    if (!(initial_ >= 0.0) || phi_.front() != initial_)
      throw validation_error("curve must start at its initial value");
    for (std::size_t i = 0; i + 1 < phi_.size(); ++i)
      if (!std::isfinite(phi_[i + 1]) || phi_[i + 1] < phi_[i])
        throw validation_error("curve must be finite and non-decreasing");
  }

  const Partition& partition() const noexcept { return part_; }
  const std::vector<double>& phi() const noexcept { return phi_; }
  double initial_value() const noexcept { return initial_; }
  double at_breakpoint(std::size_t i) const { return phi_[i]; }
  double final_value() const { return phi_.back(); }

 private:
  Partition part_;
  std::vector<double> phi_;
  double initial_;
};

struct SolveConfig {
  double abs_tol = 1e-10;
  double ladder_base = 0.5;          // initial values a_k = ladder_base^k
  std::size_t max_ladder_steps = 60;
  std::size_t grid_doublings = 6;    // refinement levels for sampled inputs
  std::size_t initial_cells = 64;    // base grid for sampled inputs

  void validate() const {
    if (!(abs_tol > 0.0)) throw validation_error("abs_tol must be positive");
    if (!(ladder_base > 0.0) || !(ladder_base < 1.0))
      throw validation_error("ladder_base must lie in (0,1)");
    if (max_ladder_steps < 2) throw validation_error("max_ladder_steps must be at least 2");
    if (initial_cells == 0) throw validation_error("initial_cells must be positive");
  }
};

// Exact propagation for a given initial value a >= 0. For a > 0 this is the
// unique positive-initial-value solution on step data; inputs must already
// share a partition.
inline NormCurve phi_step_exact(const StepFunction& f, const Exponent& p, double a) {
  if (!(f.partition() == p.partition()))
    throw validation_error("phi_step_exact requires a common partition; refine first");
  if (!(a >= 0.0) || !std::isfinite(a))
    throw validation_error("initial value must be finite and non-negative");
  auto masses = detail::cell_widths(f.partition());
  auto phi = detail::propagate(f.values(), p.step().values(), masses, a);
  return NormCurve(f.partition(), std::move(phi), a);
}

struct StabilizedCurve {
  NormCurve curve;           // the a -> 0 limit, relabeled as initial value 0+
  std::size_t ladder_steps;  // curves evaluated along the ladder
  bool converged;            // sup-gap of successive curves fell below abs_tol
  double final_gap;
};

namespace detail {

// Shared by the unweighted and the density-weighted norms.
inline StabilizedCurve stabilize(const Partition& part, std::span<const double> values,
                                 std::span<const double> exponents,
                                 std::span<const double> masses, const SolveConfig& cfg) {
  cfg.validate();
  std::vector<double> prev;
  double gap = 0.0;
  bool converged = false;
  std::size_t steps = 0;
  double a = 1.0;
  for (std::size_t k = 1; k <= cfg.max_ladder_steps; ++k) {
    a *= cfg.ladder_base;
    auto cur = propagate(values, exponents, masses, a);
    ++steps;
    if (!prev.empty()) {
      gap = 0.0;
      for (std::size_t i = 0; i < cur.size(); ++i)
        gap = std::max(gap, std::fabs(prev[i] - cur[i]));
      if (gap < cfg.abs_tol) {
        converged = true;
        prev = std::move(cur);
        break;
      }
    }
    prev = std::move(cur);
  }
  // The ladder certifies convergence; the limit itself is the exact a = 0
  // propagation (each cell update is continuous in the initial value), so
  // return that rather than the last ladder curve and its O(abs_tol) bias.
  auto limit = propagate(values, exponents, masses, 0.0);
  return {NormCurve(part, std::move(limit), 0.0), steps, converged, gap};
}

}  // namespace detail

// Stabilized solution: run the initial-value ladder until successive curves
// are sup-close, then return the limit curve. Non-convergence is reported in
// the result, not thrown, so callers can inspect the gap.
inline StabilizedCurve phi_stabilized(const StepFunction& f, const Exponent& p,
                                      const SolveConfig& cfg) {
  auto [fr, pr] = refine_common(f, p.step());
  auto masses = detail::cell_widths(fr.partition());
  return detail::stabilize(fr.partition(), fr.values(), pr.values(), masses, cfg);
}

struct NormResult {
  double value;
  std::size_t ladder_steps;
  bool converged;
  double final_gap;
};

inline NormResult norm_result(const StepFunction& f, const Exponent& p, const SolveConfig& cfg) {
  auto s = phi_stabilized(f, p, cfg);
  return {s.curve.final_value(), s.ladder_steps, s.converged, s.final_gap};
}

// The norm is phi(1) of the stabilized curve.
inline double norm(const StepFunction& f, const Exponent& p, const SolveConfig& cfg) {
  auto r = norm_result(f, p, cfg);
  if (!r.converged) {
    std::ostringstream os;
    os << "initial-value ladder did not converge within " << cfg.max_ladder_steps
       << " steps; last gap " << r.final_gap;
    throw convergence_error(os.str(), r.final_gap);
  }
  return r.value;
}

struct GridNorm {
  double value;
  double error_estimate;  // last successive-refinement gap; not a rigorous bound
  std::size_t cells;
};

// Norm of general evaluators via midpoint sampling on doubling grids.
inline GridNorm norm_general(const std::function<double(double)>& f,
                             const std::function<double(double)>& p, const SolveConfig& cfg) {
  cfg.validate();
  std::size_t n = cfg.initial_cells;
  double prev = 0.0;
  double value = 0.0;
  double err = 0.0;
  for (std::size_t level = 0; level <= cfg.grid_doublings; ++level) {
    StepFunction fs = sample_to_step(f, n);
    Exponent ps = validate_exponent(sample_to_step(p, n));
    value = norm(fs, ps, cfg);
    if (level > 0) err = std::fabs(value - prev);
    prev = value;
    if (level < cfg.grid_doublings) n *= 2;
  }
  return {value, err, n};
}

struct DisjointEstimates {
  double sum_norm;     // ||sum f_i||
  double upper_bound;  // p-combination of ||f_i|| at p = ess inf
  double lower_bound;  // q-combination of ||f_i|| at q = ess sup
};

// Upper p-estimate and lower q-estimate with constant 1 for disjointly
// supported functions: lower <= ||sum|| <= upper.
inline DisjointEstimates disjoint_estimates_check(const std::vector<StepFunction>& fs,
                                                  const Exponent& p, const SolveConfig& cfg) {
  if (fs.empty()) throw validation_error("need at least one function");
  Partition merged = p.partition();
  for (const auto& f : fs) merged = merge_partitions(merged, f.partition());
  std::vector<StepFunction> refined;
  refined.reserve(fs.size());
  for (const auto& f : fs) refined.push_back(f.on(merged));
  Exponent pr = p.on(merged);

  std::vector<double> sum(merged.cells(), 0.0);
  for (std::size_t k = 0; k < merged.cells(); ++k) {
    std::size_t nonzero = 0;
    for (const auto& f : refined)
      if (f.value(k) != 0.0) {
        ++nonzero;
        sum[k] = f.value(k);
      }
    if (nonzero > 1) throw validation_error("functions must have disjoint supports");
  }

  double lhs = norm(StepFunction(merged, std::move(sum)), pr, cfg);
  double upper = 0.0, lower = 0.0;
  for (const auto& f : refined) {
    double nf = norm(f, pr, cfg);
    upper = boxplus(upper, nf, p.ess_inf());
    lower = boxplus(lower, nf, p.ess_sup());
  }
  return {lhs, upper, lower};
}

struct SupBound {
  double norm_value;
  double bound;  // e * sup|f|
  bool ok;       // norm_value <= bound + abs_tol
};

inline SupBound sup_bound_check(const StepFunction& f, const Exponent& p,
                                const SolveConfig& cfg) {
  constexpr double kE = 2.718281828459045235;
  double n = norm(f, p, cfg);
  double bound = kE * f.sup_abs();
  return {n, bound, n <= bound + cfg.abs_tol};
}

}  // namespace varnorm
