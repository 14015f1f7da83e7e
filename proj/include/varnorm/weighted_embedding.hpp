#pragma once

// Density-weighted norms, the change-of-density isometry, and the
// desk-scale universal embedding.
//
// The universal exponent p0(t) = u sin(u) + u + 1 with u = 1/(1-t) touches
// its minimum value 1 exactly at u = 3pi/2 + 2pi j and rises to a local
// maximum of roughly 2u in between, so every window of length 2pi carries
// one increasing and one decreasing branch whose ranges eventually sweep any
// [p_lo, p_hi] in (1, inf). A monotone exponent piece of p is transplanted
// onto a same-direction branch by inverting p0 there; matching directions
// keeps the transplant order-preserving, which the accumulation norm
// requires (cells do not commute under varying exponents).

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "varnorm/errors.hpp"
#include "varnorm/function_model.hpp"
#include "varnorm/phi_solver.hpp"

namespace varnorm {

struct WeightedSpec {
  Exponent p;
  Density w;  // dmu/dm
};

namespace detail {

struct WeightedAligned {
  Partition part;
  std::vector<double> values;
  std::vector<double> exponents;
  std::vector<double> masses;  // w_k * width_k
};

inline WeightedAligned align_weighted(const StepFunction& f, const WeightedSpec& spec) {
  Partition merged =
      merge_partitions(merge_partitions(f.partition(), spec.p.partition()), spec.w.partition());
  StepFunction fr = f.on(merged);
  StepFunction pr = spec.p.step().on(merged);
  StepFunction wr = spec.w.step().on(merged);
  std::vector<double> masses(merged.cells());
  for (std::size_t k = 0; k < masses.size(); ++k)
    masses[k] = wr.value(k) * merged.width(k);
  return {merged, fr.values(), pr.values(), std::move(masses)};
}

}  // namespace detail

// Norm with cell masses weighted by the density: the per-cell update becomes
// (phi^p + w * width * |f|^p)^(1/p).
inline StabilizedCurve weighted_phi_stabilized(const StepFunction& f, const WeightedSpec& spec,
                                               const SolveConfig& cfg) {
  auto a = detail::align_weighted(f, spec);
  return detail::stabilize(a.part, a.values, a.exponents, a.masses, cfg);
}

inline NormResult weighted_norm_result(const StepFunction& f, const WeightedSpec& spec,
                                       const SolveConfig& cfg) {
  auto s = weighted_phi_stabilized(f, spec, cfg);
  return {s.curve.final_value(), s.ladder_steps, s.converged, s.final_gap};
}

inline double weighted_norm(const StepFunction& f, const WeightedSpec& spec,
                            const SolveConfig& cfg) {
  auto r = weighted_norm_result(f, spec, cfg);
  if (!r.converged)
    throw convergence_error("weighted norm ladder did not converge", r.final_gap);
  return r.value;
}

struct WeightIsometry {
  double norm_m;         // ||f|| under Lebesgue measure
  double norm_mu_of_Tf;  // ||T f|| in the weighted space, T f = w^(-1/p) f
};

// T f = (dmu/dm)^(-1/p(t)) f is an isometry onto the weighted space.
inline WeightIsometry weight_isometry_check(const StepFunction& f, const WeightedSpec& spec,
                                            const SolveConfig& cfg) {
  auto a = detail::align_weighted(f, spec);
  StepFunction wr = spec.w.step().on(a.part);
  std::vector<double> tf(a.values);
  for (std::size_t k = 0; k < tf.size(); ++k)
    tf[k] *= std::pow(wr.value(k), -1.0 / a.exponents[k]);
  Exponent pr(StepFunction(a.part, a.exponents));
  double lhs = norm(StepFunction(a.part, a.values), pr, cfg);
  WeightedSpec aligned{pr, Density(wr)};
  double rhs = weighted_norm(StepFunction(a.part, std::move(tf)), aligned, cfg);
  return {lhs, rhs};
}

namespace detail {

inline double p0_u(double u) { return u * (1.0 + std::sin(u)) + 1.0; }
inline double p0_u_deriv(double u) { return 1.0 + std::sin(u) + u * std::cos(u); }
inline double t_of_u(double u) { return 1.0 - 1.0 / u; }
inline double u_of_t(double t) { return 1.0 / (1.0 - t); }

constexpr double kPi = 3.14159265358979323846;

// One 2pi window of p0 in u coordinates: strictly increasing from the
// exact minimum (value 1) to a unique maximum, then strictly decreasing
// to the next minimum.
struct P0Window {
  double u_min;   // 3pi/2 + 2pi j
  double u_peak;
  double u_next;  // 3pi/2 + 2pi (j+1)
  double p_peak;
};

inline P0Window p0_window(std::size_t j) {
  double u_min = 1.5 * kPi + 2.0 * kPi * static_cast<double>(j);
  double u_next = u_min + 2.0 * kPi;
  double a = u_min + 1e-9, b = u_next - 1e-9;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (a + b);
    (p0_u_deriv(mid) > 0.0 ? a : b) = mid;
  }
  double u_peak = 0.5 * (a + b);
  return {u_min, u_peak, u_next, p0_u(u_peak)};
}

// Solve p0(u) = target on a monotone u-branch.
inline double invert_p0_branch(double target, double u_lo, double u_hi, bool increasing) {
  double a = u_lo, b = u_hi;
  for (int it = 0; it < 200 && b - a > 1e-16 * b; ++it) {
    double mid = 0.5 * (a + b);
    bool below = p0_u(mid) < target;
    if (below == increasing) a = mid;
    else b = mid;
  }
  return 0.5 * (a + b);
}

}  // namespace detail

// The universal exponent; defined on [0, 1).
inline double p0_eval(double t) {
  if (!(t >= 0.0) || !(t < 1.0)) throw validation_error("p0 is defined on [0,1) only");
  double u = detail::u_of_t(t);
  return u * std::sin(u) + u + 1.0;
}

inline double p0_prime(double t) {
  if (!(t >= 0.0) || !(t < 1.0)) throw validation_error("p0 is defined on [0,1) only");
  double u = detail::u_of_t(t);
  return detail::p0_u_deriv(u) * u * u;
}

enum class PieceDirection { increasing, decreasing };

struct MonotonePiece {
  double lo, hi;  // interval in [0,1)
  PieceDirection direction;
  double p_lo, p_hi;  // range swept
};

// Locate `count` disjoint intervals, in order, on which p0 monotonically
// sweeps exactly [p_lo, p_hi]. Both directions are emitted as the scan walks
// the windows. The peak heights grow without bound, so pieces always exist;
// exhausting the window budget means the requested range outruns the scan.
inline std::vector<MonotonePiece> find_monotone_pieces(double p_lo, double p_hi,
                                                       std::size_t count) {
  if (!(p_lo > 1.0) || !(p_hi > p_lo) || !std::isfinite(p_hi))
    throw validation_error("piece range must satisfy 1 < p_lo < p_hi < inf");
  if (count == 0) throw validation_error("count must be positive");
  std::vector<MonotonePiece> out;
  constexpr std::size_t kMaxWindows = 256;
  for (std::size_t j = 0; j < kMaxWindows && out.size() < count; ++j) {
    auto w = detail::p0_window(j);
    if (w.p_peak <= p_hi) continue;
    double ua = detail::invert_p0_branch(p_lo, w.u_min, w.u_peak, true);
    double ub = detail::invert_p0_branch(p_hi, w.u_min, w.u_peak, true);
    out.push_back({detail::t_of_u(ua), detail::t_of_u(ub), PieceDirection::increasing,
                   p_lo, p_hi});
    if (out.size() >= count) break;
    double uc = detail::invert_p0_branch(p_hi, w.u_peak, w.u_next, false);
    double ud = detail::invert_p0_branch(p_lo, w.u_peak, w.u_next, false);
    out.push_back({detail::t_of_u(uc), detail::t_of_u(ud), PieceDirection::decreasing,
                   p_lo, p_hi});
  }
  if (out.size() < count)
    throw convergence_error("not enough monotone pieces within the scan budget",
                            static_cast<double>(count - out.size()));
  return out;
}

// A C^1 exponent given as evaluators plus its declared monotone intervals.
struct SmoothExponent {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::vector<std::pair<double, double>> pieces;  // ordered, p' nonzero inside
};

struct EmbeddingPiece {
  double src_lo, src_hi;
  bool src_increasing;
  MonotonePiece target;
  std::vector<double> xs, ys;  // tabulated T: ys[i] = T(xs[i]), both ascending
};

class EmbeddingMap {
 public:
  EmbeddingMap(SmoothExponent source, std::vector<EmbeddingPiece> pieces, double max_residual)
      : source_(std::move(source)), pieces_(std::move(pieces)), max_residual_(max_residual) {}

  const SmoothExponent& source() const noexcept { return source_; }
  const std::vector<EmbeddingPiece>& pieces() const noexcept { return pieces_; }
  double max_residual() const noexcept { return max_residual_; }

  // T(x) by monotone piecewise-linear interpolation of the tabulation.
  double map(double x) const {
    const EmbeddingPiece& pc = piece_containing(x);
    auto it = std::upper_bound(pc.xs.begin(), pc.xs.end(), x);
    std::size_t i = std::min<std::size_t>(
        pc.xs.size() - 2, it == pc.xs.begin() ? 0 : static_cast<std::size_t>(it - pc.xs.begin()) - 1);
    double frac = (x - pc.xs[i]) / (pc.xs[i + 1] - pc.xs[i]);
    return pc.ys[i] + frac * (pc.ys[i + 1] - pc.ys[i]);
  }

  double inverse(double t) const {
    for (const auto& pc : pieces_) {
      if (t < pc.ys.front() || t > pc.ys.back()) continue;
      auto it = std::upper_bound(pc.ys.begin(), pc.ys.end(), t);
      std::size_t i = std::min<std::size_t>(
          pc.ys.size() - 2, it == pc.ys.begin() ? 0 : static_cast<std::size_t>(it - pc.ys.begin()) - 1);
      double frac = (t - pc.ys[i]) / (pc.ys[i + 1] - pc.ys[i]);
      return pc.xs[i] + frac * (pc.xs[i + 1] - pc.xs[i]);
    }
    throw validation_error("point outside the image of the embedding map");
  }

 private:
  const EmbeddingPiece& piece_containing(double x) const {
    for (const auto& pc : pieces_)
      if (x >= pc.src_lo && x <= pc.src_hi) return pc;
    throw validation_error("point outside the embedding source pieces");
  }

  SmoothExponent source_;
  std::vector<EmbeddingPiece> pieces_;
  double max_residual_;
};

// Build T piece by piece: each declared monotone piece of p is matched to
// the next same-direction branch of p0 sweeping its range, and T is
// tabulated there by inverting p0 at uniformly spaced source nodes.
inline EmbeddingMap build_embedding(const SmoothExponent& p, std::size_t cells_per_piece) {
  if (p.pieces.empty()) throw validation_error("embedding needs at least one declared piece");
  if (cells_per_piece < 2) throw validation_error("need at least two tabulation cells");

  std::vector<EmbeddingPiece> out;
  double max_residual = 0.0;
  // Branches in t order: branch c is window c/2, increasing when c is even.
  std::size_t branch_cursor = 0;
  double prev_hi = 0.0;

  for (const auto& [a, b] : p.pieces) {
    if (!(a >= 0.0) || !(a < b) || !(b <= 1.0))
      throw validation_error("declared pieces must be ordered subintervals of [0,1]");
    if (a < prev_hi) throw validation_error("declared pieces must not overlap");
    prev_hi = b;
    const double pa = p.value(a), pb = p.value(b);
    if (std::fabs(pb - pa) < 1e-9)
      throw validation_error("exponent is constant on a declared piece");
    const bool incr = pb > pa;
    const double plo = std::min(pa, pb), phi_ = std::max(pa, pb);
    if (!(plo > 1.0)) throw validation_error("exponent range must lie in (1, inf)");
    for (int s = 1; s <= 7; ++s) {
      double x = a + (b - a) * s / 8.0;
      double d = p.derivative(x);
      if (d == 0.0 || (d > 0.0) != incr)
        throw validation_error("p' must keep one sign inside each declared piece");
    }

    // next unused same-direction branch whose peak clears the range
    double u_lo = 0.0, u_hi = 0.0;
    for (;; ++branch_cursor) {
      std::size_t window = branch_cursor / 2;
      if (window >= 256)
        throw convergence_error("no matching p0 branch within the scan budget", phi_);
      const bool branch_is_incr = branch_cursor % 2 == 0;
      if (branch_is_incr != incr) continue;
      auto w = detail::p0_window(window);
      if (w.p_peak <= phi_) continue;
      u_lo = branch_is_incr ? w.u_min : w.u_peak;
      u_hi = branch_is_incr ? w.u_peak : w.u_next;
      ++branch_cursor;
      break;
    }

    EmbeddingPiece pc;
    pc.src_lo = a;
    pc.src_hi = b;
    pc.src_increasing = incr;
    pc.target = {0.0, 0.0, incr ? PieceDirection::increasing : PieceDirection::decreasing,
                 plo, phi_};
    pc.xs.resize(cells_per_piece + 1);
    pc.ys.resize(cells_per_piece + 1);
    const bool branch_incr = incr;  // p0 rises with u exactly on even branches
    for (std::size_t i = 0; i <= cells_per_piece; ++i) {
      double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(cells_per_piece);
      if (i == cells_per_piece) x = b;
      double target = p.value(x);
      double u = detail::invert_p0_branch(target, u_lo, u_hi, branch_incr);
      pc.xs[i] = x;
      pc.ys[i] = detail::t_of_u(u);
      max_residual = std::max(max_residual, std::fabs(p0_eval(pc.ys[i]) - target));
    }
    pc.target.lo = pc.ys.front();
    pc.target.hi = pc.ys.back();
    for (std::size_t i = 0; i + 1 < pc.ys.size(); ++i)
      if (!(pc.ys[i] < pc.ys[i + 1]))
        throw validation_error("tabulated map is not strictly monotone");
    out.push_back(std::move(pc));
  }
  return EmbeddingMap(p, std::move(out), max_residual);
}

struct EmbedIsometry {
  double source_norm;  // ||f|| in the source exponent's space
  double target_norm;  // ||G f|| in the p0 space
};

// G transplants f onto the p0 pieces with the change-of-density factor
//   G(f)[t] = (|p0'(t)| / |p'(T^{-1}(t))|)^(1/p0(t)) f(T^{-1}(t)),
// zero off the image, and both norms are plain Lebesgue-measure norms. The
// factor is the one that makes the substitution t = T(x) reproduce the
// source accumulation exactly; the defect left is discretization only.
inline EmbedIsometry embed_isometry_check(const StepFunction& f, const EmbeddingMap& map,
                                          const SolveConfig& cfg) {
  cfg.validate();
  const auto& pieces = map.pieces();
  for (std::size_t k = 0; k < f.cells(); ++k) {
    if (f.value(k) == 0.0) continue;
    double c = f.partition().point(k), d = f.partition().point(k + 1);
    double covered = 0.0;
    for (const auto& pc : pieces)
      covered += std::max(0.0, std::min(d, pc.src_hi) - std::max(c, pc.src_lo));
    if (d - c - covered > 1e-12)
      throw validation_error("f is supported outside the embedding source pieces");
  }

  const auto& p = map.source();
  double phi_src = 0.0, phi_tgt = 0.0;
  for (const auto& pc : pieces) {
    // tabulation nodes plus any f breakpoints inside the piece
    std::vector<double> grid = pc.xs;
    for (double t : f.partition().points())
      if (t > pc.src_lo + 1e-15 && t < pc.src_hi - 1e-15) grid.push_back(t);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return b - a <= 1e-15; }),
               grid.end());

    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      const double x0 = grid[i], x1 = grid[i + 1];
      const double fv = f(0.5 * (x0 + x1));
      phi_src = detail::cell_update(phi_src, x1 - x0, std::fabs(fv), p.value(0.5 * (x0 + x1)));
      const double y0 = map.map(x0), y1 = map.map(x1);
      if (fv != 0.0) {
        const double th = 0.5 * (y0 + y1);
        const double xt = map.inverse(th);
        const double q0 = p0_eval(th);
        const double dsrc = std::max(std::fabs(p.derivative(xt)), 1e-300);
        const double gv = std::pow(p0_prime(th) / dsrc, 1.0 / q0) * std::fabs(fv);
        phi_tgt = detail::cell_update(phi_tgt, y1 - y0, gv, q0);
      }
    }
  }
  return {phi_src, phi_tgt};
}

}  // namespace varnorm
