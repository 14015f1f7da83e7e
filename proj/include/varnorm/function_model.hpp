#pragma once

// Piecewise-constant representations of functions, exponents and densities
// on the unit interval. Everything downstream (norm solver, duality checks,
// weighted spaces) works on these value types; general evaluators enter only
// through midpoint sampling.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "varnorm/errors.hpp"

namespace varnorm {

// Breakpoints closer than this are treated as the same point when merging
// partitions. Callers must not rely on distinct breakpoints this close.
inline constexpr double kBreakpointMergeTol = 1e-15;

class Partition {
 public:
  explicit Partition(std::vector<double> breakpoints) : pts_(std::move(breakpoints)) {
    if (pts_.size() < 2) throw validation_error("partition needs at least one cell");
    if (pts_.front() != 0.0) throw validation_error("partition must start at 0");
    if (pts_.back() != 1.0) throw validation_error("partition must end at 1");
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
      if (!std::isfinite(pts_[i])) throw validation_error("partition breakpoints must be finite");
      if (!(pts_[i] < pts_[i + 1]))
        throw validation_error("partition breakpoints must be strictly increasing");
    }
  }

  static Partition uniform(std::size_t n_cells) {
    if (n_cells == 0) throw validation_error("partition needs at least one cell");
    std::vector<double> pts(n_cells + 1);
    for (std::size_t i = 0; i <= n_cells; ++i)
      pts[i] = static_cast<double>(i) / static_cast<double>(n_cells);
    pts.front() = 0.0;
    pts.back() = 1.0;
    return Partition(std::move(pts));
  }

  std::size_t cells() const noexcept { return pts_.size() - 1; }
  const std::vector<double>& points() const noexcept { return pts_; }
  double point(std::size_t i) const { return pts_[i]; }
  double width(std::size_t k) const { return pts_[k + 1] - pts_[k]; }
  double midpoint(std::size_t k) const { return 0.5 * (pts_[k] + pts_[k + 1]); }

  // Cells are [t_k, t_{k+1}); the last cell also contains t = 1.
  std::size_t cell_of(double t) const {
    if (!(t >= 0.0) || !(t <= 1.0)) throw validation_error("evaluation point outside [0,1]");
    auto it = std::upper_bound(pts_.begin(), pts_.end(), t);
    std::size_t idx = static_cast<std::size_t>(it - pts_.begin());
    if (idx == 0) idx = 1;
    if (idx > cells()) idx = cells();
    return idx - 1;
  }

  bool operator==(const Partition& other) const noexcept { return pts_ == other.pts_; }

 private:
  std::vector<double> pts_;
};

// Merge breakpoint sets, coalescing near-duplicates.
inline Partition merge_partitions(const Partition& a, const Partition& b) {
  std::vector<double> merged;
  merged.reserve(a.points().size() + b.points().size());
  std::merge(a.points().begin(), a.points().end(), b.points().begin(), b.points().end(),
             std::back_inserter(merged));
  std::vector<double> out;
  out.reserve(merged.size());
  out.push_back(0.0);
  for (double t : merged)
    if (t - out.back() > kBreakpointMergeTol) out.push_back(t);
  out.back() = 1.0;
  return Partition(std::move(out));
}

class StepFunction {
 public:
  StepFunction(Partition partition, std::vector<double> values)
      : part_(std::move(partition)), vals_(std::move(values)) {
    if (vals_.size() != part_.cells())
      throw validation_error("step function needs exactly one value per cell");
    for (std::size_t k = 0; k < vals_.size(); ++k)
      if (!std::isfinite(vals_[k])) {
        std::ostringstream os;
        os << "step function value not finite at cell " << k;
        throw validation_error(os.str());
      }
  }

  static StepFunction constant(double c) {
    return StepFunction(Partition({0.0, 1.0}), std::vector<double>{c});
  }

  const Partition& partition() const noexcept { return part_; }
  const std::vector<double>& values() const noexcept { return vals_; }
  double value(std::size_t k) const { return vals_[k]; }
  std::size_t cells() const noexcept { return vals_.size(); }

  double operator()(double t) const { return vals_[part_.cell_of(t)]; }

  // Re-express on a refining partition; values are unchanged pointwise.
  StepFunction on(const Partition& finer) const {
    if (finer == part_) return *this;
    std::vector<double> vals(finer.cells());
    for (std::size_t k = 0; k < finer.cells(); ++k)
      vals[k] = vals_[part_.cell_of(finer.midpoint(k))];
    return StepFunction(finer, std::move(vals));
  }

  double sup_abs() const {
    double m = 0.0;
    for (double v : vals_) m = std::max(m, std::fabs(v));
    return m;
  }

  bool identically_zero() const {
    return std::all_of(vals_.begin(), vals_.end(), [](double v) { return v == 0.0; });
  }

  bool operator==(const StepFunction& other) const noexcept {
    return part_ == other.part_ && vals_ == other.vals_;
  }

 private:
  Partition part_;
  std::vector<double> vals_;
};

inline std::pair<StepFunction, StepFunction> refine_common(const StepFunction& a,
                                                           const StepFunction& b) {
  if (a.partition() == b.partition()) return {a, b};
  Partition merged = merge_partitions(a.partition(), b.partition());
  return {a.on(merged), b.on(merged)};
}

// Midpoint sampling of an arbitrary evaluator to a uniform step function.
// Exact for step data on refining grids, second order for smooth data.
inline StepFunction sample_to_step(const std::function<double(double)>& h, std::size_t n_cells) {
  if (n_cells == 0) throw validation_error("sample_to_step needs at least one cell");
  Partition part = Partition::uniform(n_cells);
  std::vector<double> vals(n_cells);
  for (std::size_t k = 0; k < n_cells; ++k) {
    double t = part.midpoint(k);
    double v = h(t);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "evaluator returned a non-finite value at t=" << t;
      throw validation_error(os.str());
    }
    vals[k] = v;
  }
  return StepFunction(std::move(part), std::move(vals));
}

// An exponent function p >= 1 with cached essential bounds.
class Exponent {
 public:
  explicit Exponent(StepFunction body) : body_(std::move(body)) {
    ess_inf_ = body_.value(0);
    ess_sup_ = body_.value(0);
    for (std::size_t k = 0; k < body_.cells(); ++k) {
      double v = body_.value(k);
      if (v < 1.0) {
        std::ostringstream os;
        os << "exponent below 1 at cell " << k;
        throw validation_error(os.str());
      }
      ess_inf_ = std::min(ess_inf_, v);
      ess_sup_ = std::max(ess_sup_, v);
    }
  }

  const StepFunction& step() const noexcept { return body_; }
  const Partition& partition() const noexcept { return body_.partition(); }
  double value(std::size_t k) const { return body_.value(k); }
  double operator()(double t) const { return body_(t); }
  double ess_inf() const noexcept { return ess_inf_; }
  double ess_sup() const noexcept { return ess_sup_; }

  Exponent on(const Partition& finer) const { return Exponent(body_.on(finer)); }

 private:
  StepFunction body_;
  double ess_inf_;
  double ess_sup_;
};

inline Exponent validate_exponent(const StepFunction& s) { return Exponent(s); }

// A strictly positive weight (Radon-Nikodym derivative of a measure
// equivalent to Lebesgue measure).
class Density {
 public:
  explicit Density(StepFunction body) : body_(std::move(body)) {
    for (std::size_t k = 0; k < body_.cells(); ++k)
      if (!(body_.value(k) > 0.0)) {
        std::ostringstream os;
        os << "density not strictly positive at cell " << k;
        throw validation_error(os.str());
      }
  }

  const StepFunction& step() const noexcept { return body_; }
  const Partition& partition() const noexcept { return body_.partition(); }
  double value(std::size_t k) const { return body_.value(k); }
  double operator()(double t) const { return body_(t); }

  Density on(const Partition& finer) const { return Density(body_.on(finer)); }

 private:
  StepFunction body_;
};

inline Density validate_density(const StepFunction& s) { return Density(s); }

}  // namespace varnorm
