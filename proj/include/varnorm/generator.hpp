#pragma once

// Seed-deterministic random instances for the property suites. Partitions
// have 1..32 cells with exponentially distributed widths, function values
// are sign-symmetric and log-uniform in [1e-3, 1e3] with an occasional exact
// zero, and exponent cells are uniform: [1.05, 8] for the duality suites,
// [1, 10] elsewhere.

#include <cstdint>
#include <random>
#include <vector>

#include "varnorm/function_model.hpp"

namespace varnorm {

struct ExponentBand {
  double lo;
  double hi;
};
inline constexpr ExponentBand kDualityBand{1.05, 8.0};
inline constexpr ExponentBand kGeneralBand{1.0, 10.0};

class InstanceGen {
 public:
  explicit InstanceGen(std::uint64_t seed) : rng_(seed) {}

  // splitmix-style per-case seeds so cases are independent and replayable
  static std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::size_t cell_count(std::size_t lo = 1, std::size_t hi = 32) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  Partition partition(std::size_t max_cells = 32) {
    std::size_t m = cell_count(1, max_cells);
    std::vector<double> widths(m);
    std::exponential_distribution<double> ed(1.0);
    double total = 0.0;
    for (auto& w : widths) {
      w = ed(rng_) + 1e-3;
      total += w;
    }
    std::vector<double> pts(m + 1);
    pts[0] = 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < m; ++k) {
      acc += widths[k] / total;
      pts[k + 1] = acc;
    }
    pts[m] = 1.0;
    return Partition(std::move(pts));
  }

  double signed_value(double zero_prob = 1.0 / 16.0) {
    if (uniform(0.0, 1.0) < zero_prob) return 0.0;
    double mag = std::pow(10.0, uniform(-3.0, 3.0));
    return uniform(0.0, 1.0) < 0.5 ? -mag : mag;
  }

  StepFunction step_function(std::size_t max_cells = 32, double zero_prob = 1.0 / 16.0,
                             bool force_nonzero = false) {
    Partition part = partition(max_cells);
    std::vector<double> vals(part.cells());
    for (auto& v : vals) v = signed_value(zero_prob);
    if (force_nonzero) {
      bool any = false;
      for (double v : vals) any = any || v != 0.0;
      if (!any) vals[0] = std::pow(10.0, uniform(-3.0, 3.0));
    }
    return StepFunction(std::move(part), std::move(vals));
  }

  Exponent exponent(ExponentBand band, std::size_t max_cells = 32) {
    Partition part = partition(max_cells);
    std::vector<double> vals(part.cells());
    for (auto& v : vals) v = uniform(band.lo, band.hi);
    return Exponent(StepFunction(std::move(part), std::move(vals)));
  }

  Density density(double lo = 0.1, double hi = 10.0, std::size_t max_cells = 32) {
    Partition part = partition(max_cells);
    std::vector<double> vals(part.cells());
    for (auto& v : vals) v = std::pow(10.0, uniform(std::log10(lo), std::log10(hi)));
    return Density(StepFunction(std::move(part), std::move(vals)));
  }

  // Split one partition's cells among n functions with disjoint supports.
  std::vector<StepFunction> disjoint_family(std::size_t n, std::size_t max_cells = 32) {
    Partition part = partition(std::max(n, max_cells));
    std::vector<std::vector<double>> vals(n, std::vector<double>(part.cells(), 0.0));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t k = 0; k < part.cells(); ++k)
      vals[pick(rng_)][k] = signed_value(0.0);
    std::vector<StepFunction> out;
    out.reserve(n);
    for (auto& v : vals) out.emplace_back(part, std::move(v));
    return out;
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  std::mt19937_64& rng() noexcept { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace varnorm
