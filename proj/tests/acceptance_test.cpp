// Acceptance suite. Each test is one end-to-end criterion with its tolerance
// pinned in code; the googletest reporter prints one pass/fail line per
// criterion. Instances come from the seeded generator, so every run checks
// the identical corpus.

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "oracles.hpp"
#include "varnorm/duality.hpp"
#include "varnorm/generator.hpp"
#include "varnorm/nakano.hpp"
#include "varnorm/phi_solver.hpp"
#include "varnorm/sequence_space.hpp"
#include "varnorm/verify.hpp"
#include "varnorm/weighted_embedding.hpp"

using namespace varnorm;

namespace {

const SolveConfig kCfg;  // abs_tol 1e-10, ladder base 0.5, 60 steps

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

Exponent const_p(double q, const Partition& part) {
  return validate_exponent(StepFunction::constant(q)).on(part);
}

}  // namespace

// The accumulation norm reduces to the classical L^p norm at constant
// exponent: |norm - (integral |f|^p)^(1/p)| <= 1e-10 over 1000 seeded step
// functions for each p in {1, 1.5, 2, 3, 10}, in under 5 seconds.
TEST(Acceptance, ConstantExponentReduction) {
  Timer timer;
  InstanceGen gen(10001);
  for (double q : {1.0, 1.5, 2.0, 3.0, 10.0}) {
    for (int i = 0; i < 1000; ++i) {
      StepFunction f = gen.step_function();
      double got = norm(f, const_p(q, f.partition()), kCfg);
      double want = oracles::classical_lp_norm(f, q);
      ASSERT_LE(std::fabs(got - want), 1e-10) << "p=" << q << " case " << i;
    }
  }
  EXPECT_LT(timer.seconds(), 5.0);
}

// Holder's inequality with no extra constant on 10^4 random pairs with
// exponents in [1.05, 8], and the norming-witness pairing identity with
// defect at most 1e-8 of scale, in under 60 seconds.
TEST(Acceptance, HolderInequalityAndNormingPairing) {
  Timer timer;
  InstanceGen gen(10002);
  for (int i = 0; i < 10000; ++i) {
    StepFunction f = gen.step_function();
    StepFunction g = gen.step_function();
    Exponent p = gen.exponent(kDualityBand);
    auto pair = conjugate(p);
    auto h = holder_check(f, g, pair, kCfg);
    ASSERT_LE(h.lhs, h.rhs + 1e-9) << "case " << i;

    auto pr = norming_pairing(f, p, kCfg);
    ASSERT_LE(pr.defect, 1e-8 * std::max(1.0, pr.norm_x * pr.norm_Jx)) << "case " << i;
  }
  EXPECT_LT(timer.seconds(), 60.0);
}

// The ODE norm and the psi-Nakano norm are equivalent with constant 2:
// the ratio stays in [0.5 - 1e-9, 2 + 1e-9] on 10^4 instances, and equals
// sqrt(2) within 1e-8 at constant exponent 2.
TEST(Acceptance, NakanoEquivalenceBand) {
  InstanceGen gen(10003);
  for (int i = 0; i < 10000; ++i) {
    StepFunction f = gen.step_function(32, 1.0 / 16.0, true);
    Exponent p = gen.exponent(kGeneralBand);
    double ratio = equivalence_ratio(f, p, kCfg);
    ASSERT_GE(ratio, 0.5 - 1e-9) << "case " << i;
    ASSERT_LE(ratio, 2.0 + 1e-9) << "case " << i;
  }
  InstanceGen gen2(10013);
  for (int i = 0; i < 50; ++i) {
    StepFunction f = gen2.step_function(32, 0.0);
    double ratio = equivalence_ratio(f, const_p(2.0, f.partition()), kCfg);
    ASSERT_NEAR(ratio, 1.4142135623730950488, 1e-8) << "case " << i;
  }
}

// Mixed-norm matrix inequalities: the transpose contraction and the
// disjoint-sum bound hold with slack >= -1e-12 on 10^4 random non-negative
// matrices each, exponents p <= r in [1, 6].
TEST(Acceptance, MixedNormInequalities) {
  RunConfig cfg;
  for (int i = 0; i < 10000; ++i) {
    json in = gen_mixed_case(InstanceGen::case_seed(10004, i));
    NonnegMatrix a = matrix_from_json(in.at("A"));
    double p = in.at("p").get<double>(), r = in.at("r").get<double>();
    auto t = transpose_contraction_check(a, p, r);
    ASSERT_GE(t.rhs - t.lhs, -1e-12) << "transpose, case " << i;
    std::vector<NonnegMatrix> as;
    for (const auto& jm : in.at("As")) as.push_back(matrix_from_json(jm));
    auto d = disjoint_matrix_sum_check(as, p, r);
    ASSERT_GE(d.rhs - d.lhs, -1e-12) << "disjoint sum, case " << i;
  }
}

// Change of density is an isometry: |  ||f||_m - ||Tf||_mu  | <= 1e-9 on
// 10^3 random (f, w, p) instances.
TEST(Acceptance, WeightedIsometry) {
  InstanceGen gen(10005);
  for (int i = 0; i < 1000; ++i) {
    StepFunction f = gen.step_function();
    WeightedSpec spec{gen.exponent({1.0, 6.0}), gen.density()};
    auto r = weight_isometry_check(f, spec, kCfg);
    ASSERT_LE(std::fabs(r.norm_m - r.norm_mu_of_Tf), 1e-9) << "case " << i;
  }
}

// Upper p-estimate and lower q-estimate with constant 1 for disjointly
// supported families of up to 8 functions, slack >= -1e-9, 10^3 families.
TEST(Acceptance, DisjointSupportEstimates) {
  InstanceGen gen(10006);
  for (int i = 0; i < 1000; ++i) {
    auto fs = gen.disjoint_family(1 + i % 8);
    Exponent p = gen.exponent(kGeneralBand);
    auto r = disjoint_estimates_check(fs, p, kCfg);
    ASSERT_GE(r.upper_bound - r.sum_norm, -1e-9) << "case " << i;
    ASSERT_GE(r.sum_norm - r.lower_bound, -1e-9) << "case " << i;
  }
}

// ||f|| <= e sup|f| + 1e-9 on every generated instance, both exponent bands.
TEST(Acceptance, SupNormBound) {
  constexpr double kE = 2.718281828459045235;
  InstanceGen gen(10007);
  for (int i = 0; i < 2000; ++i) {
    StepFunction f = gen.step_function();
    Exponent p = gen.exponent(i % 2 == 0 ? kGeneralBand : kDualityBand);
    double n = norm(f, p, kCfg);
    ASSERT_LE(n, kE * f.sup_abs() + 1e-9) << "case " << i;
  }
}

// The universal-embedding isometry defect for p(t) = 2 + t is at most 1e-4
// at 2^14 tabulation cells and shrinks by at least 4x from 2^12 to 2^14,
// in under 30 seconds.
TEST(Acceptance, UniversalEmbeddingDefect) {
  Timer timer;
  SmoothExponent affine{[](double t) { return 2.0 + t; }, [](double) { return 1.0; },
                        {{0.0, 1.0}}};
  StepFunction one = StepFunction::constant(1.0);
  auto defect_at = [&](std::size_t cells) {
    auto map = build_embedding(affine, cells);
    EXPECT_LE(map.max_residual(), 1e-10);
    auto r = embed_isometry_check(one, map, kCfg);
    return std::fabs(r.source_norm - r.target_norm);
  };
  double coarse = defect_at(1u << 12);
  double fine = defect_at(1u << 14);
  EXPECT_LE(fine, 1e-4);
  EXPECT_GE(coarse / fine, 4.0) << "coarse=" << coarse << " fine=" << fine;
  EXPECT_LT(timer.seconds(), 30.0);
}

// The initial-value ladder is pointwise non-increasing and Cauchy within
// 1e-10 in at most 60 steps on 10^3 random instances.
TEST(Acceptance, StabilizationLadder) {
  InstanceGen gen(10008);
  for (int i = 0; i < 1000; ++i) {
    StepFunction f = gen.step_function();
    auto [fr, prs] = refine_common(f, gen.exponent(kGeneralBand).step());
    Exponent pr(prs);
    std::vector<double> prev;
    double a = 1.0;
    bool cauchy = false;
    for (int k = 1; k <= 60 && !cauchy; ++k) {
      a *= 0.5;
      auto curve = phi_step_exact(fr, pr, a);
      if (!prev.empty()) {
        double gap = 0.0;
        for (std::size_t j = 0; j < prev.size(); ++j) {
          ASSERT_LE(curve.phi()[j], prev[j]) << "case " << i << " step " << k;
          gap = std::max(gap, prev[j] - curve.phi()[j]);
        }
        cauchy = gap < 1e-10;
      }
      prev = curve.phi();
    }
    ASSERT_TRUE(cauchy) << "case " << i;
  }
}
