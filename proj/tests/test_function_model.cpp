#include "varnorm/function_model.hpp"

#include <gtest/gtest.h>

#include <random>

#include "varnorm/generator.hpp"
#include "varnorm/io.hpp"

using namespace varnorm;

TEST(Partition, ValidatesBreakpoints) {
  EXPECT_NO_THROW(Partition({0.0, 0.5, 1.0}));
  EXPECT_THROW(Partition({0.0}), validation_error);
  EXPECT_THROW(Partition({0.1, 1.0}), validation_error);
  EXPECT_THROW(Partition({0.0, 0.9}), validation_error);
  EXPECT_THROW(Partition({0.0, 0.5, 0.5, 1.0}), validation_error);
  EXPECT_THROW(Partition({0.0, 0.7, 0.3, 1.0}), validation_error);
}

TEST(Partition, CellLookupIsLeftClosedRightOpen) {
  Partition part({0.0, 0.5, 1.0});
  EXPECT_EQ(part.cell_of(0.0), 0u);
  EXPECT_EQ(part.cell_of(0.49), 0u);
  EXPECT_EQ(part.cell_of(0.5), 1u);
  EXPECT_EQ(part.cell_of(1.0), 1u);  // last cell closed
  EXPECT_THROW(part.cell_of(-0.1), validation_error);
  EXPECT_THROW(part.cell_of(1.1), validation_error);
}

TEST(RefineCommon, ReplicatesValuesOntoMergedPartition) {
  StepFunction a = StepFunction::constant(3.0);
  StepFunction b(Partition({0.0, 0.5, 1.0}), {1.0, 2.0});
  auto [ar, br] = refine_common(a, b);
  EXPECT_EQ(ar.partition(), br.partition());
  EXPECT_EQ(ar.values(), (std::vector<double>{3.0, 3.0}));
  EXPECT_EQ(br.values(), (std::vector<double>{1.0, 2.0}));
}

TEST(RefineCommon, IdentityOnEqualPartitions) {
  StepFunction a(Partition({0.0, 0.25, 1.0}), {1.0, -1.0});
  StepFunction b(Partition({0.0, 0.25, 1.0}), {5.0, 7.0});
  auto [ar, br] = refine_common(a, b);
  EXPECT_EQ(ar, a);
  EXPECT_EQ(br, b);
}

TEST(RefineCommon, MergesBreakpointSets) {
  StepFunction a(Partition({0.0, 1.0 / 3.0, 1.0}), {1.0, 2.0});
  StepFunction b(Partition({0.0, 0.5, 1.0}), {3.0, 4.0});
  auto [ar, br] = refine_common(a, b);
  std::vector<double> expected{0.0, 1.0 / 3.0, 0.5, 1.0};
  EXPECT_EQ(ar.partition().points(), expected);
  EXPECT_EQ(ar.values(), (std::vector<double>{1.0, 2.0, 2.0}));
  EXPECT_EQ(br.values(), (std::vector<double>{3.0, 3.0, 4.0}));
}

TEST(RefineCommon, PreservesPointwiseValues) {
  InstanceGen gen(2024);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    StepFunction a = gen.step_function();
    StepFunction b = gen.step_function();
    auto [ar, br] = refine_common(a, b);
    for (int i = 0; i < 50; ++i) {
      double t = ud(rng);
      ASSERT_EQ(ar(t), a(t));
      ASSERT_EQ(br(t), b(t));
    }
  }
}

TEST(SampleToStep, ConstantEvaluator) {
  StepFunction s = sample_to_step([](double) { return 4.25; }, 7);
  for (double v : s.values()) EXPECT_EQ(v, 4.25);
}

TEST(SampleToStep, MidpointSampling) {
  StepFunction s = sample_to_step([](double t) { return t; }, 2);
  EXPECT_EQ(s.values(), (std::vector<double>{0.25, 0.75}));
  StepFunction s4 = sample_to_step([](double t) { return 2.0 + t; }, 4);
  EXPECT_EQ(s4.values(), (std::vector<double>{2.125, 2.375, 2.625, 2.875}));
}

TEST(SampleToStep, ReproducesStepDataOnRefiningGrid) {
  StepFunction s(Partition({0.0, 0.25, 1.0}), {-2.0, 5.0});
  StepFunction fine = sample_to_step([&](double t) { return s(t); }, 64);
  for (std::size_t k = 0; k < fine.cells(); ++k)
    ASSERT_EQ(fine.value(k), s(fine.partition().midpoint(k)));
}

TEST(SampleToStep, RejectsNonFiniteSamples) {
  try {
    sample_to_step([](double t) { return t < 0.6 ? 1.0 : std::nan(""); }, 4);
    FAIL() << "expected rejection";
  } catch (const validation_error& e) {
    EXPECT_NE(std::string(e.what()).find("t="), std::string::npos);
  }
}

TEST(ValidateExponent, CachesEssentialBounds) {
  Exponent c2 = validate_exponent(StepFunction::constant(2.0));
  EXPECT_EQ(c2.ess_inf(), 2.0);
  EXPECT_EQ(c2.ess_sup(), 2.0);
  Exponent mixed = validate_exponent(StepFunction(Partition({0.0, 0.5, 1.0}), {1.5, 3.0}));
  EXPECT_EQ(mixed.ess_inf(), 1.5);
  EXPECT_EQ(mixed.ess_sup(), 3.0);
}

TEST(ValidateExponent, NamesViolatingCell) {
  try {
    validate_exponent(StepFunction(Partition({0.0, 0.5, 1.0}), {0.9, 2.0}));
    FAIL() << "expected rejection";
  } catch (const validation_error& e) {
    EXPECT_STREQ(e.what(), "exponent below 1 at cell 0");
  }
}

TEST(ValidateExponent, BoundsHoldCellwise) {
  InstanceGen gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    Exponent p = gen.exponent(kGeneralBand);
    for (std::size_t k = 0; k < p.step().cells(); ++k) {
      ASSERT_LE(p.ess_inf(), p.value(k));
      ASSERT_LE(p.value(k), p.ess_sup());
    }
  }
}

TEST(ValidateDensity, RejectsNonPositive) {
  EXPECT_NO_THROW(validate_density(StepFunction::constant(0.5)));
  EXPECT_THROW(validate_density(StepFunction::constant(0.0)), validation_error);
  EXPECT_THROW(validate_density(StepFunction(Partition({0.0, 0.5, 1.0}), {1.0, -2.0})),
               validation_error);
}

TEST(Json, StepFunctionRoundTrip) {
  InstanceGen gen(31337);
  for (int trial = 0; trial < 30; ++trial) {
    StepFunction s = gen.step_function();
    StepFunction back = step_from_json(json::parse(to_json(s).dump()));
    ASSERT_EQ(back, s);
  }
}

TEST(Json, RejectsMalformedInput) {
  EXPECT_THROW(step_from_json(json::parse("[1,2]")), validation_error);
  EXPECT_THROW(step_from_json(json::parse(R"({"partition": [0,1]})")), validation_error);
  EXPECT_THROW(step_from_json(json::parse(R"({"partition": [0,1], "values": ["x"]})")),
               validation_error);
}
