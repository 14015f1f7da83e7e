#include "varnorm/verify.hpp"

#include <gtest/gtest.h>

using namespace varnorm;

namespace {
RunConfig small_cfg(std::size_t cases = 50, std::uint64_t seed = 1234) {
  RunConfig cfg;
  cfg.cases = cases;
  cfg.seed = seed;
  return cfg;
}
}  // namespace

TEST(VerifySuites, AllSuitesPassAtDefaultTolerance) {
  for (const auto& name : suite_names()) {
    SuiteReport r = run_suite(name, small_cfg());
    EXPECT_TRUE(r.ok()) << name << ": " << r.failures.dump();
    EXPECT_EQ(r.cases, 50u);
  }
}

TEST(VerifySuites, AllAggregatesEverySuite) {
  SuiteReport r = run_suite("all", small_cfg(10));
  EXPECT_EQ(r.cases, 10u * suite_names().size());
  EXPECT_TRUE(r.ok());
}

TEST(VerifySuites, UnknownSuiteRejected) {
  EXPECT_THROW(run_suite("bogus", small_cfg()), validation_error);
}

TEST(VerifySuites, DeterministicForFixedSeed) {
  SuiteReport a = run_suite("holder", small_cfg(25, 77));
  SuiteReport b = run_suite("holder", small_cfg(25, 77));
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  // different seed, different instances
  json ca = gen_case("holder", InstanceGen::case_seed(77, 0));
  json cb = gen_case("holder", InstanceGen::case_seed(78, 0));
  EXPECT_NE(ca.dump(), cb.dump());
}

TEST(VerifySuites, FailuresReplayToTheSameFailures) {
  // an absurdly tight tolerance manufactures real failure records
  RunConfig tight = small_cfg(40, 99);
  tight.tol = 1e-18;
  SuiteReport r = run_suite("nakano-band", tight);
  ASSERT_FALSE(r.ok());

  SuiteReport replayed = replay_failures(r.failures, tight);
  EXPECT_EQ(replayed.cases, r.failures.size());
  ASSERT_EQ(replayed.failures.size(), r.failures.size());
  for (std::size_t i = 0; i < r.failures.size(); ++i)
    EXPECT_EQ(replayed.failures[i].at("details").dump(),
              r.failures[i].at("details").dump());

  // at the real tolerance the same inputs pass again
  SuiteReport ok = replay_failures(r.failures, small_cfg(40, 99));
  EXPECT_TRUE(ok.ok());
}

TEST(VerifySuites, CaseSeedsAreStable) {
  EXPECT_EQ(InstanceGen::case_seed(0, 0), InstanceGen::case_seed(0, 0));
  EXPECT_NE(InstanceGen::case_seed(0, 0), InstanceGen::case_seed(0, 1));
  EXPECT_NE(InstanceGen::case_seed(1, 0), InstanceGen::case_seed(2, 0));
}
