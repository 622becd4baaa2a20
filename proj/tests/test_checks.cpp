#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "attkit/checks.hpp"

using namespace attkit;

namespace {
void expect_all(const CheckList& list) {
  for (const CheckResult& c : list) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.passed);
  }
}
}  // namespace

TEST_CASE("identity suite (quick)") {
  CheckOptions opt;
  opt.quick = true;
  expect_all(run_identity_checks(opt));
}

TEST_CASE("gradient suite (quick)") {
  CheckOptions opt;
  opt.quick = true;
  expect_all(run_gradient_checks(opt));
}

TEST_CASE("warp bound suite (quick)") {
  CheckOptions opt;
  opt.quick = true;
  expect_all(run_warp_bound_checks(opt));
}

TEST_CASE("synergy suite (quick)") {
  CheckOptions opt;
  opt.quick = true;
  expect_all(run_synergy_checks(opt));
}

TEST_CASE("explicit oracle suite (quick)") {
  CheckOptions opt;
  opt.quick = true;
  expect_all(run_explicit_oracle_checks(opt));
}

TEST_CASE("projection suite (quick)") {
  CheckOptions opt;
  opt.quick = true;
  expect_all(run_projection_checks(opt));
}

TEST_CASE("executor suite (quick)") {
  CheckOptions opt;
  opt.quick = true;
  expect_all(run_executor_checks(opt));
}
