#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "leobf/validate.hpp"

using namespace leobf;

TEST_CASE("quick validation suite is green") {
  for (const auto& r : run_validation(false)) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.pass);
  }
}

TEST_CASE("full validation suite is green") {
  for (const auto& r : run_validation(true)) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.pass);
  }
}

TEST_CASE("rho_g = 0 is caught by the positive-definiteness check") {
  CHECK(q_matrix_positive_definite_check(1.0));
  CHECK_FALSE(q_matrix_positive_definite_check(0.0));
}
