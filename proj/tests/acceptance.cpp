#include "nanoforce/validation.hpp"

#include <gtest/gtest.h>

#include <iostream>

using namespace nanoforce::validation;

namespace {

void run(int id) {
  Context ctx;
  ctx.threads = nanoforce::thread_count_from_env();
  const CheckResult r = run_check(id, ctx);
  std::cout << r.line() << std::endl;
  EXPECT_TRUE(r.passed) << r.detail;
}

}  // namespace

TEST(Acceptance, C01_RepresentationEquivalence) { run(1); }
TEST(Acceptance, C02_StaticTermOracle) { run(2); }
TEST(Acceptance, C03_VacuumNull) { run(3); }
TEST(Acceptance, C04_VariantDiscrimination) { run(4); }
TEST(Acceptance, C05_IsotropicFrictionCoefficient) { run(5); }
TEST(Acceptance, C06_FrictionMomentumOracle) { run(6); }
TEST(Acceptance, C07_NarrowLineFriction) { run(7); }
TEST(Acceptance, C08_WickIdentity) { run(8); }
TEST(Acceptance, C09_KeldyshAlgebra) { run(9); }
TEST(Acceptance, C10_NumericsSelfConsistency) { run(10); }
TEST(Acceptance, C11_PhysicalSigns) { run(11); }
