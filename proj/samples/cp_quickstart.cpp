// Casimir-Polder force on an oscillator particle above a Drude metal, both
// representations side by side, then the blackbody drag on the same particle.

#include <cstdio>

#include "nanoforce/casimir_polder.hpp"
#include "nanoforce/friction.hpp"

int main() {
  using namespace nanoforce;

  HalfSpaceScene scene;
  scene.temperature = 1.0;
  scene.wall = PermittivityModel::drude(5.0, 0.1);
  scene.particle = PolarizabilityModel::isotropic(1.0, 1.0, 0.1);

  std::printf("%8s %22s %22s %10s %4s\n", "z_A", "F_z (k_perp)", "F_z (p-form)", "err", "s");
  for (double z : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    scene.distance = z;
    const auto a = cp_force(scene);
    const auto b = cp_force_isotropic(scene);
    std::printf("%8.3f %22.15e %22.15e %10.2e %4zu\n", z, a.force, b.force, a.error_estimate, a.s_terms_used);
  }

  FrictionScene moving;
  moving.particle = scene.particle;
  moving.speed = 1e-3;
  moving.direction = {1.0, 0.0, 0.0};
  std::printf("\n%8s %22s\n", "T", "drag F.v/v^2");
  for (double T : {0.1, 0.3, 1.0, 3.0}) {
    moving.temperature = T;
    std::printf("%8.3f %22.15e\n", T, friction_force(moving).drag);
  }
}
