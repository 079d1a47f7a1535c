#include <cstdio>

#include "collapse/equilibria.hpp"

int main() {
  const auto bf = collapse::boundary_fixed_points(0.05, 0.525);
  std::printf("phi_minus=%.17g\n", bf.phi_minus.value_or(-1.0));
  return bf.phi_minus && *bf.phi_minus == 0.125 ? 0 : 1;
}
