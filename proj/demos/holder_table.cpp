// Sharp constant C(β, d), the sharpness factor A and the ratio of upper to
// lower risk across smoothness levels and dimensions.

#include <cstdio>

#include "avt/holder.hpp"

int main() {
  std::printf("%5s %4s %10s %10s %10s %10s\n", "beta", "d", "C", "A", "A_lower", "upper/low");
  for (double beta : {0.5, 1.0, 1.5, 2.0}) {
    for (int d : {1, 2, 5, 20}) {
      avt::HolderProblem p;
      p.beta = beta;
      p.d = d;
      const auto s = avt::sharpness_A(p.a());
      std::printf("%5.2g %4d %10.5g %10.5g %10.5g %10.4g\n", beta, d, avt::minimax_constant(beta, d), s.A_value,
                  s.A_lower_value, 1.0 / s.A_value);
    }
  }
}
