// Prints the classical, AVT1 and AVT2 bounds for a few information levels,
// with the optimal power and the prior mass it puts near the boundary.

#include <cstdio>

#include "avt/bounds.hpp"

int main() {
  std::printf("%8s %12s %12s %12s %10s %14s\n", "I", "classical", "avt1", "avt2", "m*", "mass(|t|>0.9)");
  for (double fisher : {0.0, 0.5, 1.0, 4.0, 9.0, 25.0, 100.0, 1000.0}) {
    const auto s = avt::bound_suite(fisher);
    const auto b = avt::avt2_bound(fisher);
    double tail = 0.0;
    if (b.prior) {
      const auto& mu = *b.prior;
      tail = 2.0 * avt::integrate_pieces_edge([&](double t, double e) { return mu.at(t, e); },
                                              avt::Interval(0.9, 1.0), {}, std::min(0.0, mu.end_exponent()));
    }
    std::printf("%8g %12.6g %12.6g %12.6g %10.4g %14.4g\n", fisher, s.classical_opt, s.avt1, s.avt2, s.m_star, tail);
  }
}
