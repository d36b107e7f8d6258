// Sweep of the one-dimensional overlapping decomposition: analytic and
// computed angle, Richardson contraction and CG iteration counts for a few
// overlaps and mesh sizes. Prints CSV to stdout.

#include <iostream>

#include "pangles/pangles.hpp"

int main() {
  using namespace pangles;
  const std::pair<double, double> overlaps[] = {{0.6, 0.4}, {0.55, 0.45}, {0.52, 0.48}, {0.9, 0.1}};
  bool header = true;
  for (const auto& [alpha, beta] : overlaps)
    for (int n : {50, 100, 200}) {
      const DdmSpaces s = assemble(uniform_config(alpha, beta, n));
      std::string csv = ddm_summary_csv(summarize(s));
      if (!header) csv.erase(0, csv.find('\n') + 1);
      header = false;
      std::cout << csv;
    }
  return 0;
}
