#pragma once

#include <cstdint>
#include <vector>

#include "sdcaf/env.hpp"

namespace sdcaf {

// Prefix sums of the gaps of the played arms; the final value is the
// gap-weighted pull-count regret sum_i gap_i * T_i(end).
inline std::vector<double> compute_pseudo_regret(const std::vector<int>& actions,
                                                 const Instance& inst) {
  const auto gaps = inst.gaps();
  std::vector<double> out;
  out.reserve(actions.size());
  double acc = 0.0;
  for (int a : actions) {
    acc += gaps[static_cast<std::size_t>(a)];
    out.push_back(acc);
  }
  return out;
}

}  // namespace sdcaf
