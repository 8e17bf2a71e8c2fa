#pragma once

#include <cmath>
#include <stdexcept>

namespace sxt {

template <typename Stat>
JackknifeResult jackknife(const Eigen::VectorXd& x, int groups, Stat stat) {
  const Eigen::Index n = x.size();
  if (groups < 2 || n < groups) throw std::invalid_argument("jackknife: need at least two nonempty groups");
  JackknifeResult r;
  r.estimate = stat(x);
  std::vector<double> leave(groups);
  for (int g = 0; g < groups; ++g) {
    const Eigen::Index lo = n * g / groups, hi = n * (g + 1) / groups;
    Eigen::VectorXd rest(n - (hi - lo));
    rest << x.head(lo), x.tail(n - hi);
    leave[g] = stat(rest);
  }
  double m = 0.0;
  for (double v : leave) m += v / groups;
  double ss = 0.0;
  for (double v : leave) ss += (v - m) * (v - m);
  r.se = std::sqrt((groups - 1.0) / groups * ss);
  return r;
}

}  // namespace sxt
