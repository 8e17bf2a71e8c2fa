#pragma once

#include "sxt/covariance_model.hpp"

#include <numbers>
#include <optional>
#include <vector>

namespace sxt::test {

inline constexpr double kFourPi = 4.0 * std::numbers::pi;

/// Multipole carrying `share` of the unit pointwise variance.
inline Multipole share(int ell, double s, double beta, std::optional<double> alpha = std::nullopt) {
  Multipole m;
  m.ell = ell;
  m.c0 = s * kFourPi / (2 * ell + 1);
  m.beta = beta;
  m.alpha = alpha;
  return m;
}

inline CovarianceModel model(std::vector<Multipole> m) { return CovarianceModel::create(std::move(m)); }

}  // namespace sxt::test
