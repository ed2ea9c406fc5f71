#pragma once

#include <cmath>
#include <random>

#include "lowmach/config.hpp"
#include "lowmach/spectral.hpp"

namespace testing {

inline lowmach::Field sample(const lowmach::Grid& g, double (*fn)(double, double)) {
  return lowmach::Field::sample(g, fn);
}

inline lowmach::VectorField taylor_green(const lowmach::Grid& g, double a = 1.0) {
  return lowmach::taylor_green_forcing(g, a);
}

inline lowmach::Field taylor_green_pressure(const lowmach::Grid& g) {
  return lowmach::Field::sample(g, [](double x, double y) { return 0.25 * (std::cos(2 * x) + std::cos(2 * y)); });
}

}  // namespace testing
