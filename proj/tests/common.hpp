#pragma once

#include "swimmer/dynamics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

namespace testing {

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline swimmer::SwimmerState random_state(std::mt19937& rng, double angle = 3.0) {
    std::uniform_real_distribution<double> ang(-angle, angle), pos(-5.0, 5.0);
    return {ang(rng), ang(rng), pos(rng), pos(rng), ang(rng)};
}

inline swimmer::DesignParams random_design(std::mt19937& rng) {
    std::uniform_real_distribution<double> len(0.2, 3.0), drag(0.2, 5.0);
    swimmer::DesignParams p;
    p.L = len(rng);
    p.L2 = len(rng);
    p.drag = {drag(rng), drag(rng)};
    return p;
}

}  // namespace testing
