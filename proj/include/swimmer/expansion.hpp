#pragma once

// Small-amplitude displacement expansion: for a small closed stroke the net
// motion is (enclosed area) x [g1, g2] evaluated at the start configuration.

#include "swimmer/dynamics.hpp"
#include "swimmer/stroke.hpp"

namespace swimmer {

struct BracketValue {
    Vec5 vec;
};

struct ExpansionPrediction {
    double c_coeff = 0.0;    // enclosed area of the stroke, rad^2
    double bracket_x = 0.0;  // x-component of [g1, g2] at the aligned state
    double delta_x = 0.0;
};

struct OptimalDesign {
    double L = 0.0;
    double L2 = 0.0;
    double ratio = 0.0;
};

// [g1, g2](z) = Dg2(z) g1(z) - Dg1(z) g2(z) with central-difference Jacobians.
BracketValue lie_bracket_numeric(const DesignParams& params, const SwimmerState& state,
                                 double h = 1e-5);

// x-component of [g1, g2] at beta1 = beta3 = theta = 0:
//   (eta - xi)/xi * L^3 L2 (3L + 2L2) / (2L + L2)^4
double bracket_x_aligned(const DesignParams& params);

// Geometric factor of the octagon (equal to its enclosed area).
double c_coefficient(const OctagonSpec& spec);

ExpansionPrediction predict_displacement(const OctagonSpec& spec, const DesignParams& params);

// Maximiser of the aligned bracket under 2L + L2 = c.
OptimalDesign optimal_design(double c);

}  // namespace swimmer
