#include "swimmer/expansion.hpp"

#include "swimmer/error.hpp"

#include <cmath>

namespace swimmer {

BracketValue lie_bracket_numeric(const DesignParams& params, const SwimmerState& state, double h) {
    if (!(h > 0.0)) fail_validation("finite-difference step must be positive");
    const Vec5 z = state.vec();
    Mat5 J1;
    Mat5 J2;
    for (int i = 0; i < 5; ++i) {
        Vec5 zp = z;
        Vec5 zm = z;
        zp[i] += h;
        zm[i] -= h;
        const Mat52 d = (field_matrix(params, zp) - field_matrix(params, zm)) / (2.0 * h);
        J1.col(i) = d.col(0);
        J2.col(i) = d.col(1);
    }
    const Mat52 G = field_matrix(params, z);
    return {J2 * G.col(0) - J1 * G.col(1)};
}

double bracket_x_aligned(const DesignParams& params) {
    const double L = params.L;
    const double L2 = params.L2;
    const double c = 2.0 * L + L2;
    const double anisotropy = (params.drag.eta - params.drag.xi) / params.drag.xi;
    return anisotropy * L * L * L * L2 * (3.0 * L + 2.0 * L2) / (c * c * c * c);
}

double c_coefficient(const OctagonSpec& spec) {
    const double h = std::sqrt(2.0) / 2.0;
    const double a1 = spec.a1, a2 = spec.a2, a3 = spec.a3, a4 = spec.a4;
    return a1 * a2 * h + a1 * a3 + a2 * a3 * h + a1 * a4 * h + a2 * a4 + a3 * a4 * h;
}

ExpansionPrediction predict_displacement(const OctagonSpec& spec, const DesignParams& params) {
    ExpansionPrediction p;
    p.c_coeff = c_coefficient(spec);
    p.bracket_x = bracket_x_aligned(params);
    p.delta_x = p.c_coeff * p.bracket_x;
    return p;
}

OptimalDesign optimal_design(double c) {
    if (!(c > 0.0)) fail_validation("total length must be positive");
    const double s = std::sqrt(2.0 / 5.0);
    OptimalDesign d;
    d.L = c * (1.0 - s);
    d.L2 = c * (2.0 * s - 1.0);
    d.ratio = (std::sqrt(10.0) - 1.0) / 3.0;
    return d;
}

}  // namespace swimmer
