#include "common.hpp"

#include "swimmer/error.hpp"
#include "swimmer/expansion.hpp"
#include "swimmer/optim.hpp"
#include "swimmer/simulate.hpp"

#include <numbers>

using namespace swimmer;
using testing::rel_diff;

namespace {

constexpr double pi = std::numbers::pi;

// Bracket with the roles of the two fields exchanged, built from the same
// central differences as the library routine.
Vec5 swapped_bracket(const DesignParams& p, const Vec5& z, double h) {
    Mat5 J1, J2;
    for (int i = 0; i < 5; ++i) {
        Vec5 zp = z, zm = z;
        zp[i] += h;
        zm[i] -= h;
        const Mat52 d = (field_matrix(p, zp) - field_matrix(p, zm)) / (2 * h);
        J1.col(i) = d.col(0);
        J2.col(i) = d.col(1);
    }
    const Mat52 G = field_matrix(p, z);
    return J1 * G.col(1) - J2 * G.col(0);
}

double design_factor(double L, double c) {
    const double L2 = c - 2 * L;
    return L * L * L * L2 * (3 * L + 2 * L2) / std::pow(2 * L + L2, 4);
}

}  // namespace

TEST_SUITE("expansion") {

TEST_CASE("numeric bracket at the aligned state") {
    const BracketValue v = lie_bracket_numeric(DesignParams{}, {}, 1e-5);
    CHECK(v.vec[2] == doctest::Approx(7.0 / 128.0).epsilon(1e-8));
    CHECK(std::abs(v.vec[0]) < 1e-7);
    CHECK(std::abs(v.vec[1]) < 1e-7);
    CHECK(std::abs(v.vec[3]) < 1e-7);
    CHECK(std::abs(v.vec[4]) < 1e-7);

    DesignParams iso;
    iso.drag = {1.5, 1.5};
    CHECK(std::abs(lie_bracket_numeric(iso, {}).vec[2]) < 1e-9);
    CHECK(bracket_x_aligned(iso) == 0.0);

    CHECK_THROWS_AS(lie_bracket_numeric(DesignParams{}, {}, 0.0), Error);
}

TEST_CASE("bracket is antisymmetric") {
    std::mt19937 rng(23);
    for (int i = 0; i < 10; ++i) {
        const DesignParams p = testing::random_design(rng);
        const SwimmerState z = testing::random_state(rng, 1.0);
        const Vec5 b = lie_bracket_numeric(p, z, 1e-5).vec;
        CHECK((b + swapped_bracket(p, z.vec(), 1e-5)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("closed-form aligned bracket") {
    CHECK(bracket_x_aligned(DesignParams{}) == doctest::Approx(0.0546875).epsilon(1e-15));

    DesignParams p;
    p.L = 1.470178;
    p.L2 = 1.059644;
    CHECK(rel_diff(bracket_x_aligned(p), 0.0858808) < 1e-4);

    const OptimalDesign d = optimal_design(4.0);
    p.L = d.L;
    p.L2 = d.L2;
    const double expected = std::pow(d.L, 3) * d.L2 * (3 * d.L + 2 * d.L2) / 256.0;
    CHECK(std::abs(bracket_x_aligned(p) - expected) < 1e-12);

    p.L2 = 0.0;
    CHECK(bracket_x_aligned(p) == 0.0);
}

TEST_CASE("numeric bracket agrees with the closed form for random designs") {
    std::mt19937 rng(29);
    for (int i = 0; i < 20; ++i) {
        const DesignParams p = testing::random_design(rng);
        const double exact = bracket_x_aligned(p);
        if (std::abs(exact) < 1e-6) continue;
        const double num = lie_bracket_numeric(p, {}, 1e-5).vec[2];
        CHECK(rel_diff(num, exact) < 1e-6);
    }
}

TEST_CASE("finite-difference bracket converges at second order") {
    DesignParams p;
    p.L = 0.8;
    p.L2 = 1.7;
    p.drag = {1.0, 3.0};
    // away from the aligned state the third derivatives are not small
    const SwimmerState z{0.7, -0.9, 0.0, 0.0, 0.4};
    const Vec5 ref = lie_bracket_numeric(p, z, 1e-4).vec;
    const Vec5 b1 = lie_bracket_numeric(p, z, 0.02).vec;
    const Vec5 b2 = lie_bracket_numeric(p, z, 0.04).vec;
    const Vec5 b05 = lie_bracket_numeric(p, z, 0.01).vec;
    const double err1 = (b1 - ref).norm();
    const double err2 = (b2 - ref).norm();
    const double err05 = (b05 - ref).norm();
    CHECK(err2 / err1 == doctest::Approx(4.0).epsilon(0.05));
    CHECK(err1 / err05 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("C coefficient equals the enclosed area") {
    CHECK(c_coefficient({0.2, 0.0, 0.3, 0.0}) == doctest::Approx(0.06));
    CHECK(c_coefficient({0.0, 0.2, 0.0, 0.3}) == doctest::Approx(0.06));
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const OctagonSpec s{U(rng), U(rng), U(rng), U(rng)};
        CHECK(c_coefficient(s) == doctest::Approx(std::abs(polygon_area(octagon_polygon(s)))).epsilon(1e-13));
    }
}

TEST_CASE("leading-order displacement predictions") {
    const double a = pi / 20;
    const OptimalDesign d = optimal_design(4.0);
    DesignParams p;
    p.L = d.L;
    p.L2 = d.L2;

    const OctagonSpec diamond = family_from_bounds(a, pi / 5, 1.0);
    const ExpansionPrediction pd = predict_displacement(diamond, p);
    CHECK(pd.c_coeff == doctest::Approx(0.049348).epsilon(1e-5));
    CHECK(pd.delta_x == doctest::Approx(4.238e-3).epsilon(1e-3));
    CHECK(pd.delta_x == pd.c_coeff * pd.bracket_x);

    const OctagonSpec square = family_from_bounds(a, 2 * pi / 5, 1.0);
    const ExpansionPrediction ps = predict_displacement(square, p);
    CHECK(ps.c_coeff == doctest::Approx(pi * pi / 100).epsilon(1e-12));
    CHECK(ps.delta_x == doctest::Approx(8.476e-3).epsilon(1e-3));

    p.drag = {2.0, 2.0};
    CHECK(predict_displacement(square, p).delta_x == 0.0);
}

TEST_CASE("simulated over predicted displacement tends to one") {
    const OptimalDesign d = optimal_design(4.0);
    DesignParams p;
    p.L = d.L;
    p.L2 = d.L2;
    const double a = pi / 20;
    const OctagonSpec base = family_from_bounds(a, 0.75, 1.0);
    double prev = 0.0;
    for (double lambda : {1.0, 0.5, 0.25}) {
        const OctagonSpec s{lambda * base.a1, lambda * base.a2, lambda * base.a3, lambda * base.a4};
        const double sim = stroke_displacement(p, octagon_polygon(s), 1.0, 0.75 * lambda, 1000).dx;
        const double dev = std::abs(sim / predict_displacement(s, p).delta_x - 1.0);
        if (lambda < 1.0) CHECK(dev <= prev / 2);
        prev = dev;
    }
    CHECK(prev < 1e-2);
}

TEST_CASE("optimal design") {
    const OptimalDesign d = optimal_design(4.0);
    CHECK(d.L == doctest::Approx(1.470178).epsilon(1e-6));
    CHECK(d.L2 == doctest::Approx(1.059644).epsilon(1e-6));
    CHECK(std::abs(d.ratio - d.L2 / d.L) < 1e-14);
    CHECK(d.ratio == doctest::Approx(0.720759).epsilon(1e-6));
    for (double c : {0.5, 1.0, 7.0}) {
        const OptimalDesign e = optimal_design(c);
        CHECK(std::abs(e.ratio - d.ratio) < 1e-14);
        CHECK(std::abs(e.L2 / e.L - d.ratio) < 1e-13);
        // golden-section oracle on L in (0, c/2)
        const double L = golden_section_max([&](double x) { return design_factor(x, c); }, 1e-9 * c,
                                            c / 2 * (1 - 1e-9), 1e-12).x;
        CHECK(std::abs((c - 2 * L) / L - e.ratio) < 1e-6);
    }
    // invariant under joint drag scaling: the anisotropy factor is a constant
    DesignParams p;
    p.L = d.L;
    p.L2 = d.L2;
    const double base = bracket_x_aligned(p);
    p.drag = {3.0, 6.0};
    CHECK(bracket_x_aligned(p) == doctest::Approx(base).epsilon(1e-14));

    CHECK_THROWS_AS(optimal_design(0.0), Error);
}

}  // TEST_SUITE
