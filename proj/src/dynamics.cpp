#include "swimmer/dynamics.hpp"

#include "swimmer/error.hpp"

#include <unsupported/Eigen/AutoDiff>

#include <cmath>
#include <sstream>

namespace swimmer {

void DragModel::validate() const {
    if (!(xi > 0.0) || !std::isfinite(xi)) fail_validation("drag.xi must be positive and finite");
    if (!(eta > 0.0) || !std::isfinite(eta)) fail_validation("drag.eta must be positive and finite");
}

void DesignParams::validate() const {
    if (!(L > 0.0) || !std::isfinite(L)) fail_validation("L must be positive and finite");
    if (!(L2 > 0.0) || !std::isfinite(L2)) fail_validation("L2 must be positive and finite");
    drag.validate();
}

DesignParams DesignParams::from_ratio(double ratio, double c, DragModel drag) {
    if (!(ratio > 0.0) || !(c > 0.0)) fail_validation("ratio and total length must be positive");
    DesignParams p;
    p.L = c / (2.0 + ratio);
    p.L2 = c - 2.0 * p.L;
    p.drag = drag;
    return p;
}

namespace {

// Minimal 2-vector over an arbitrary scalar; AutoDiffScalar does not mix well
// with Eigen fixed-size expressions held in `auto`.
template <typename S>
struct P2 {
    S x;
    S y;
};

template <typename S>
P2<S> operator+(const P2<S>& a, const P2<S>& b) { return {a.x + b.x, a.y + b.y}; }
template <typename S>
P2<S> operator-(const P2<S>& a, const P2<S>& b) { return {a.x - b.x, a.y - b.y}; }
template <typename S>
P2<S> operator*(const S& k, const P2<S>& a) { return {k * a.x, k * a.y}; }
template <typename S>
S dot(const P2<S>& a, const P2<S>& b) { return a.x * b.x + a.y * b.y; }
template <typename S>
S cross(const P2<S>& a, const P2<S>& b) { return a.x * b.y - a.y * b.x; }

template <typename S>
struct Link {
    P2<S> par;
    P2<S> perp;
    S length;
    P2<S> r0;  // position of s = 0 relative to the centre point
    P2<S> t;   // dr/ds
};

// Resistance (force, torque) of one link whose velocity is v0 + s w.
template <typename S>
void add_link(const Link<S>& k, double xi, double eta, const P2<S>& v0, const P2<S>& w,
              S& fx, S& fy, S& tz) {
    auto resist = [&](const P2<S>& v) {
        S vp = dot(v, k.par);
        S vn = dot(v, k.perp);
        S cp = xi * vp;
        S cn = eta * vn;
        return P2<S>{cp * k.par.x + cn * k.perp.x, cp * k.par.y + cn * k.perp.y};
    };
    const P2<S> rv0 = resist(v0);
    const P2<S> rw = resist(w);
    const S l = k.length;
    const S l2 = l * l / 2.0;
    const S l3 = l * l * l / 3.0;
    fx += rv0.x * l + rw.x * l2;
    fy += rv0.y * l + rw.y * l2;
    tz += cross(k.r0, rv0) * l + (cross(k.r0, rw) + cross(k.t, rv0)) * l2 + cross(k.t, rw) * l3;
}

// Columns: resistance to unit (xdot, ydot, thetadot, beta1dot, beta3dot).
template <typename S>
Eigen::Matrix<S, 3, 5> resistance_columns(const S& L, const S& L2, double xi, double eta,
                                          const S& b1, const S& b3, const S& th) {
    using std::cos;
    using std::sin;
    const S a1 = th - b1;
    const S a3 = th - b3;
    const P2<S> e1{cos(a1), sin(a1)};
    const P2<S> e2{cos(th), sin(th)};
    const P2<S> e3{cos(a3), sin(a3)};
    const P2<S> n1{-e1.y, e1.x};
    const P2<S> n2{-e2.y, e2.x};
    const P2<S> n3{-e3.y, e3.x};
    const S half = L2 / 2.0;
    const S zero(0.0);

    const Link<S> link1{e1, n1, L, S(-half) * e2, P2<S>{-e1.x, -e1.y}};
    const Link<S> link2{e2, n2, L2, S(-half) * e2, e2};
    const Link<S> link3{e3, n3, L, half * e2, e3};

    Eigen::Matrix<S, 3, 5> M;
    for (int j = 0; j < 5; ++j) {
        const S xd(j == 0 ? 1.0 : 0.0);
        const S yd(j == 1 ? 1.0 : 0.0);
        const S thd(j == 2 ? 1.0 : 0.0);
        const S b1d(j == 3 ? 1.0 : 0.0);
        const S b3d(j == 4 ? 1.0 : 0.0);
        const P2<S> xdot{xd, yd};
        const S lever = half * thd;

        S fx = zero, fy = zero, tz = zero;
        add_link(link1, xi, eta, xdot - lever * n2, S(b1d - thd) * n1, fx, fy, tz);
        add_link(link2, xi, eta, xdot - lever * n2, thd * n2, fx, fy, tz);
        add_link(link3, xi, eta, xdot + lever * n2, S(thd - b3d) * n3, fx, fy, tz);
        M(0, j) = fx;
        M(1, j) = fy;
        M(2, j) = tz;
    }
    return M;
}

Eigen::LDLT<Mat3> factor(const Mat3& A) {
    Eigen::LDLT<Mat3> ldlt(A);
    const auto d = ldlt.vectorD();
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || !d.allFinite() ||
        d.minCoeff() <= 1e-14 * d.cwiseAbs().maxCoeff()) {
        std::ostringstream msg;
        msg << "resistance matrix is singular to working precision (D = " << d.transpose() << ")";
        throw Error(ErrorKind::Numerical, msg.str());
    }
    return ldlt;
}

Mat52 stack_fields(const Mat32& X) {
    Mat52 G;
    G.topRows<2>().setIdentity();
    G.bottomRows<3>() = X;
    return G;
}

}  // namespace

std::array<LinkFrame, 3> link_frames(const SwimmerState& state) {
    auto frame = [](double angle) {
        LinkFrame f;
        f.par = Vec2(std::cos(angle), std::sin(angle));
        f.perp = Vec2(-f.par.y(), f.par.x());
        return f;
    };
    return {frame(state.theta - state.beta1), frame(state.theta), frame(state.theta - state.beta3)};
}

ResistanceSplit assemble_resistance(const DesignParams& params, const SwimmerState& state) {
    const Eigen::Matrix<double, 3, 5> M =
        resistance_columns<double>(params.L, params.L2, params.drag.xi, params.drag.eta,
                                   state.beta1, state.beta3, state.theta);
    return {M.leftCols<3>(), -M.rightCols<2>()};
}

Mat52 field_matrix(const DesignParams& params, const Vec5& z) {
    const Eigen::Matrix<double, 3, 5> M = resistance_columns<double>(
        params.L, params.L2, params.drag.xi, params.drag.eta, z[0], z[1], z[4]);
    const Mat3 A = M.leftCols<3>();
    const Mat32 B = -M.rightCols<2>();
    return stack_fields(factor(A).solve(B));
}

ControlFields control_fields(const DesignParams& params, const SwimmerState& state) {
    const Mat52 G = field_matrix(params, state.vec());
    return {G.col(0), G.col(1)};
}

FieldSensitivity field_sensitivity(const DesignParams& params, const Vec5& z) {
    using Deriv = Eigen::Matrix<double, 5, 1>;
    using AD = Eigen::AutoDiffScalar<Deriv>;
    // derivative slots: beta1, beta3, theta, L, L2
    const AD b1(z[0], 5, 0);
    const AD b3(z[1], 5, 1);
    const AD th(z[4], 5, 2);
    const AD L(params.L, 5, 3);
    const AD L2(params.L2, 5, 4);
    const Eigen::Matrix<AD, 3, 5> M =
        resistance_columns<AD>(L, L2, params.drag.xi, params.drag.eta, b1, b3, th);

    Mat3 A;
    Mat32 B;
    std::array<Mat3, 5> dA;
    std::array<Mat32, 5> dB;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 5; ++c) {
            const double v = M(r, c).value();
            const Deriv& d = M(r, c).derivatives();
            for (int k = 0; k < 5; ++k) {
                if (c < 3) {
                    dA[k](r, c) = d[k];
                } else {
                    dB[k](r, c - 3) = -d[k];
                }
            }
            if (c < 3) {
                A(r, c) = v;
            } else {
                B(r, c - 3) = -v;
            }
        }
    }

    const auto ldlt = factor(A);
    const Mat32 X = ldlt.solve(B);
    std::array<Mat52, 5> dG;
    for (int k = 0; k < 5; ++k) {
        dG[k].setZero();
        dG[k].bottomRows<3>() = ldlt.solve(dB[k] - dA[k] * X);
    }
    return {stack_fields(X), dG[0], dG[1], dG[2], dG[3], dG[4]};
}

Vec5 rhs(const DesignParams& params, const Vec5& z, const Vec2& rate) {
    return field_matrix(params, z) * rate;
}

Vec5 rhs(const DesignParams& params, const SwimmerState& state, const ShapeRate& rate) {
    return rhs(params, state.vec(), rate.vec());
}

}  // namespace swimmer
