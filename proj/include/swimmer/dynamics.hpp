#pragma once

// Resistive-force-theory dynamics of the three-link swimmer.
//
// State ordering everywhere is z = (beta1, beta3, x, y, theta): the two
// relative joint angles, the position of the centre of the middle link and
// the orientation of the middle link.  The outer links point along the
// absolute angles theta - beta1 and theta - beta3.

#include <Eigen/Dense>

#include <array>

namespace swimmer {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat32 = Eigen::Matrix<double, 3, 2>;
using Mat52 = Eigen::Matrix<double, 5, 2>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

// Drag per unit length along (xi) and across (eta) a link.
struct DragModel {
    double xi = 1.0;
    double eta = 2.0;

    void validate() const;
};

struct DesignParams {
    double L = 1.0;   // outer links
    double L2 = 2.0;  // central link
    DragModel drag;

    double total_length() const { return 2.0 * L + L2; }
    double ratio() const { return L2 / L; }
    void validate() const;

    // L2/L = ratio with 2L + L2 = c.
    static DesignParams from_ratio(double ratio, double c, DragModel drag = {});
};

struct SwimmerState {
    double beta1 = 0.0;
    double beta3 = 0.0;
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    Vec5 vec() const { return (Vec5() << beta1, beta3, x, y, theta).finished(); }
    static SwimmerState from_vec(const Vec5& z) { return {z[0], z[1], z[2], z[3], z[4]}; }
};

struct ShapeRate {
    double db1 = 0.0;
    double db3 = 0.0;

    Vec2 vec() const { return {db1, db3}; }
};

struct LinkFrame {
    Vec2 par;   // along the link, pointing away from the joint it hangs on
    Vec2 perp;  // par rotated by +pi/2
};

// A (xdot, ydot, thetadot)' - B (beta1dot, beta3dot)' = 0 at force/torque balance.
struct ResistanceSplit {
    Mat3 A;
    Mat32 B;
};

struct ControlFields {
    Vec5 g1;
    Vec5 g2;

    Mat52 matrix() const {
        Mat52 G;
        G << g1, g2;
        return G;
    }
};

// Derivatives of the 5x2 field matrix G = [g1 g2].  Only beta1, beta3 and
// theta enter G; derivatives with respect to x and y vanish identically.
struct FieldSensitivity {
    Mat52 G;
    Mat52 d_beta1;
    Mat52 d_beta3;
    Mat52 d_theta;
    Mat52 d_L;   // at fixed L2
    Mat52 d_L2;  // at fixed L
};

std::array<LinkFrame, 3> link_frames(const SwimmerState& state);

// Closed-form integration of the drag density over the three links; torque
// is taken about the centre of the middle link.
ResistanceSplit assemble_resistance(const DesignParams& params, const SwimmerState& state);

// Throws Error(Numerical) if A cannot be factored.
ControlFields control_fields(const DesignParams& params, const SwimmerState& state);

// Same as control_fields but on a raw state vector, returned as [g1 g2].
Mat52 field_matrix(const DesignParams& params, const Vec5& z);

// Forward-mode derivatives of G with respect to shape, heading and link lengths.
FieldSensitivity field_sensitivity(const DesignParams& params, const Vec5& z);

Vec5 rhs(const DesignParams& params, const SwimmerState& state, const ShapeRate& rate);
Vec5 rhs(const DesignParams& params, const Vec5& z, const Vec2& rate);

}  // namespace swimmer
