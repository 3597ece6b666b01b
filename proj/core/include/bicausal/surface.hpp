#pragma once

// Per-point extrinsic geometry of an immersed surface under both metrics.
// Tangent and normal vectors are carried in frame components (E1, E2, E3);
// 2x2 operators are matrices in the (d/du, d/dv) basis.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bicausal/ambient.hpp"

namespace bicausal {

struct ParamRect {
    double u0 = 0, u1 = 1, v0 = 0, v1 = 1;
    bool contains(const Vec2& uv, double margin = 0.0) const {
        return uv[0] >= u0 + margin && uv[0] <= u1 - margin && uv[1] >= v0 + margin && uv[1] <= v1 - margin;
    }
};

struct SurfaceImmersion {
    std::function<VecX(double, double)> chart;
    std::function<std::pair<VecX, VecX>(double, double)> jacobian;  // optional analytic partials
    ParamRect domain;
    std::function<bool(double, double)> predicate;  // optional extra restriction inside the rectangle

    bool admits(const Vec2& uv, double margin) const {
        return domain.contains(uv, margin) && (!predicate || predicate(uv[0], uv[1]));
    }
};

struct SurfaceJet {
    Vec2 uv;
    VecX p, du, dv, duu, duv, dvv;
};

SurfaceJet surface_jet(const SurfaceImmersion& s, const Vec2& uv, double h = default_fd_step());

enum class Character { SPACELIKE, TIMELIKE, DEGENERATE };
const char* to_string(Character c);

struct CausalCharacter {
    Character tag = Character::DEGENERATE;
    int eps = 0;  // -1 spacelike, +1 timelike, 0 degenerate
};

inline constexpr double kDegenerateTol = 1e-9;
inline constexpr double kAmbiguousTol = 1e-12;

struct EngineOptions {
    double h = default_fd_step();
    double h2 = kSecondFdStep;
    int orientation = +1;  // used only where <N_L, xi>_L vanishes
};

// First-order data at one point: tangents, Gram matrices, character, normals, omega, T.
struct PointGeometry {
    SurfaceJet jet;
    Vec3 xu, xv;  // frame comps of the first partials
    Mat2 gR, gL;
    CausalCharacter ch;
    int eps = 0;
    Vec3 N_L, N_R, N_R_wedge;
    int wedge_sign = +1;  // N_L = wedge_sign * normalized(xu ^_L xv)
    double omega_L = 1, omega_R = 1;
    double angle_L = 0, angle_R = 0;
    Vec3 T_L, T_R;
    bool sign_ambiguous = false;
};

CausalCharacter causal_character(const Ambient& amb, const SurfaceJet& jet);

// Normals, omega and T at a jet. Throws DEGENERATE_INPUT on degenerate points.
PointGeometry point_geometry(const Ambient& amb, const SurfaceJet& jet, int orientation = +1);

// Point geometry at uv with N_L oriented to agree with ref_N_L (continuity across a stencil).
PointGeometry oriented_point_geometry(const Ambient& amb, const SurfaceImmersion& s, const Vec2& uv,
                                      const Vec3& ref_N_L, double h, int orientation = +1);

struct TwoMetricFrameData : PointGeometry {
    Mat2 A_L = Mat2::Zero(), A_R = Mat2::Zero();              // Weingarten route
    Mat2 A_L_bform = Mat2::Zero(), A_R_bform = Mat2::Zero();  // second fundamental form route
    double H_L = 0, H_R = 0;
    std::optional<double> phi;  // hyperbolic angle, spacelike only
    double projection_residual_L = 0, projection_residual_R = 0;
    double selfadjoint_residual_L = 0, selfadjoint_residual_R = 0;
    double bform_residual_L = 0, bform_residual_R = 0;
    // Ambient derivatives along d/du, d/dv (index 0, 1) used by the integrability checks.
    std::array<Vec3, 2> dT_L{}, dT_R{};
    std::array<double, 2> d_angle_L{}, d_angle_R{};
    std::vector<std::string> flags;
};

TwoMetricFrameData evaluate_point(const Ambient& amb, const SurfaceImmersion& s, const Vec2& uv,
                                  const EngineOptions& opt = {});

// --- helpers on evaluated data ---

const Mat2& gram(const PointGeometry& d, Signature s);
inline const Vec3& normal(const PointGeometry& d, Signature s) {
    return s == Signature::RIEMANNIAN ? d.N_R : d.N_L;
}
inline const Mat2& shape(const TwoMetricFrameData& d, Signature s) {
    return s == Signature::RIEMANNIAN ? d.A_R : d.A_L;
}
Vec3 tangent_vector(const PointGeometry& d, const Vec2& c);
// Coefficients of a tangent vector in (xu, xv); throws NON_TANGENT if x has a normal part.
Vec2 tangent_coeffs(const PointGeometry& d, const Vec3& x, double tol = 1e-8);
Vec3 apply_shape(const TwoMetricFrameData& d, Signature s, const Vec3& x);

// J_R X = N_R ^_R X, J_L X = N_L ^_L X.
Vec3 rotation_J(const PointGeometry& d, Signature s, const Vec3& x);

std::pair<double, double> mean_curvatures(const TwoMetricFrameData& d);

struct NormalCurvature {
    double lambda = 0;
    int eps_v = 1;
};
// Throws NULL_DIRECTION for sig = L and null v.
NormalCurvature normal_curvature(const TwoMetricFrameData& d, Signature s, const Vec3& v);

// Orthonormal tangent bases. For L: <e1,e1>_L = 1, <e2,e2>_L = -eps.
std::pair<Vec3, Vec3> orthonormal_tangent_basis(const PointGeometry& d, Signature s);

// det(A_R), and det of <A_L e_i, e_j>_L on an L-orthonormal basis (equals -eps det(A_L)).
double extrinsic_curvature(const TwoMetricFrameData& d, Signature s);

}  // namespace bicausal
