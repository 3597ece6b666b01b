#pragma once

// Homogeneous spaces E^3(k,t) and L^3(k,t) on the shared domain D.
// Most routines work in frame components w.r.t. the canonical frame (E1,E2,E3),
// which is orthonormal for g_R and has <E3,E3>_L = -1 for g_L.

#include <array>
#include <functional>
#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "bicausal/error.hpp"

namespace bicausal {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

struct SpaceParams {
    double kappa = 0.0;
    double tau = 0.0;
    std::optional<double> sigma;        // kappa / (2 tau), only for tau != 0
    std::optional<double> disk_radius;  // 2 / sqrt(-kappa), only for kappa < 0

    static SpaceParams make(double kappa, double tau);

    // (k - 4t^2) / (k + 4t^2); throws PARAMETER_SINGULARITY when k + 4t^2 = 0.
    double A() const;
};

enum class Signature { RIEMANNIAN, LORENTZIAN };

const char* to_string(Signature s);

// FD step for first derivatives; BICAUSAL_FD_STEP overrides the default 1e-4.
double default_fd_step();
inline constexpr double kSecondFdStep = 1e-3;
inline constexpr double kDomainMargin = 1e-6;

// --- frame-component algebra (no base point needed) ---

inline double frame_sign(Signature s) { return s == Signature::RIEMANNIAN ? 1.0 : -1.0; }
double inner(Signature s, const Vec3& a, const Vec3& b);
Vec3 wedge(Signature s, const Vec3& a, const Vec3& b);
inline Vec3 xi_frame() { return Vec3(0, 0, 1); }
std::pair<Vec3, Vec3> hv_split(const Vec3& x);
Vec3 difference_tensor_W(double tau, const Vec3& x, const Vec3& y);
Vec3 curvature_tensor(const SpaceParams& prm, Signature s, const Vec3& x, const Vec3& y, const Vec3& z);

// --- point geometry ---

void check_domain(const SpaceParams& prm, const Vec3& p);
double conformal_factor(const SpaceParams& prm, const Vec3& p);
// Columns are E1, E2, E3 in coordinate components (d/dx, d/dy, d/dz).
Mat3 frame_matrix(const SpaceParams& prm, const Vec3& p);
// g_ij of the coordinate form of the metric.
Mat3 coordinate_metric(const SpaceParams& prm, Signature s, const Vec3& p);

class AmbientVector {
public:
    static AmbientVector from_coord(const SpaceParams& prm, const Vec3& base, const Vec3& c);
    static AmbientVector from_frame(const SpaceParams& prm, const Vec3& base, const Vec3& f);

    const Vec3& base() const { return base_; }
    const SpaceParams& params() const { return prm_; }
    Vec3 coord() const;
    Vec3 frame() const;

private:
    AmbientVector(const SpaceParams& prm, const Vec3& base) : prm_(prm), base_(base) {}
    SpaceParams prm_;
    Vec3 base_;
    std::optional<Vec3> coord_;
    std::optional<Vec3> frame_;
};

void require_same_base(const AmbientVector& u, const AmbientVector& v);

double metric_eval(const SpaceParams& prm, Signature s, const AmbientVector& u, const AmbientVector& v);
double metric_eval_coord(const SpaceParams& prm, Signature s, const AmbientVector& u, const AmbientVector& v);
std::array<AmbientVector, 3> canonical_frame(const SpaceParams& prm, const Vec3& p);
AmbientVector wedge(const SpaceParams& prm, Signature s, const AmbientVector& u, const AmbientVector& v);
AmbientVector difference_tensor_W(const SpaceParams& prm, const AmbientVector& x, const AmbientVector& y);
std::pair<AmbientVector, AmbientVector> hv_split(const SpaceParams& prm, const AmbientVector& x);
AmbientVector curvature_tensor(const SpaceParams& prm, Signature s, const AmbientVector& x,
                               const AmbientVector& y, const AmbientVector& z);

// --- connection ---

struct ConnectionTable {
    Signature signature = Signature::RIEMANNIAN;
    std::array<std::array<Vec3, 3>, 3> c = zero_entries();  // c[i][j] = frame comps of nabla_{E_i} E_j

    // sum_ij x_i y_j nabla_{E_i} E_j
    Vec3 contract(const Vec3& x, const Vec3& y) const;

    static std::array<std::array<Vec3, 3>, 3> zero_entries() {
        std::array<std::array<Vec3, 3>, 3> z;
        for (auto& row : z) row.fill(Vec3::Zero());
        return z;
    }
};

// Closed-form table for tau != 0. For tau = 0 the frame is (E1,E2,E3) = (l^-1 d_x, l^-1 d_y, d_z),
// whose table depends on (x,y); it is evaluated in closed form there as well.
ConnectionTable connection_table(const SpaceParams& prm, Signature s, const Vec3& p);

// Field given by its frame components as a function of the base point.
using FrameField = std::function<Vec3(const Vec3&)>;

// nabla_X Y at p, with the directional derivative of Y's frame components taken by central FD.
AmbientVector covariant_derivative(const SpaceParams& prm, Signature s, const FrameField& x,
                                   const FrameField& y, const Vec3& p, double h = default_fd_step());

// Coordinate Christoffel symbols by central FD of the metric: gamma[c](a,b) = Gamma^c_ab.
std::array<Mat3, 3> christoffel_fd(const SpaceParams& prm, Signature s, const Vec3& p, double h);

// nabla_{E_i} E_j (0-based i,j) from the FD Christoffels; result in frame components.
Vec3 koszul_fd_oracle(const SpaceParams& prm, Signature s, const Vec3& p, int i, int j,
                      double h = default_fd_step());

// [E_i, E_j] by FD of the coordinate expressions, frame components.
Vec3 lie_bracket_fd(const SpaceParams& prm, const Vec3& p, int i, int j, double h = default_fd_step());

// R(X,Y)Z = nabla_[X,Y] Z - [nabla_X, nabla_Y] Z from FD second derivatives of the metric.
Vec3 curvature_fd_oracle(const SpaceParams& prm, Signature s, const Vec3& p, const Vec3& x, const Vec3& y,
                         const Vec3& z, double h1 = default_fd_step(), double h2 = kSecondFdStep);

}  // namespace bicausal
