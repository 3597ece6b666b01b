#pragma once

// Named surfaces and the two group models (Berger sphere in C^2, SU(1,1)).

#include <complex>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bicausal/surface.hpp"

namespace bicausal {

using cplx = std::complex<double>;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

enum class GroupTag { BERGER_S3, SU11 };
const char* to_string(GroupTag t);

// Points are (Re z, Im z, Re w, Im w). The frame is E1 = X1/sqrt|4/k|, E2 = X2/sqrt|4/k|, E3 = xi = (k/4t) X3
// with the left-invariant fields g X_i; its brackets match the canonical frame, so the closed-form
// connection table applies unchanged.
class GroupAmbient final : public Ambient {
public:
    GroupAmbient(GroupTag tag, const SpaceParams& prm);

    int dim() const override { return 4; }
    const SpaceParams& params() const override { return prm_; }
    std::string name() const override { return to_string(tag_); }
    void check_point(const VecX& p) const override;
    MatX frame(const VecX& p) const override;
    ConnectionTable table(Signature s, const VecX& p) const override;
    // Extension of the model metric to R^4 (verbatim Berger formula; frame-dual form for SU(1,1)).
    MatX metric(Signature s, const VecX& p) const override;

    GroupTag tag() const { return tag_; }
    // Left-invariant fields X1, X2, X3 at p (columns).
    Eigen::Matrix<double, 4, 3> fields(const VecX& p) const;
    // Gradient of the defining function |z|^2 +- |w|^2.
    Vec4 constraint_gradient(const VecX& p) const;
    double constraint(const VecX& p) const;
    // The metric modifier of the extended Berger metric (4t^2/k - 1 for R, -(4t^2/k + 1) for L).
    double metric_modifier(Signature s) const;

private:
    GroupTag tag_;
    SpaceParams prm_;
    double c12_;  // |4 / kappa|
};

// --- independent checks through the extended metric of R^4 ---

// Christoffel symbols of the extended metric by central FD: gamma[c](a,b).
std::array<Mat4, 4> extended_christoffel(const Ambient& amb, Signature s, const VecX& p, double h);

// nabla_{E_i} E_j in frame components from the extended metric, projected to the model manifold.
Vec3 group_koszul_oracle(const GroupAmbient& amb, Signature s, const VecX& p, int i, int j,
                         double h = default_fd_step());

// Mean curvature from the second fundamental form assembled with the extended-metric connection
// (no frame table involved). Oriented to agree with the engine's normal when ref_normal is nonzero.
double extended_mean_curvature(const GroupAmbient& amb, const SurfaceImmersion& s, const Vec2& uv, Signature sig,
                               const Vec3& ref_normal = Vec3::Zero(), double h = default_fd_step());

// Acceleration defect of a curve in the model w.r.t. the extended-metric connection, projected to the model
// (component orthogonal to the velocity).
double extended_geodesic_defect(const GroupAmbient& amb, Signature s, const std::function<VecX(double)>& c,
                                double t, double h = default_fd_step());

// --- catalog ---

struct CatalogSurface {
    std::string name;  // canonical name with parameters
    std::shared_ptr<const Ambient> ambient;
    SurfaceImmersion immersion;
    std::vector<std::string> expected;  // "TIMELIKE", "SPACELIKE", "H_R=0", "H_L=0", "HOPF", "HORIZONTAL", "RULED"
    bool group_model = false;

    bool expects(const std::string& tag) const;
};

// Parses "kind[:key=value,...]" (e.g. "hopf:circle:r=1", "berger-helicoid:alpha=0.5",
// "su11-helicoid:family=P,a=1", "file:chart.json"). Domain overrides: u0,u1,v0,v1.
// Throws CONFIG_INVALID for unknown names or malformed parameters, TAU_NONZERO for slices with tau != 0,
// MODEL_MISMATCH when the parameters do not fit a group model, CURVE_SINGULAR / DOMAIN_VIOLATION for bad curves.
CatalogSurface make_surface(const std::string& name, const SpaceParams& prm);

// Whether make_surface(name, prm) is expected to succeed for these parameters.
bool surface_applicable(const std::string& name, const SpaceParams& prm);

// The catalog entries exercised by the default suite.
const std::vector<std::string>& default_surface_names();

// Planar curve (a(s), b(s)) with derivative for Hopf cylinders.
struct PlanarCurve {
    std::function<Vec2(double)> point;
    std::function<Vec2(double)> velocity;
};
CatalogSurface hopf_cylinder(const SpaceParams& prm, const PlanarCurve& alpha, const ParamRect& domain,
                             const std::string& name);
CatalogSurface slice_surface(const SpaceParams& prm, double t0, const ParamRect& domain);
CatalogSurface berger_helicoid(const SpaceParams& prm, double alpha, const ParamRect& domain);

enum class Su11Family { E, H1, P1, P };
struct Su11HelicoidSpec {
    Su11Family family = Su11Family::H1;
    double coeff = 0.5;  // alpha for E and H1, b for P1, a for P
    std::optional<double> rate;  // defaults to kappa^2
    Eigen::Matrix2cd A = Eigen::Matrix2cd::Identity();
    ParamRect domain{-0.5, 0.5, 0.2, 0.8};
};
CatalogSurface su11_helicoid(const SpaceParams& prm, const Su11HelicoidSpec& spec);

// The 2x2 complex matrix of the SU(1,1) helicoid at (s, t).
Eigen::Matrix2cd su11_helicoid_matrix(const SpaceParams& prm, const Su11HelicoidSpec& spec, double s, double t);

}  // namespace bicausal
