#pragma once

// Registry of the two-metric identities as residual computations, plus the classification checks.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bicausal/surface.hpp"

namespace bicausal {

enum class IdentityId {
    METRIC_SUM,
    METRIC_DIFF,
    CONN_DIFF,
    KILLING_R,
    KILLING_L,
    NORMAL_TRANSFORM,
    NORMAL_PAIRING,
    OMEGA_PRODUCT,
    T_RELATION,
    SHAPE_R,
    SHAPE_L,
    BILINEAR_R,
    BILINEAR_L,
    INT1_L,
    INT2_L,
    INT1_R,
    INT2_R,
    MEANCURV_L,
    MEANCURV_R,
    NORMCURV,
    SECTIONAL_REL,
    EXTRINSIC_REL,
    GAUSS_R,
    GAUSS_L,
    COMBINED_516,
};

const char* to_string(IdentityId id);
std::optional<IdentityId> identity_from_string(const std::string& name);

enum class Tier { ALGEBRAIC, FD1, FD2 };
const char* to_string(Tier t);
double tier_tolerance(Tier t);

// Ambient sample in the coordinate model. Fields X, Y have frame components x + gx (q - p), y + gy (q - p).
struct AmbientSample {
    SpaceParams prm;
    Vec3 p = Vec3::Zero();
    Vec3 x = Vec3::Zero(), y = Vec3::Zero();
    Mat3 gx = Mat3::Zero(), gy = Mat3::Zero();
};

struct SurfaceSample {
    const Ambient* amb = nullptr;
    const SurfaceImmersion* surface = nullptr;
    const TwoMetricFrameData* data = nullptr;
    std::vector<Vec3> probes;      // ambient vectors (frame components) for pairing identities
    std::vector<Vec2> directions;  // tangent directions as (du, dv) coefficients
};

struct IdentityContext {
    const AmbientSample* ambient = nullptr;
    const SurfaceSample* surface = nullptr;
};

enum class Scope { AMBIENT, SURFACE };

struct IdentityInfo {
    IdentityId id;
    Scope scope;
    Tier tier;
    std::string formula;  // the relation in plain notation
    std::string note;
    std::function<double(const IdentityContext&)> residual;
};

const std::vector<IdentityInfo>& identity_registry();
const IdentityInfo& identity_info(IdentityId id);

// Throws MISSING_CONTEXT when the context lacks what the identity needs,
// PARAMETER_SINGULARITY for SECTIONAL_REL / COMBINED_516 when kappa + 4 tau^2 = 0.
double identity_residual(IdentityId id, const IdentityContext& ctx);

// max(1, |lhs|, |rhs|)-normalized difference.
double rel_residual(double lhs, double rhs);
double rel_residual(const Vec3& lhs, const Vec3& rhs);

// --- classification checks ---

struct IndefinitenessResult {
    bool pass = false;
    double det_A_R = 0;
    double det_bound = 0;
    bool ratio_checked = false;
    double ratio_residual = 0;
};
// Throws HYPOTHESIS_VIOLATED if |H_R - H_L| > h_tol.
IndefinitenessResult indefiniteness_check(const TwoMetricFrameData& d, double h_tol);

struct RulingResult {
    double defect_R = 0;
    double defect_L = 0;
    Vec3 e2 = Vec3::Zero();
};
// Pre-geodesic defect of e2 = J_R(T_R / |T_R|_R). Throws HYPOTHESIS_VIOLATED when H_R or H_L exceeds
// h_tol and T_R_VANISHES when |T_R|_R <= 1e-6.
RulingResult ruling_residual(const Ambient& amb, const SurfaceImmersion& s, const TwoMetricFrameData& d,
                             const EngineOptions& opt = {}, double h_tol = 1e-5);

struct CurvatureRecord {
    double Ke_R = 0, Ke_L = 0;          // extrinsic curvatures
    double Kbar_R = 0, Kbar_L = 0;      // ambient sectional curvatures of the tangent plane (tensor)
    double Kbar_R_closed = 0, Kbar_L_closed = 0;
    double K_R = 0, K_L = 0;            // Gauss equation
    std::optional<double> K_R_intrinsic, K_L_intrinsic;
    double extrinsic_residual = 0, gauss_R_residual = 0, gauss_L_residual = 0;
    std::optional<double> sectional_residual, combined_residual;  // absent when kappa + 4 tau^2 = 0
    std::optional<double> intrinsic_R_residual, intrinsic_L_residual;
};

// Intrinsic Gaussian curvature K = R_1212 / det g of the induced metric by FD of the first fundamental form.
double intrinsic_gauss_curvature(const Ambient& amb, const SurfaceImmersion& s, const Vec2& uv, Signature sig,
                                 const EngineOptions& opt = {});

CurvatureRecord curvature_suite(const Ambient& amb, const SurfaceImmersion& s, const TwoMetricFrameData& d,
                                bool intrinsic_oracle, const EngineOptions& opt = {});

// Gauss formula consistency: tangential part of nabla_{d/du} d/dv against the intrinsic Christoffel action.
double gauss_formula_residual(const Ambient& amb, const SurfaceImmersion& s, const TwoMetricFrameData& d,
                              Signature sig, const EngineOptions& opt = {});

}  // namespace bicausal
