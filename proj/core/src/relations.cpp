#include "bicausal/relations.hpp"

#include <algorithm>
#include <cmath>

namespace bicausal {

namespace {

constexpr Signature R = Signature::RIEMANNIAN;
constexpr Signature L = Signature::LORENTZIAN;

const SurfaceSample& need_surface(const IdentityContext& c) {
    if (!c.surface || !c.surface->data || !c.surface->amb)
        throw Error(ErrorCode::MISSING_CONTEXT, "identity needs evaluated surface data");
    return *c.surface;
}

const AmbientSample& need_ambient(const IdentityContext& c) {
    if (!c.ambient) throw Error(ErrorCode::MISSING_CONTEXT, "identity needs an ambient sample");
    return *c.ambient;
}

Vec3 J(const PointGeometry& d, Signature s, const Vec3& x) { return wedge(s, normal(d, s), x); }

double norm_R(const Vec3& x) { return std::sqrt(inner(R, x, x)); }

// Unit (R) tangent test vectors: the coordinate directions and the supplied ones.
std::vector<Vec3> test_vectors(const SurfaceSample& s) {
    const auto& d = *s.data;
    std::vector<Vec3> out{d.xu / norm_R(d.xu), d.xv / norm_R(d.xv)};
    for (const auto& c : s.directions) {
        const Vec3 v = tangent_vector(d, c);
        if (v.norm() > 0) out.push_back(v / norm_R(v));
    }
    return out;
}

double metric_sum(const IdentityContext& c) {
    const auto& a = need_ambient(c);
    const auto [xh, xv] = hv_split(a.x);
    const auto [yh, yv] = hv_split(a.y);
    const double lhs = inner(R, a.x, a.y) + inner(L, a.x, a.y);
    const double scale = std::max(1.0, a.x.norm() * a.y.norm());
    return std::max(std::abs(lhs - 2 * inner(R, xh, yh)), std::abs(lhs - 2 * inner(L, xh, yh))) / scale;
}

double metric_diff(const IdentityContext& c) {
    const auto& a = need_ambient(c);
    const Vec3 e3 = xi_frame();
    const double lhs = inner(R, a.x, a.y) - inner(L, a.x, a.y);
    const double scale = std::max(1.0, a.x.norm() * a.y.norm());
    return std::max(std::abs(lhs - 2 * inner(R, a.x, e3) * inner(R, a.y, e3)),
                    std::abs(lhs - 2 * inner(L, a.x, e3) * inner(L, a.y, e3))) /
           scale;
}

FrameField affine_field(const Vec3& p, const Vec3& x, const Mat3& g) {
    return [p, x, g](const Vec3& q) -> Vec3 { return x + g * (q - p); };
}

// sum_ij x_i y_j nabla_{E_i} E_j from the finite-difference Koszul oracle
Vec3 oracle_contract(const SpaceParams& prm, Signature s, const Vec3& p, const Vec3& x, const Vec3& y) {
    Vec3 r = Vec3::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (x[i] != 0.0 && y[j] != 0.0) r += x[i] * y[j] * koszul_fd_oracle(prm, s, p, i, j);
    return r;
}

double conn_diff(const IdentityContext& c) {
    const auto& a = need_ambient(c);
    const FrameField X = affine_field(a.p, a.x, a.gx), Y = affine_field(a.p, a.y, a.gy);
    const Vec3 lhs = covariant_derivative(a.prm, R, Y, X, a.p).frame() - covariant_derivative(a.prm, L, Y, X, a.p).frame();
    const Vec3 w = difference_tensor_W(a.prm.tau, a.x, a.y);
    const Vec3 lhs_oracle = oracle_contract(a.prm, R, a.p, a.y, a.x) - oracle_contract(a.prm, L, a.p, a.y, a.x);
    return std::max(rel_residual(lhs, w), rel_residual(lhs_oracle, w));
}

double killing(const IdentityContext& c, Signature s) {
    const auto& a = need_ambient(c);
    const FrameField X = affine_field(a.p, a.x, a.gx);
    const FrameField xi = [](const Vec3&) { return xi_frame(); };
    const double sgn = s == R ? a.prm.tau : -a.prm.tau;
    const Vec3 rhs = sgn * wedge(s, a.x, xi_frame());
    const Vec3 lhs = covariant_derivative(a.prm, s, X, xi, a.p).frame();
    const Vec3 lhs_oracle = oracle_contract(a.prm, s, a.p, a.x, xi_frame());
    return std::max(rel_residual(lhs, rhs), rel_residual(lhs_oracle, rhs));
}

double normal_transform(const IdentityContext& c) {
    const auto& d = *need_surface(c).data;
    const double w = d.omega_L;
    const Vec3 literal = (std::sqrt(std::max(0.0, 2 * (w * w - d.eps))) * xi_frame() - d.N_L) / w;
    double r = (literal - d.N_R_wedge).norm();
    r = std::max(r, (d.N_R - d.N_R_wedge).norm());
    r = std::max(r, std::abs(inner(R, d.N_R, d.N_R) - 1));
    r = std::max(r, std::abs(inner(L, d.N_L, d.N_L) - d.eps));
    return r;
}

double normal_pairing(const IdentityContext& c) {
    const auto& s = need_surface(c);
    const auto& d = *s.data;
    std::vector<Vec3> probes = s.probes;
    if (probes.empty()) probes = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ(), d.xu, d.xv};
    double r = 0;
    for (const auto& v : probes) {
        const double lhs = inner(R, d.N_R, v), rhs = -inner(L, d.N_L, v) / d.omega_L;
        r = std::max(r, std::abs(lhs - rhs) / std::max(1.0, v.norm()));
    }
    return r;
}

double omega_product(const IdentityContext& c) {
    const auto& d = *need_surface(c).data;
    const double wr = std::sqrt(std::max(0.0, d.eps * (1 - 2 * d.angle_R * d.angle_R)));
    return std::max({std::abs(d.omega_L * d.omega_R - 1), std::abs(d.omega_R - wr),
                     std::abs(d.omega_L - std::sqrt(d.eps + 2 * d.angle_L * d.angle_L))});
}

double t_relation(const IdentityContext& c) {
    const auto& d = *need_surface(c).data;
    return rel_residual(d.T_R, d.eps / (d.omega_L * d.omega_L) * d.T_L);
}

double shape_R(const IdentityContext& c) {
    const auto& s = need_surface(c);
    const auto& d = *s.data;
    const double tau = s.amb->params().tau, w = d.omega_L, e = d.eps;
    const Vec3 AT = apply_shape(d, L, d.T_L) - tau * J(d, L, d.T_L);
    const Vec3 JT = J(d, L, d.T_L);
    double r = 0;
    for (const auto& X : test_vectors(s)) {
        const Vec3 lhs = apply_shape(d, R, X);
        const Vec3 rhs = -apply_shape(d, L, X) / w - 2 * e / (w * w * w) * inner(L, AT, X) * d.T_L -
                         2 * tau / w * inner(L, d.T_L, X) * JT;
        r = std::max(r, rel_residual(lhs, rhs));
    }
    return r;
}

double shape_L(const IdentityContext& c) {
    const auto& s = need_surface(c);
    const auto& d = *s.data;
    const double tau = s.amb->params().tau, w = d.omega_R, e = d.eps;
    const Vec3 AT = apply_shape(d, R, d.T_R) + tau * J(d, R, d.T_R);
    const Vec3 JT = J(d, R, d.T_R);
    double r = 0;
    for (const auto& X : test_vectors(s)) {
        const Vec3 lhs = apply_shape(d, L, X);
        const Vec3 rhs = -apply_shape(d, R, X) / w + 2 * e / (w * w * w) * inner(R, AT, X) * d.T_R -
                         2 * tau / w * inner(R, d.T_R, X) * JT;
        r = std::max(r, rel_residual(lhs, rhs));
    }
    return r;
}

double bilinear(const IdentityContext& c, Signature s) {
    const auto& ss = need_surface(c);
    const auto& d = *ss.data;
    const double tau = ss.amb->params().tau;
    const auto vs = test_vectors(ss);
    double r = 0;
    for (const auto& X : vs)
        for (const auto& Y : vs) {
            double lhs, rhs;
            if (s == R) {
                lhs = inner(R, apply_shape(d, R, X), Y);
                rhs = -(inner(L, apply_shape(d, L, X), Y) - tau * (inner(R, J(d, L, X), Y) + inner(R, J(d, L, Y), X))) /
                      d.omega_L;
            } else {
                lhs = inner(L, apply_shape(d, L, X), Y);
                rhs = -(inner(R, apply_shape(d, R, X), Y) + tau * (inner(L, J(d, R, X), Y) + inner(L, J(d, R, Y), X))) /
                      d.omega_R;
            }
            r = std::max(r, rel_residual(lhs, rhs));
        }
    return r;
}

// Tangential part of an ambient vector.
Vec3 tangential(const PointGeometry& d, Signature s, const Vec3& v) {
    const Vec3& N = normal(d, s);
    return v - inner(s, v, N) / inner(s, N, N) * N;
}

double int1(const IdentityContext& c, Signature s) {
    const auto& ss = need_surface(c);
    const auto& d = *ss.data;
    const double tau = ss.amb->params().tau;
    const Vec3 xs[2] = {d.xu, d.xv};
    double r = 0;
    for (int k = 0; k < 2; ++k) {
        const double n = norm_R(xs[k]);
        const Vec3 X = xs[k] / n;
        Vec3 lhs, rhs;
        if (s == L) {
            lhs = tangential(d, L, d.dT_L[k] / n);
            rhs = d.eps * d.angle_L * (apply_shape(d, L, X) + tau * J(d, L, X));
        } else {
            lhs = tangential(d, R, d.dT_R[k] / n);
            rhs = d.angle_R * (apply_shape(d, R, X) - tau * J(d, R, X));
        }
        r = std::max(r, rel_residual(lhs, rhs));
    }
    return r;
}

double int2(const IdentityContext& c, Signature s) {
    const auto& ss = need_surface(c);
    const auto& d = *ss.data;
    const double tau = ss.amb->params().tau;
    const Vec3 xs[2] = {d.xu, d.xv};
    double r = 0;
    for (int k = 0; k < 2; ++k) {
        const double n = norm_R(xs[k]);
        const Vec3 X = xs[k] / n;
        double lhs, rhs;
        if (s == L) {
            lhs = d.d_angle_L[k] / n;
            rhs = -inner(L, apply_shape(d, L, d.T_L) - tau * J(d, L, d.T_L), X);
        } else {
            lhs = d.d_angle_R[k] / n;
            rhs = -inner(R, apply_shape(d, R, d.T_R) + tau * J(d, R, d.T_R), X);
        }
        r = std::max(r, rel_residual(lhs, rhs));
    }
    return r;
}

double meancurv_L(const IdentityContext& c) {
    const auto& d = *need_surface(c).data;
    const double w = d.omega_R;
    const double rhs = -d.eps / w * d.H_R + inner(R, apply_shape(d, R, d.T_R), d.T_R) / (w * w * w);
    return rel_residual(d.H_L, rhs);
}

double meancurv_R(const IdentityContext& c) {
    const auto& d = *need_surface(c).data;
    const double w = d.omega_L;
    const double rhs = -d.eps / w * d.H_L - d.eps / (w * w * w) * inner(L, apply_shape(d, L, d.T_L), d.T_L);
    return rel_residual(d.H_R, rhs);
}

double normcurv(const IdentityContext& c) {
    const auto& s = need_surface(c);
    const auto& d = *s.data;
    const double tau = s.amb->params().tau;
    std::vector<Vec2> dirs = s.directions;
    if (dirs.empty()) dirs = {Vec2(1, 0), Vec2(0, 1), Vec2(1, 1), Vec2(1, -1)};
    double r = 0;
    for (const auto& cf : dirs) {
        const Vec3 v = tangent_vector(d, cf);
        NormalCurvature lL;
        try {
            lL = normal_curvature(d, L, v);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NULL_DIRECTION) continue;
            throw;
        }
        const double lR = normal_curvature(d, R, v).lambda;
        const double vR2 = inner(R, v, v), vL2 = std::abs(inner(L, v, v));
        const Vec3 tR = v / std::sqrt(vR2);
        const double rhs = -vR2 / (d.omega_R * vL2) * (lR + 2 * tau * inner(L, tR, J(d, R, tR)));
        r = std::max(r, rel_residual(lL.eps_v * lL.lambda, rhs));
    }
    return r;
}

struct Sectional {
    double Kbar_R, Kbar_L;
};

Sectional sectional_tensor(const SpaceParams& prm, const PointGeometry& d) {
    const auto [f1, f2] = orthonormal_tangent_basis(d, R);
    const auto [e1, e2] = orthonormal_tangent_basis(d, L);
    return {inner(R, curvature_tensor(prm, R, f1, f2, f1), f2), inner(L, curvature_tensor(prm, L, e1, e2, e1), e2)};
}

double sectional_rel(const IdentityContext& c) {
    const auto& s = need_surface(c);
    const auto& d = *s.data;
    const auto& prm = s.amb->params();
    const double A = prm.A(), t2 = prm.tau * prm.tau, w2 = d.omega_L * d.omega_L;
    const auto k = sectional_tensor(prm, d);
    return rel_residual(k.Kbar_R, (t2 * (w2 - d.eps * A) + A * k.Kbar_L) / w2);
}

double extrinsic_rel(const IdentityContext& c) {
    const auto& s = need_surface(c);
    const auto& d = *s.data;
    const double tau = s.amb->params().tau, e = d.eps;
    const double w4 = std::pow(d.omega_R, 4);
    const double tr2 = inner(R, d.T_R, d.T_R);
    const double lhs = d.A_L.determinant();
    const double rhs = -e / w4 * d.A_R.determinant() +
                       4 * tau * e / w4 * (inner(R, apply_shape(d, R, d.T_R), J(d, R, d.T_R)) + tau * tr2 * tr2);
    return rel_residual(lhs, rhs);
}

double gauss(const IdentityContext& c, Signature sig) {
    const auto& s = need_surface(c);
    const auto& d = *s.data;
    const auto& prm = s.amb->params();
    const double t2 = prm.tau * prm.tau;
    const auto k = sectional_tensor(prm, d);
    if (sig == R) {
        const double Ke = extrinsic_curvature(d, R);
        return rel_residual(k.Kbar_R + Ke, t2 + (prm.kappa - 4 * t2) * d.angle_R * d.angle_R + Ke);
    }
    const double Ke = extrinsic_curvature(d, L);
    return rel_residual(k.Kbar_L + d.eps * Ke, d.eps * t2 + (prm.kappa + 4 * t2) * d.angle_L * d.angle_L + d.eps * Ke);
}

double combined(const IdentityContext& c) {
    const auto& s = need_surface(c);
    const auto& d = *s.data;
    const auto& prm = s.amb->params();
    const double A = prm.A(), t2 = prm.tau * prm.tau, w2 = d.omega_L * d.omega_L;
    const auto k = sectional_tensor(prm, d);
    const double KeR = extrinsic_curvature(d, R), KeL = extrinsic_curvature(d, L);
    const double KR = k.Kbar_R + KeR, KL = k.Kbar_L + d.eps * KeL;
    return rel_residual(w2 * KR - A * KL, (w2 - d.eps * A) * t2 - d.eps * A * KeL + w2 * KeR);
}

std::vector<IdentityInfo> build_registry() {
    using S = Scope;
    using T = Tier;
    auto amb = S::AMBIENT;
    auto srf = S::SURFACE;
    return {
        {IdentityId::METRIC_SUM, amb, T::ALGEBRAIC, "<X,Y>_R + <X,Y>_L = 2<X^h,Y^h>_R = 2<X^h,Y^h>_L", "", metric_sum},
        {IdentityId::METRIC_DIFF, amb, T::ALGEBRAIC, "<X,Y>_R - <X,Y>_L = 2<X,E3>_R<Y,E3>_R = 2<X,E3>_L<Y,E3>_L", "",
         metric_diff},
        {IdentityId::CONN_DIFF, amb, T::FD1, "nabla^R_Y X - nabla^L_Y X = W(X,Y)",
         "table route with FD-extended fields and Koszul-oracle route with frame fields", conn_diff},
        {IdentityId::KILLING_R, amb, T::FD1, "nabla^R_X xi = tau X ^_R xi", "", [](const IdentityContext& c) {
             return killing(c, R);
         }},
        {IdentityId::KILLING_L, amb, T::FD1, "nabla^L_X xi = -tau X ^_L xi", "", [](const IdentityContext& c) {
             return killing(c, L);
         }},
        {IdentityId::NORMAL_TRANSFORM, srf, T::ALGEBRAIC, "N_R = (sqrt(2(w_L^2 - eps)) xi - N_L) / w_L",
         "compared with the normalized R wedge; also unit lengths of both normals", normal_transform},
        {IdentityId::NORMAL_PAIRING, srf, T::ALGEBRAIC, "<N_R,V>_R = -(1/w_L) <N_L,V>_L", "", normal_pairing},
        {IdentityId::OMEGA_PRODUCT, srf, T::ALGEBRAIC, "w_L w_R = 1, w_R = sqrt(eps(1 - 2<N_R,xi>_R^2))", "",
         omega_product},
        {IdentityId::T_RELATION, srf, T::ALGEBRAIC, "T_R = (eps / w_L^2) T_L", "", t_relation},
        {IdentityId::SHAPE_R, srf, T::FD2,
         "A_R X = -A_L X / w_L - (2 eps / w_L^3) <(A_L - tau J_L) T_L, X>_L T_L - (2 tau / w_L) <T_L,X>_L J_L T_L", "",
         shape_R},
        {IdentityId::SHAPE_L, srf, T::FD2,
         "A_L X = -A_R X / w_R + (2 eps / w_R^3) <(A_R + tau J_R) T_R, X>_R T_R - (2 tau / w_R) <T_R,X>_R J_R T_R", "",
         shape_L},
        {IdentityId::BILINEAR_R, srf, T::FD2,
         "<A_R X,Y>_R = -(1/w_L)(<A_L X,Y>_L - tau(<J_L X,Y>_R + <J_L Y,X>_R))", "",
         [](const IdentityContext& c) { return bilinear(c, R); }},
        {IdentityId::BILINEAR_L, srf, T::FD2,
         "<A_L X,Y>_L = -(1/w_R)(<A_R X,Y>_R + tau(<J_R X,Y>_L + <J_R Y,X>_L))", "",
         [](const IdentityContext& c) { return bilinear(c, L); }},
        {IdentityId::INT1_L, srf, T::FD2, "nabla^L_X T_L = eps <N_L,xi>_L (A_L X + tau J_L X)", "",
         [](const IdentityContext& c) { return int1(c, L); }},
        {IdentityId::INT2_L, srf, T::FD2, "X<N_L,xi>_L = -<(A_L - tau J_L) T_L, X>_L", "",
         [](const IdentityContext& c) { return int2(c, L); }},
        {IdentityId::INT1_R, srf, T::FD2, "nabla^R_X T_R = <N_R,xi>_R (A_R X - tau J_R X)", "",
         [](const IdentityContext& c) { return int1(c, R); }},
        {IdentityId::INT2_R, srf, T::FD2, "X<N_R,xi>_R = -<(A_R + tau J_R) T_R, X>_R", "",
         [](const IdentityContext& c) { return int2(c, R); }},
        {IdentityId::MEANCURV_L, srf, T::FD2, "H_L = -(eps/w_R) H_R + (1/w_R^3) <A_R T_R, T_R>_R", "", meancurv_L},
        {IdentityId::MEANCURV_R, srf, T::FD2, "H_R = -(eps/w_L) H_L - (eps/w_L^3) <A_L T_L, T_L>_L", "", meancurv_R},
        {IdentityId::NORMCURV, srf, T::FD2,
         "eps_v lambda^L_v = -(|v|_R^2 / (w_R |v|_L^2)) (lambda^R_v + 2 tau <t_R, J_R t_R>_L)",
         "lambda^L_v = eps_v <A_L t_L, t_L>_L with eps_v = sign <v,v>_L taken literally; |v|_L^2 = |<v,v>_L|; null "
         "directions skipped",
         normcurv},
        {IdentityId::SECTIONAL_REL, srf, T::ALGEBRAIC, "Kbar_R = (tau^2 (w_L^2 - eps A) + A Kbar_L) / w_L^2",
         "A = (kappa - 4 tau^2)/(kappa + 4 tau^2); sectional curvatures from the curvature tensors", sectional_rel},
        {IdentityId::EXTRINSIC_REL, srf, T::FD2,
         "det A_L = -(eps/w_R^4) det A_R + (4 tau eps / w_R^4)(<A_R T_R, J_R T_R>_R + tau |T_R|_R^4)",
         "determinants of the shape operators as endomorphisms; the tau^2 term carries |T_R|^4 (the |T_R|^2 "
         "form fails numerically off Hopf surfaces)",
         extrinsic_rel},
        {IdentityId::GAUSS_R, srf, T::FD2, "K_R = tau^2 + (kappa - 4 tau^2) <N_R,xi>_R^2 + Ke_R",
         "K_R = Kbar_R + Ke_R with Kbar_R from the curvature tensor", [](const IdentityContext& c) {
             return gauss(c, R);
         }},
        {IdentityId::GAUSS_L, srf, T::FD2, "K_L = eps tau^2 + (kappa + 4 tau^2) <N_L,xi>_L^2 + eps Ke_L",
         "K_L = Kbar_L + eps Ke_L; Ke_L = det of <A_L e_i, e_j>_L on an L-orthonormal basis",
         [](const IdentityContext& c) { return gauss(c, L); }},
        {IdentityId::COMBINED_516, srf, T::FD2,
         "w_L^2 K_R - A K_L = (w_L^2 - eps A) tau^2 - eps A Ke_L + w_L^2 Ke_R", "", combined},
    };
}

}  // namespace

const char* to_string(IdentityId id) {
    switch (id) {
        case IdentityId::METRIC_SUM: return "METRIC_SUM";
        case IdentityId::METRIC_DIFF: return "METRIC_DIFF";
        case IdentityId::CONN_DIFF: return "CONN_DIFF";
        case IdentityId::KILLING_R: return "KILLING_R";
        case IdentityId::KILLING_L: return "KILLING_L";
        case IdentityId::NORMAL_TRANSFORM: return "NORMAL_TRANSFORM";
        case IdentityId::NORMAL_PAIRING: return "NORMAL_PAIRING";
        case IdentityId::OMEGA_PRODUCT: return "OMEGA_PRODUCT";
        case IdentityId::T_RELATION: return "T_RELATION";
        case IdentityId::SHAPE_R: return "SHAPE_R";
        case IdentityId::SHAPE_L: return "SHAPE_L";
        case IdentityId::BILINEAR_R: return "BILINEAR_R";
        case IdentityId::BILINEAR_L: return "BILINEAR_L";
        case IdentityId::INT1_L: return "INT1_L";
        case IdentityId::INT2_L: return "INT2_L";
        case IdentityId::INT1_R: return "INT1_R";
        case IdentityId::INT2_R: return "INT2_R";
        case IdentityId::MEANCURV_L: return "MEANCURV_L";
        case IdentityId::MEANCURV_R: return "MEANCURV_R";
        case IdentityId::NORMCURV: return "NORMCURV";
        case IdentityId::SECTIONAL_REL: return "SECTIONAL_REL";
        case IdentityId::EXTRINSIC_REL: return "EXTRINSIC_REL";
        case IdentityId::GAUSS_R: return "GAUSS_R";
        case IdentityId::GAUSS_L: return "GAUSS_L";
        case IdentityId::COMBINED_516: return "COMBINED_516";
    }
    return "?";
}

std::optional<IdentityId> identity_from_string(const std::string& name) {
    for (const auto& info : identity_registry())
        if (name == to_string(info.id)) return info.id;
    return std::nullopt;
}

const char* to_string(Tier t) {
    switch (t) {
        case Tier::ALGEBRAIC: return "ALGEBRAIC";
        case Tier::FD1: return "FD1";
        case Tier::FD2: return "FD2";
    }
    return "?";
}

double tier_tolerance(Tier t) {
    switch (t) {
        case Tier::ALGEBRAIC: return 1e-9;
        case Tier::FD1: return 1e-5;
        case Tier::FD2: return 1e-4;
    }
    return 0;
}

const std::vector<IdentityInfo>& identity_registry() {
    static const std::vector<IdentityInfo> reg = build_registry();
    return reg;
}

const IdentityInfo& identity_info(IdentityId id) { return identity_registry().at(static_cast<size_t>(id)); }

double identity_residual(IdentityId id, const IdentityContext& ctx) { return identity_info(id).residual(ctx); }

double rel_residual(double lhs, double rhs) {
    return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

double rel_residual(const Vec3& lhs, const Vec3& rhs) {
    return (lhs - rhs).norm() / std::max({1.0, lhs.norm(), rhs.norm()});
}

IndefinitenessResult indefiniteness_check(const TwoMetricFrameData& d, double h_tol) {
    if (std::abs(d.H_R - d.H_L) > h_tol)
        throw Error(ErrorCode::HYPOTHESIS_VIOLATED, "H_R and H_L differ at the point");
    IndefinitenessResult r;
    r.det_A_R = d.A_R.determinant();
    const double kmax = std::abs(d.H_R) + std::sqrt(std::max(0.0, d.H_R * d.H_R - r.det_A_R));
    const double scale = std::max(1.0, kmax);
    r.det_bound = 1e-8 * scale * scale;
    r.pass = r.det_A_R <= r.det_bound;
    const double tn = norm_R(d.T_R);
    if (tn > 1e-6 && std::abs(d.omega_L - 1) > 1e-6) {
        const Vec3 v = d.T_R / tn;
        const Vec3 jv = J(d, R, v);
        const double lv = inner(R, apply_shape(d, R, v), v);
        const double ljv = inner(R, apply_shape(d, R, jv), jv);
        const double w = d.omega_L;
        r.ratio_checked = true;
        r.ratio_residual = rel_residual(lv, -((1 - w) / (1 - w * w * w)) * ljv);
        r.pass = r.pass && r.ratio_residual < 1e-5;
    }
    return r;
}

namespace {

Vec3 ruling_field(const PointGeometry& g) {
    const Vec3 e1 = g.T_R / norm_R(g.T_R);
    return wedge(R, g.N_R, e1);
}

}  // namespace

RulingResult ruling_residual(const Ambient& amb, const SurfaceImmersion& s, const TwoMetricFrameData& d,
                             const EngineOptions& opt, double h_tol) {
    if (std::abs(d.H_R) > h_tol || std::abs(d.H_L) > h_tol)
        throw Error(ErrorCode::HYPOTHESIS_VIOLATED, "surface is not minimal for both metrics at the point");
    if (norm_R(d.T_R) <= 1e-6) throw Error(ErrorCode::T_R_VANISHES, "T_R vanishes; horizontal slice branch");
    RulingResult r;
    r.e2 = ruling_field(d);
    const Vec2 c = tangent_coeffs(d, r.e2);
    const double h = opt.h;
    const auto gp = oriented_point_geometry(amb, s, d.jet.uv + h * c, d.N_L, opt.h, opt.orientation);
    const auto gm = oriented_point_geometry(amb, s, d.jet.uv - h * c, d.N_L, opt.h, opt.orientation);
    const Vec3 de2 = (ruling_field(gp) - ruling_field(gm)) / (2 * h);
    for (Signature sig : {R, L}) {
        const Vec3 acc = de2 + amb.table(sig, d.jet.p).contract(r.e2, r.e2);
        const Vec3 defect = acc - inner(sig, acc, r.e2) / inner(sig, r.e2, r.e2) * r.e2;
        (sig == R ? r.defect_R : r.defect_L) = defect.norm();
    }
    return r;
}

namespace {

Mat2 induced_metric(const Ambient& amb, const SurfaceImmersion& s, const Vec2& uv, Signature sig, double h) {
    const SurfaceJet j = surface_jet(s, uv, h);
    const Vec3 a = amb.frame_components(j.p, j.du), b = amb.frame_components(j.p, j.dv);
    Mat2 g;
    g(0, 0) = inner(sig, a, a);
    g(0, 1) = g(1, 0) = inner(sig, a, b);
    g(1, 1) = inner(sig, b, b);
    return g;
}

struct MetricJet {
    Mat2 g, gu, gv, guu, guv, gvv;
};

MetricJet metric_jet(const Ambient& amb, const SurfaceImmersion& s, const Vec2& uv, Signature sig,
                     const EngineOptions& opt) {
    const double H = opt.h2;
    auto g = [&](double du, double dv) { return induced_metric(amb, s, uv + Vec2(du, dv), sig, opt.h); };
    MetricJet m;
    m.g = g(0, 0);
    const Mat2 up = g(H, 0), um = g(-H, 0), vp = g(0, H), vm = g(0, -H);
    m.gu = (up - um) / (2 * H);
    m.gv = (vp - vm) / (2 * H);
    m.guu = (up - 2 * m.g + um) / (H * H);
    m.gvv = (vp - 2 * m.g + vm) / (H * H);
    m.guv = (g(H, H) - g(H, -H) - g(-H, H) + g(-H, -H)) / (4 * H * H);
    return m;
}

}  // namespace

double intrinsic_gauss_curvature(const Ambient& amb, const SurfaceImmersion& s, const Vec2& uv, Signature sig,
                                 const EngineOptions& opt) {
    const MetricJet m = metric_jet(amb, s, uv, sig, opt);
    const double E = m.g(0, 0), F = m.g(0, 1), G = m.g(1, 1);
    const double Eu = m.gu(0, 0), Ev = m.gv(0, 0), Fu = m.gu(0, 1), Fv = m.gv(0, 1), Gu = m.gu(1, 1),
                 Gv = m.gv(1, 1);
    const double Evv = m.gvv(0, 0), Guu = m.guu(1, 1), Fuv = m.guv(0, 1);
    Mat3 a, b;
    a << -0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev, Fv - 0.5 * Gu, E, F, 0.5 * Gv, F, G;
    b << 0, 0.5 * Ev, 0.5 * Gu, 0.5 * Ev, E, F, 0.5 * Gu, F, G;
    const double det = E * G - F * F;
    return (a.determinant() - b.determinant()) / (det * det);
}

CurvatureRecord curvature_suite(const Ambient& amb, const SurfaceImmersion& s, const TwoMetricFrameData& d,
                                bool intrinsic_oracle, const EngineOptions& opt) {
    const auto& prm = amb.params();
    const double t2 = prm.tau * prm.tau, w2 = d.omega_L * d.omega_L, e = d.eps;
    CurvatureRecord c;
    c.Ke_R = extrinsic_curvature(d, R);
    c.Ke_L = extrinsic_curvature(d, L);
    const auto k = sectional_tensor(prm, d);
    c.Kbar_R = k.Kbar_R;
    c.Kbar_L = k.Kbar_L;
    c.Kbar_R_closed = t2 + (prm.kappa - 4 * t2) * d.angle_R * d.angle_R;
    c.Kbar_L_closed = e * t2 + (prm.kappa + 4 * t2) * d.angle_L * d.angle_L;
    c.K_R = c.Kbar_R + c.Ke_R;
    c.K_L = c.Kbar_L + e * c.Ke_L;

    SurfaceSample ss;
    ss.amb = &amb;
    ss.surface = &s;
    ss.data = &d;
    IdentityContext ctx{nullptr, &ss};
    c.extrinsic_residual = extrinsic_rel(ctx);
    c.gauss_R_residual = rel_residual(c.K_R, c.Kbar_R_closed + c.Ke_R);
    c.gauss_L_residual = rel_residual(c.K_L, c.Kbar_L_closed + e * c.Ke_L);
    if (prm.kappa + 4 * t2 != 0.0) {
        const double A = prm.A();
        c.sectional_residual = sectional_rel(ctx);
        c.combined_residual =
            rel_residual(w2 * c.K_R - A * c.K_L, (w2 - e * A) * t2 - e * A * c.Ke_L + w2 * c.Ke_R);
    }
    if (intrinsic_oracle) {
        c.K_R_intrinsic = intrinsic_gauss_curvature(amb, s, d.jet.uv, R, opt);
        // K_L is normalized as <R(e1,e2)e1,e2>_L with <e2,e2>_L = -eps, i.e. -eps times R_1212 / det g
        c.K_L_intrinsic = -e * intrinsic_gauss_curvature(amb, s, d.jet.uv, L, opt);
        c.intrinsic_R_residual = rel_residual(*c.K_R_intrinsic, c.K_R);
        c.intrinsic_L_residual = rel_residual(*c.K_L_intrinsic, c.K_L);
    }
    return c;
}

double gauss_formula_residual(const Ambient& amb, const SurfaceImmersion& s, const TwoMetricFrameData& d,
                              Signature sig, const EngineOptions& opt) {
    const double h = opt.h;
    const Vec2 uv = d.jet.uv;
    // nabla_{d/du} d/dv in frame components
    const SurfaceJet jp = surface_jet(s, uv + Vec2(h, 0), h), jm = surface_jet(s, uv - Vec2(h, 0), h);
    const Vec3 dxv = (amb.frame_components(jp.p, d.jet.dv) - amb.frame_components(jm.p, d.jet.dv)) / (2 * h) +
                     amb.frame_components(d.jet.p, d.jet.duv);
    const Vec3 cov = dxv + amb.table(sig, d.jet.p).contract(d.xu, d.xv);
    const Mat2& G = gram(d, sig);
    const Vec2 tang = G.lu().solve(Vec2(inner(sig, cov, d.xu), inner(sig, cov, d.xv)));

    const MetricJet m = metric_jet(amb, s, uv, sig, opt);
    // Gamma^m_uv = 1/2 g^{mi} (d_u g_iv + d_v g_iu - d_i g_uv)
    Vec2 low;
    low[0] = 0.5 * (m.gu(0, 1) + m.gv(0, 0) - m.gu(0, 1));
    low[1] = 0.5 * (m.gu(1, 1) + m.gv(1, 0) - m.gv(0, 1));
    const Vec2 gam = m.g.lu().solve(low);
    return (tang - gam).norm() / std::max({1.0, tang.norm(), gam.norm()});
}

}  // namespace bicausal
