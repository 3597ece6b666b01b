#include "bicausal/surface.hpp"

#include <algorithm>
#include <cmath>

namespace bicausal {

const char* to_string(Character c) {
    switch (c) {
        case Character::SPACELIKE: return "SPACELIKE";
        case Character::TIMELIKE: return "TIMELIKE";
        case Character::DEGENERATE: return "DEGENERATE";
    }
    return "?";
}

SurfaceJet surface_jet(const SurfaceImmersion& s, const Vec2& uv, double h) {
    if (!s.admits(uv, 4 * h))
        throw Error(ErrorCode::DOMAIN_VIOLATION, "parameter point too close to the chart boundary");
    const double u = uv[0], v = uv[1];
    SurfaceJet j;
    j.uv = uv;
    j.p = s.chart(u, v);
    if (s.jacobian) {
        auto [fu, fv] = s.jacobian(u, v);
        auto [fu_p, fv_p] = s.jacobian(u + h, v);
        auto [fu_m, fv_m] = s.jacobian(u - h, v);
        auto [gu_p, gv_p] = s.jacobian(u, v + h);
        auto [gu_m, gv_m] = s.jacobian(u, v - h);
        j.du = fu;
        j.dv = fv;
        j.duu = (fu_p - fu_m) / (2 * h);
        j.dvv = (gv_p - gv_m) / (2 * h);
        j.duv = 0.5 * ((fv_p - fv_m) / (2 * h) + (gu_p - gu_m) / (2 * h));
    } else {
        const VecX fpu = s.chart(u + h, v), fmu = s.chart(u - h, v);
        const VecX fpv = s.chart(u, v + h), fmv = s.chart(u, v - h);
        j.du = (fpu - fmu) / (2 * h);
        j.dv = (fpv - fmv) / (2 * h);
        j.duu = (fpu - 2 * j.p + fmu) / (h * h);
        j.dvv = (fpv - 2 * j.p + fmv) / (h * h);
        j.duv = (s.chart(u + h, v + h) - s.chart(u + h, v - h) - s.chart(u - h, v + h) + s.chart(u - h, v - h)) /
                (4 * h * h);
    }
    const double area2 = j.du.squaredNorm() * j.dv.squaredNorm() - std::pow(j.du.dot(j.dv), 2);
    if (!(area2 > 1e-20)) throw Error(ErrorCode::IMMERSION_FAILURE, "du and dv are linearly dependent");
    return j;
}

namespace {

Mat2 gram_of(Signature s, const Vec3& a, const Vec3& b) {
    Mat2 g;
    g(0, 0) = inner(s, a, a);
    g(0, 1) = g(1, 0) = inner(s, a, b);
    g(1, 1) = inner(s, b, b);
    return g;
}

CausalCharacter classify(const Vec3& a, const Vec3& b) {
    const Mat2 gL = gram_of(Signature::LORENTZIAN, a, b);
    const double det = gL.determinant();
    const double scale2 = a.squaredNorm() * b.squaredNorm();
    if (std::abs(det) <= kDegenerateTol * scale2) return {Character::DEGENERATE, 0};
    if (det < 0) return {Character::TIMELIKE, +1};
    if (gL(0, 0) > 0) return {Character::SPACELIKE, -1};
    throw Error(ErrorCode::NUMERIC_FAILURE, "negative definite induced Lorentzian metric");
}

// N_R from N_L. With <N_L, xi>_L <= 0 this is (1/w)(sqrt(2(w^2-eps)) xi - N_L); the signed form
// below agrees there and continues smoothly across <N_L, xi>_L = 0 on FD stencils.
Vec3 transform_normal(const Vec3& nL, double omega) {
    return Vec3(-nL[0], -nL[1], nL[2]) / omega;
}

void fill_from_normal(PointGeometry& g, const Vec3& nL) {
    g.N_L = nL;
    g.angle_L = inner(Signature::LORENTZIAN, nL, xi_frame());
    g.omega_L = std::sqrt(g.eps + 2 * g.angle_L * g.angle_L);
    g.omega_R = 1.0 / g.omega_L;
    g.N_R = transform_normal(nL, g.omega_L);
    g.angle_R = inner(Signature::RIEMANNIAN, g.N_R, xi_frame());
    g.T_R = xi_frame() - g.angle_R * g.N_R;
    g.T_L = xi_frame() - g.eps * g.angle_L * g.N_L;
}

}  // namespace

CausalCharacter causal_character(const Ambient& amb, const SurfaceJet& jet) {
    return classify(amb.frame_components(jet.p, jet.du), amb.frame_components(jet.p, jet.dv));
}

PointGeometry point_geometry(const Ambient& amb, const SurfaceJet& jet, int orientation) {
    amb.check_point(jet.p);
    PointGeometry g;
    g.jet = jet;
    g.xu = amb.frame_components(jet.p, jet.du);
    g.xv = amb.frame_components(jet.p, jet.dv);
    g.gR = gram_of(Signature::RIEMANNIAN, g.xu, g.xv);
    g.gL = gram_of(Signature::LORENTZIAN, g.xu, g.xv);
    g.ch = classify(g.xu, g.xv);
    if (g.ch.tag == Character::DEGENERATE) throw Error(ErrorCode::DEGENERATE_INPUT, "lightlike tangent plane");
    g.eps = g.ch.eps;

    const Vec3 wL = wedge(Signature::LORENTZIAN, g.xu, g.xv);
    const Vec3 nL = wL / std::sqrt(std::abs(inner(Signature::LORENTZIAN, wL, wL)));
    if (std::abs(nL[2]) <= kAmbiguousTol) {
        g.sign_ambiguous = true;
        g.wedge_sign = orientation >= 0 ? +1 : -1;
    } else {
        g.wedge_sign = nL[2] > 0 ? +1 : -1;  // <N_L, xi>_L = -n3 <= 0
    }
    fill_from_normal(g, g.wedge_sign * nL);

    // independent route: normalize the Riemannian wedge, <N_R, xi>_R >= 0
    const Vec3 wR = wedge(Signature::RIEMANNIAN, g.xu, g.xv).normalized();
    if (std::abs(wR[2]) <= kAmbiguousTol)
        g.N_R_wedge = -g.wedge_sign * wR;
    else
        g.N_R_wedge = wR[2] > 0 ? wR : Vec3(-wR);
    return g;
}

PointGeometry oriented_point_geometry(const Ambient& amb, const SurfaceImmersion& s, const Vec2& uv,
                                      const Vec3& ref_N_L, double h, int orientation) {
    PointGeometry g = point_geometry(amb, surface_jet(s, uv, h), orientation);
    if (g.N_L.dot(ref_N_L) < 0) fill_from_normal(g, -g.N_L);
    return g;
}

const Mat2& gram(const PointGeometry& d, Signature s) { return s == Signature::RIEMANNIAN ? d.gR : d.gL; }

Vec3 tangent_vector(const PointGeometry& d, const Vec2& c) { return c[0] * d.xu + c[1] * d.xv; }

Vec2 tangent_coeffs(const PointGeometry& d, const Vec3& x, double tol) {
    const Vec2 rhs(inner(Signature::RIEMANNIAN, x, d.xu), inner(Signature::RIEMANNIAN, x, d.xv));
    const Vec2 c = d.gR.ldlt().solve(rhs);
    const double off = (x - tangent_vector(d, c)).norm();
    if (off > tol * std::max(1.0, x.norm())) throw Error(ErrorCode::NON_TANGENT, "vector has a normal component");
    return c;
}

Vec3 apply_shape(const TwoMetricFrameData& d, Signature s, const Vec3& x) {
    return tangent_vector(d, shape(d, s) * tangent_coeffs(d, x));
}

Vec3 rotation_J(const PointGeometry& d, Signature s, const Vec3& x) {
    tangent_coeffs(d, x);
    return wedge(s, normal(d, s), x);
}

std::pair<double, double> mean_curvatures(const TwoMetricFrameData& d) {
    return {0.5 * d.A_R.trace(), 0.5 * d.eps * d.A_L.trace()};
}

NormalCurvature normal_curvature(const TwoMetricFrameData& d, Signature s, const Vec3& v) {
    tangent_coeffs(d, v);
    const double q = inner(s, v, v);
    const double scale = v.squaredNorm();
    if (scale == 0.0) throw Error(ErrorCode::NULL_DIRECTION, "zero direction");
    if (s == Signature::LORENTZIAN && std::abs(q) <= 1e-10 * scale)
        throw Error(ErrorCode::NULL_DIRECTION, "lightlike direction");
    const Vec3 t = v / std::sqrt(std::abs(q));
    NormalCurvature r;
    r.eps_v = q > 0 ? 1 : -1;
    r.lambda = (s == Signature::LORENTZIAN ? r.eps_v : 1) * inner(s, apply_shape(d, s, t), t);
    return r;
}

std::pair<Vec3, Vec3> orthonormal_tangent_basis(const PointGeometry& d, Signature s) {
    if (s == Signature::RIEMANNIAN) {
        const Vec3 f1 = d.xu.normalized();
        const Vec3 f2 = (d.xv - f1.dot(d.xv) * f1).normalized();
        return {f1, f2};
    }
    auto unit = [](const Vec3& x) {
        return Vec3(x / std::sqrt(std::abs(inner(Signature::LORENTZIAN, x, x))));
    };
    const double tl = inner(Signature::LORENTZIAN, d.T_L, d.T_L);
    if (std::abs(tl) > 1e-12) {
        // T_L-aligned frame: J_L T_L is spacelike, T_L has sign -eps
        return {unit(rotation_J(d, Signature::LORENTZIAN, d.T_L)), unit(d.T_L)};
    }
    // horizontal spacelike plane: any L-orthonormal pair
    const Vec3 e1 = unit(d.xu);
    const Vec3 w = d.xv - inner(Signature::LORENTZIAN, e1, d.xv) * e1;
    return {e1, unit(w)};
}

double extrinsic_curvature(const TwoMetricFrameData& d, Signature s) {
    if (s == Signature::RIEMANNIAN) return d.A_R.determinant();
    return -d.eps * d.A_L.determinant();
}

namespace {

struct ShapeResult {
    Mat2 M;
    double normal_residual = 0;
};

// Weingarten route: A x_k = -(dN/dk + table(x_k, N)), projected onto the tangent plane.
ShapeResult shape_from_normals(const PointGeometry& c, Signature s, const ConnectionTable& tab,
                               const std::array<Vec3, 2>& dN) {
    const Mat2& G = gram(c, s);
    const Vec3& N = normal(c, s);
    const double nn = inner(s, N, N);
    ShapeResult r;
    const Vec3 x[2] = {c.xu, c.xv};
    for (int k = 0; k < 2; ++k) {
        const Vec3 an = -(dN[k] + tab.contract(x[k], N));
        const Vec2 rhs(inner(s, an, c.xu), inner(s, an, c.xv));
        r.M.col(k) = G.lu().solve(rhs);
        const double resid = std::abs(inner(s, an, N) / nn) / std::max(1.0, an.norm());
        r.normal_residual = std::max(r.normal_residual, resid);
    }
    return r;
}

}  // namespace

TwoMetricFrameData evaluate_point(const Ambient& amb, const SurfaceImmersion& s, const Vec2& uv,
                                  const EngineOptions& opt) {
    const double h = opt.h;
    TwoMetricFrameData d;
    static_cast<PointGeometry&>(d) = point_geometry(amb, surface_jet(s, uv, h), opt.orientation);
    if (d.sign_ambiguous) d.flags.emplace_back("SIGN_AMBIGUOUS");

    // stencil geometry with continuity-fixed orientation
    std::array<std::array<PointGeometry, 2>, 2> st;  // st[k][0] = +h, st[k][1] = -h
    for (int k = 0; k < 2; ++k)
        for (int sgn = 0; sgn < 2; ++sgn) {
            Vec2 q = uv;
            q[k] += (sgn == 0 ? h : -h);
            PointGeometry g = oriented_point_geometry(amb, s, q, d.N_L, h, opt.orientation);
            if (g.eps != d.eps)
                throw Error(ErrorCode::DEGENERATE_INPUT, "causal character changes across the stencil");
            if (!d.sign_ambiguous && g.angle_L > kAmbiguousTol)
                throw Error(ErrorCode::ORIENTATION_FLIP, "<N_L, xi>_L changes sign across the stencil");
            st[k][sgn] = g;
        }

    const ConnectionTable tR = amb.table(Signature::RIEMANNIAN, d.jet.p);
    const ConnectionTable tL = amb.table(Signature::LORENTZIAN, d.jet.p);
    const Vec3 x[2] = {d.xu, d.xv};

    std::array<Vec3, 2> dNL, dNR;
    for (int k = 0; k < 2; ++k) {
        const auto& P = st[k][0];
        const auto& M = st[k][1];
        dNL[k] = (P.N_L - M.N_L) / (2 * h);
        dNR[k] = (P.N_R - M.N_R) / (2 * h);
        d.dT_L[k] = (P.T_L - M.T_L) / (2 * h) + tL.contract(x[k], d.T_L);
        d.dT_R[k] = (P.T_R - M.T_R) / (2 * h) + tR.contract(x[k], d.T_R);
        d.d_angle_L[k] = (P.angle_L - M.angle_L) / (2 * h);
        d.d_angle_R[k] = (P.angle_R - M.angle_R) / (2 * h);
    }
    const ShapeResult sL = shape_from_normals(d, Signature::LORENTZIAN, tL, dNL);
    const ShapeResult sR = shape_from_normals(d, Signature::RIEMANNIAN, tR, dNR);
    d.A_L = sL.M;
    d.A_R = sR.M;
    d.projection_residual_L = sL.normal_residual;
    d.projection_residual_R = sR.normal_residual;

    // second fundamental form route: b_kj = <nabla_{x_k} x_j, N>
    const VecX* cpart[2] = {&d.jet.du, &d.jet.dv};
    std::array<std::array<Vec3, 2>, 2> D;  // D[k][j] = derivative of x_j's frame comps along x_k
    for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j) {
            const VecX& second = (k == 0 && j == 0) ? d.jet.duu : (k == 1 && j == 1) ? d.jet.dvv : d.jet.duv;
            D[k][j] = (amb.frame_components(st[k][0].jet.p, *cpart[j]) -
                       amb.frame_components(st[k][1].jet.p, *cpart[j])) /
                          (2 * h) +
                      amb.frame_components(d.jet.p, second);
        }
    auto bform_shape = [&](Signature sig, const ConnectionTable& tab) {
        const Vec3& N = normal(d, sig);
        Mat2 b;
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j) b(k, j) = inner(sig, D[k][j] + tab.contract(x[k], x[j]), N);
        return Mat2(gram(d, sig).lu().solve(b.transpose()));
    };
    d.A_L_bform = bform_shape(Signature::LORENTZIAN, tL);
    d.A_R_bform = bform_shape(Signature::RIEMANNIAN, tR);
    auto rel = [](const Mat2& a, const Mat2& b) { return (a - b).norm() / std::max(1.0, a.norm()); };
    d.bform_residual_L = rel(d.A_L, d.A_L_bform);
    d.bform_residual_R = rel(d.A_R, d.A_R_bform);
    auto selfadj = [](const Mat2& M, const Mat2& G) {
        const Mat2 B = M.transpose() * G;
        return (B - B.transpose()).norm() / std::max(1.0, B.norm());
    };
    d.selfadjoint_residual_L = selfadj(d.A_L, d.gL);
    d.selfadjoint_residual_R = selfadj(d.A_R, d.gR);

    std::tie(d.H_R, d.H_L) = mean_curvatures(d);
    if (d.ch.tag == Character::SPACELIKE) d.phi = std::acosh(std::max(1.0, -d.angle_L));
    return d;
}

}  // namespace bicausal
