#include "bicausal/space.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace bicausal {

std::string_view to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::DOMAIN_VIOLATION: return "DOMAIN_VIOLATION";
        case ErrorCode::BASE_MISMATCH: return "BASE_MISMATCH";
        case ErrorCode::NUMERIC_FAILURE: return "NUMERIC_FAILURE";
        case ErrorCode::IMMERSION_FAILURE: return "IMMERSION_FAILURE";
        case ErrorCode::DEGENERATE_INPUT: return "DEGENERATE_INPUT";
        case ErrorCode::SIGN_AMBIGUOUS: return "SIGN_AMBIGUOUS";
        case ErrorCode::ORIENTATION_FLIP: return "ORIENTATION_FLIP";
        case ErrorCode::NON_TANGENT: return "NON_TANGENT";
        case ErrorCode::NULL_DIRECTION: return "NULL_DIRECTION";
        case ErrorCode::MISSING_CONTEXT: return "MISSING_CONTEXT";
        case ErrorCode::PARAMETER_SINGULARITY: return "PARAMETER_SINGULARITY";
        case ErrorCode::HYPOTHESIS_VIOLATED: return "HYPOTHESIS_VIOLATED";
        case ErrorCode::T_R_VANISHES: return "T_R_VANISHES";
        case ErrorCode::CURVE_SINGULAR: return "CURVE_SINGULAR";
        case ErrorCode::TAU_NONZERO: return "TAU_NONZERO";
        case ErrorCode::MODEL_MISMATCH: return "MODEL_MISMATCH";
        case ErrorCode::CONFIG_INVALID: return "CONFIG_INVALID";
        case ErrorCode::UNSUPPORTED_FORMAT: return "UNSUPPORTED_FORMAT";
    }
    return "UNKNOWN";
}

const char* to_string(Signature s) { return s == Signature::RIEMANNIAN ? "R" : "L"; }

SpaceParams SpaceParams::make(double kappa, double tau) {
    if (!std::isfinite(kappa) || !std::isfinite(tau))
        throw Error(ErrorCode::CONFIG_INVALID, "non-finite space parameters");
    SpaceParams p;
    p.kappa = kappa;
    p.tau = tau;
    if (tau != 0.0) p.sigma = kappa / (2.0 * tau);
    if (kappa < 0.0) p.disk_radius = 2.0 / std::sqrt(-kappa);
    return p;
}

double SpaceParams::A() const {
    const double den = kappa + 4 * tau * tau;
    if (den == 0.0) throw Error(ErrorCode::PARAMETER_SINGULARITY, "kappa + 4 tau^2 = 0");
    return (kappa - 4 * tau * tau) / den;
}

double default_fd_step() {
    if (const char* s = std::getenv("BICAUSAL_FD_STEP")) {
        char* end = nullptr;
        double h = std::strtod(s, &end);
        if (end != s && std::isfinite(h) && h > 0 && h < 0.1) return h;
    }
    return 1e-4;
}

double inner(Signature s, const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + frame_sign(s) * a[2] * b[2];
}

// <u ^ v, w> = det(u, v, w) for all w, so u ^ v = eta^-1 (u x v).
Vec3 wedge(Signature s, const Vec3& a, const Vec3& b) {
    Vec3 c = a.cross(b);
    c[2] *= frame_sign(s);
    return c;
}

std::pair<Vec3, Vec3> hv_split(const Vec3& x) {
    return {Vec3(x[0], x[1], 0.0), Vec3(0.0, 0.0, x[2])};
}

Vec3 difference_tensor_W(double tau, const Vec3& x, const Vec3& y) {
    auto [xh, xv] = hv_split(x);
    auto [yh, yv] = hv_split(y);
    return 2.0 * tau * (xh.cross(yv) - xv.cross(yh));
}

Vec3 curvature_tensor(const SpaceParams& prm, Signature s, const Vec3& x, const Vec3& y, const Vec3& z) {
    const double k = prm.kappa, t2 = prm.tau * prm.tau;
    const Vec3 xi = xi_frame();
    auto ip = [s](const Vec3& a, const Vec3& b) { return inner(s, a, b); };
    double c1, c2;
    if (s == Signature::RIEMANNIAN) {
        c1 = k - 3 * t2;
        c2 = k - 4 * t2;
    } else {
        c1 = k + 3 * t2;
        c2 = -(k + 4 * t2);
    }
    return c1 * (ip(x, z) * y - ip(y, z) * x) + c2 * ip(z, xi) * (ip(y, xi) * x - ip(x, xi) * y) +
           c2 * (ip(y, z) * ip(x, xi) - ip(x, z) * ip(y, xi)) * xi;
}

void check_domain(const SpaceParams& prm, const Vec3& p) {
    if (!p.allFinite()) throw Error(ErrorCode::DOMAIN_VIOLATION, "non-finite point");
    if (prm.kappa < 0) {
        const double r2 = p[0] * p[0] + p[1] * p[1];
        const double R = *prm.disk_radius;
        if (r2 > (1.0 - kDomainMargin) * R * R)
            throw Error(ErrorCode::DOMAIN_VIOLATION,
                        "x^2+y^2=" + std::to_string(r2) + " outside disk of radius " + std::to_string(R));
    }
}

double conformal_factor(const SpaceParams& prm, const Vec3& p) {
    check_domain(prm, p);
    return 1.0 / (1.0 + 0.25 * prm.kappa * (p[0] * p[0] + p[1] * p[1]));
}

Mat3 frame_matrix(const SpaceParams& prm, const Vec3& p) {
    const double lam = conformal_factor(prm, p);
    const double x = p[0], y = p[1];
    Mat3 F = Mat3::Zero();
    if (prm.tau == 0.0) {
        F(0, 0) = 1.0 / lam;
        F(1, 1) = 1.0 / lam;
        F(2, 2) = 1.0;
        return F;
    }
    const double t = prm.tau, sz = *prm.sigma * p[2];
    const double c = std::cos(sz), s = std::sin(sz);
    F.col(0) << c / lam, s / lam, t * (x * s - y * c);
    F.col(1) << -s / lam, c / lam, t * (x * c + y * s);
    F.col(2) << 0, 0, 1;
    return F;
}

Mat3 coordinate_metric(const SpaceParams& prm, Signature s, const Vec3& p) {
    const double lam = conformal_factor(prm, p);
    const Vec3 theta(prm.tau * lam * p[1], -prm.tau * lam * p[0], 1.0);
    Mat3 g = Mat3::Zero();
    g(0, 0) = g(1, 1) = lam * lam;
    g += frame_sign(s) * theta * theta.transpose();
    return g;
}

AmbientVector AmbientVector::from_coord(const SpaceParams& prm, const Vec3& base, const Vec3& c) {
    check_domain(prm, base);
    AmbientVector v(prm, base);
    v.coord_ = c;
    return v;
}

AmbientVector AmbientVector::from_frame(const SpaceParams& prm, const Vec3& base, const Vec3& f) {
    check_domain(prm, base);
    AmbientVector v(prm, base);
    v.frame_ = f;
    return v;
}

Vec3 AmbientVector::coord() const {
    if (coord_) return *coord_;
    return frame_matrix(prm_, base_) * *frame_;
}

Vec3 AmbientVector::frame() const {
    if (frame_) return *frame_;
    return frame_matrix(prm_, base_).lu().solve(*coord_);
}

void require_same_base(const AmbientVector& u, const AmbientVector& v) {
    if ((u.base() - v.base()).norm() > 1e-14 * (1.0 + u.base().norm()))
        throw Error(ErrorCode::BASE_MISMATCH, "vectors live at different points");
}

double metric_eval(const SpaceParams&, Signature s, const AmbientVector& u, const AmbientVector& v) {
    require_same_base(u, v);
    return inner(s, u.frame(), v.frame());
}

double metric_eval_coord(const SpaceParams& prm, Signature s, const AmbientVector& u, const AmbientVector& v) {
    require_same_base(u, v);
    return u.coord().dot(coordinate_metric(prm, s, u.base()) * v.coord());
}

std::array<AmbientVector, 3> canonical_frame(const SpaceParams& prm, const Vec3& p) {
    return {AmbientVector::from_frame(prm, p, Vec3::UnitX()), AmbientVector::from_frame(prm, p, Vec3::UnitY()),
            AmbientVector::from_frame(prm, p, Vec3::UnitZ())};
}

AmbientVector wedge(const SpaceParams& prm, Signature s, const AmbientVector& u, const AmbientVector& v) {
    require_same_base(u, v);
    return AmbientVector::from_frame(prm, u.base(), wedge(s, u.frame(), v.frame()));
}

AmbientVector difference_tensor_W(const SpaceParams& prm, const AmbientVector& x, const AmbientVector& y) {
    require_same_base(x, y);
    return AmbientVector::from_frame(prm, x.base(), difference_tensor_W(prm.tau, x.frame(), y.frame()));
}

std::pair<AmbientVector, AmbientVector> hv_split(const SpaceParams& prm, const AmbientVector& x) {
    auto [h, v] = hv_split(x.frame());
    return {AmbientVector::from_frame(prm, x.base(), h), AmbientVector::from_frame(prm, x.base(), v)};
}

AmbientVector curvature_tensor(const SpaceParams& prm, Signature s, const AmbientVector& x, const AmbientVector& y,
                               const AmbientVector& z) {
    require_same_base(x, y);
    require_same_base(x, z);
    return AmbientVector::from_frame(prm, x.base(), curvature_tensor(prm, s, x.frame(), y.frame(), z.frame()));
}

Vec3 ConnectionTable::contract(const Vec3& x, const Vec3& y) const {
    Vec3 r = Vec3::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r += x[i] * y[j] * c[i][j];
    return r;
}

ConnectionTable connection_table(const SpaceParams& prm, Signature s, const Vec3& p) {
    ConnectionTable T;
    T.signature = s;
    const Vec3 e1 = Vec3::UnitX(), e2 = Vec3::UnitY(), e3 = Vec3::UnitZ();
    if (prm.tau == 0.0) {
        check_domain(prm, p);
        const double hx = 0.5 * prm.kappa * p[0], hy = 0.5 * prm.kappa * p[1];
        T.c[0][0] = hy * e2;
        T.c[0][1] = -hy * e1;
        T.c[1][0] = -hx * e2;
        T.c[1][1] = hx * e1;
        return T;
    }
    const double t = prm.tau, k = prm.kappa;
    T.c[0][1] = t * e3;
    T.c[1][0] = -t * e3;
    if (s == Signature::RIEMANNIAN) {
        const double m = (k - 2 * t * t) / (2 * t);
        T.c[0][2] = -t * e2;
        T.c[1][2] = t * e1;
        T.c[2][0] = m * e2;
        T.c[2][1] = -m * e1;
    } else {
        const double m = (k + 2 * t * t) / (2 * t);
        T.c[0][2] = t * e2;
        T.c[1][2] = -t * e1;
        T.c[2][0] = m * e2;
        T.c[2][1] = -m * e1;
    }
    return T;
}

AmbientVector covariant_derivative(const SpaceParams& prm, Signature s, const FrameField& x, const FrameField& y,
                                   const Vec3& p, double h) {
    check_domain(prm, p);
    const Vec3 xf = x(p);
    const Vec3 yf = y(p);
    const Vec3 xc = frame_matrix(prm, p) * xf;
    const double n = xc.norm();
    Vec3 dy = Vec3::Zero();
    if (n > 0) {
        const double step = h / n;
        dy = (y(p + step * xc) - y(p - step * xc)) / (2 * step);
    }
    if (!dy.allFinite()) throw Error(ErrorCode::NUMERIC_FAILURE, "non-finite directional derivative");
    return AmbientVector::from_frame(prm, p, dy + connection_table(prm, s, p).contract(xf, yf));
}

std::array<Mat3, 3> christoffel_fd(const SpaceParams& prm, Signature s, const Vec3& p, double h) {
    std::array<Mat3, 3> dg;  // dg[a] = d g / d x^a
    for (int a = 0; a < 3; ++a) {
        Vec3 e = Vec3::Zero();
        e[a] = h;
        dg[a] = (coordinate_metric(prm, s, p + e) - coordinate_metric(prm, s, p - e)) / (2 * h);
    }
    const Mat3 ginv = coordinate_metric(prm, s, p).inverse();
    std::array<Mat3, 3> gam;
    for (int c = 0; c < 3; ++c) {
        gam[c].setZero();
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                double acc = 0;
                for (int d = 0; d < 3; ++d) acc += ginv(c, d) * (dg[a](d, b) + dg[b](d, a) - dg[d](a, b));
                gam[c](a, b) = 0.5 * acc;
            }
    }
    for (const auto& m : gam)
        if (!m.allFinite()) throw Error(ErrorCode::NUMERIC_FAILURE, "non-finite Christoffel symbols");
    return gam;
}

Vec3 koszul_fd_oracle(const SpaceParams& prm, Signature s, const Vec3& p, int i, int j, double h) {
    check_domain(prm, p);
    const auto gam = christoffel_fd(prm, s, p, h);
    const Mat3 F = frame_matrix(prm, p);
    const Vec3 ei = F.col(i), ej = F.col(j);
    // directional derivative of E_j's coordinate components along E_i
    const Vec3 dej = (frame_matrix(prm, p + h * ei).col(j) - frame_matrix(prm, p - h * ei).col(j)) / (2 * h);
    Vec3 r = dej;
    for (int c = 0; c < 3; ++c) r[c] += ei.dot(gam[c] * ej);
    return F.lu().solve(r);
}

Vec3 lie_bracket_fd(const SpaceParams& prm, const Vec3& p, int i, int j, double h) {
    check_domain(prm, p);
    const Mat3 F = frame_matrix(prm, p);
    const Vec3 ei = F.col(i), ej = F.col(j);
    const Vec3 dej = (frame_matrix(prm, p + h * ei).col(j) - frame_matrix(prm, p - h * ei).col(j)) / (2 * h);
    const Vec3 dei = (frame_matrix(prm, p + h * ej).col(i) - frame_matrix(prm, p - h * ej).col(i)) / (2 * h);
    return F.lu().solve(dej - dei);
}

Vec3 curvature_fd_oracle(const SpaceParams& prm, Signature s, const Vec3& p, const Vec3& x, const Vec3& y,
                         const Vec3& z, double h1, double h2) {
    check_domain(prm, p);
    const auto gam = christoffel_fd(prm, s, p, h1);
    std::array<std::array<Mat3, 3>, 3> dgam;  // dgam[c][a] = d Gamma^a / d x^c
    for (int c = 0; c < 3; ++c) {
        Vec3 e = Vec3::Zero();
        e[c] = h2;
        const auto gp = christoffel_fd(prm, s, p + e, h1);
        const auto gm = christoffel_fd(prm, s, p - e, h1);
        for (int a = 0; a < 3; ++a) dgam[c][a] = (gp[a] - gm[a]) / (2 * h2);
    }
    const Mat3 F = frame_matrix(prm, p);
    const Vec3 X = F * x, Y = F * y, Z = F * z;
    // standard R^a_{bcd} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{ce} G^e_{db} - G^a_{de} G^e_{cb}
    Vec3 r = Vec3::Zero();
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) {
                    double R = dgam[c][a](d, b) - dgam[d][a](c, b);
                    for (int e = 0; e < 3; ++e) R += gam[a](c, e) * gam[e](d, b) - gam[a](d, e) * gam[e](c, b);
                    r[a] += R * X[c] * Y[d] * Z[b];
                }
    // our convention is the negative of the standard one
    return F.lu().solve(-r);
}

}  // namespace bicausal
