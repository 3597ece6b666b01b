#include "bicausal/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace bicausal {

const char* to_string(GroupTag t) { return t == GroupTag::BERGER_S3 ? "BERGER_S3" : "SU11"; }

// ---------------------------------------------------------------- group models

GroupAmbient::GroupAmbient(GroupTag tag, const SpaceParams& prm) : tag_(tag), prm_(prm) {
    if (prm.tau == 0.0) throw Error(ErrorCode::MODEL_MISMATCH, "group models need tau != 0");
    if (tag == GroupTag::BERGER_S3 && !(prm.kappa > 0))
        throw Error(ErrorCode::MODEL_MISMATCH, "Berger sphere needs kappa > 0");
    if (tag == GroupTag::SU11 && !(prm.kappa < 0)) throw Error(ErrorCode::MODEL_MISMATCH, "SU(1,1) needs kappa < 0");
    c12_ = std::abs(4.0 / prm.kappa);
}

double GroupAmbient::constraint(const VecX& p) const {
    const double zz = p[0] * p[0] + p[1] * p[1], ww = p[2] * p[2] + p[3] * p[3];
    return tag_ == GroupTag::BERGER_S3 ? zz + ww - 1.0 : zz - ww - 1.0;
}

Vec4 GroupAmbient::constraint_gradient(const VecX& p) const {
    const double s = tag_ == GroupTag::BERGER_S3 ? 1.0 : -1.0;
    return Vec4(2 * p[0], 2 * p[1], 2 * s * p[2], 2 * s * p[3]);
}

void GroupAmbient::check_point(const VecX& p) const {
    if (p.size() != 4) throw Error(ErrorCode::MODEL_MISMATCH, "group models expect points in R^4");
    if (!p.allFinite() || std::abs(constraint(p)) > 1e-9)
        throw Error(ErrorCode::MODEL_MISMATCH, "point is off the model manifold");
}

Eigen::Matrix<double, 4, 3> GroupAmbient::fields(const VecX& p) const {
    const double x = p[0], y = p[1], u = p[2], v = p[3];
    Eigen::Matrix<double, 4, 3> X;
    if (tag_ == GroupTag::BERGER_S3) {
        X.col(0) << -u, -v, x, y;   // (-w, z)
        X.col(1) << -v, u, -y, x;   // (iw, iz)
    } else {
        X.col(0) << u, v, x, y;     // (w, z)
        X.col(1) << v, -u, -y, x;   // (-iw, iz)
    }
    X.col(2) << -y, x, v, -u;       // (iz, -iw)
    return X;
}

MatX GroupAmbient::frame(const VecX& p) const {
    if (p.size() != 4) throw Error(ErrorCode::MODEL_MISMATCH, "group models expect points in R^4");
    Eigen::Matrix<double, 4, 3> F = fields(p);
    F.col(0) /= std::sqrt(c12_);
    F.col(1) /= std::sqrt(c12_);
    F.col(2) *= prm_.kappa / (4 * prm_.tau);
    return F;
}

ConnectionTable GroupAmbient::table(Signature s, const VecX&) const {
    return connection_table(prm_, s, Vec3::Zero());
}

double GroupAmbient::metric_modifier(Signature s) const {
    const double x33 = 16 * prm_.tau * prm_.tau / (prm_.kappa * prm_.kappa);
    return frame_sign(s) * x33 / c12_ - 1.0;
}

MatX GroupAmbient::metric(Signature s, const VecX& p) const {
    if (p.size() != 4) throw Error(ErrorCode::MODEL_MISMATCH, "group models expect points in R^4");
    const Eigen::Matrix<double, 4, 3> X = fields(p);
    if (tag_ == GroupTag::BERGER_S3) {
        const Vec4 x3 = X.col(2);
        return c12_ * (Mat4::Identity() + metric_modifier(s) * x3 * x3.transpose());
    }
    Mat4 Phi;
    Phi.leftCols<3>() = X;
    Phi.col(3) = constraint_gradient(p) / 2;
    const double x33 = frame_sign(s) * 16 * prm_.tau * prm_.tau / (prm_.kappa * prm_.kappa);
    const Vec4 eta(c12_, c12_, x33, 1.0);
    const Mat4 Pinv = Phi.inverse();
    return Pinv.transpose() * eta.asDiagonal() * Pinv;
}

// ---------------------------------------------------------------- extended-metric checks

std::array<Mat4, 4> extended_christoffel(const Ambient& amb, Signature s, const VecX& p, double h) {
    std::array<Mat4, 4> dg;
    for (int k = 0; k < 4; ++k) {
        VecX pp = p, pm = p;
        pp[k] += h;
        pm[k] -= h;
        dg[k] = (Mat4(amb.metric(s, pp)) - Mat4(amb.metric(s, pm))) / (2 * h);
    }
    const Mat4 ginv = Mat4(amb.metric(s, p)).inverse();
    std::array<Mat4, 4> gamma;
    for (int c = 0; c < 4; ++c) {
        gamma[c].setZero();
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int d = 0; d < 4; ++d)
                    gamma[c](a, b) += 0.5 * ginv(c, d) * (dg[a](d, b) + dg[b](d, a) - dg[d](a, b));
    }
    return gamma;
}

static Vec4 contract(const std::array<Mat4, 4>& gamma, const Vec4& a, const Vec4& b) {
    Vec4 r;
    for (int c = 0; c < 4; ++c) r[c] = a.dot(gamma[c] * b);
    return r;
}

// Removes the component along the metric normal of the model manifold.
static Vec4 project_to_model(const GroupAmbient& amb, const Mat4& g, const VecX& p, const Vec4& v) {
    const Vec4 n = g.ldlt().solve(amb.constraint_gradient(p));
    return v - (n.dot(g * v) / n.dot(g * n)) * n;
}

Vec3 group_koszul_oracle(const GroupAmbient& amb, Signature s, const VecX& p, int i, int j, double h) {
    const MatX F = amb.frame(p);
    const Vec4 ei = F.col(i);
    const Vec4 dEj = (Vec4(amb.frame(p + h * ei).col(j)) - Vec4(amb.frame(p - h * ei).col(j))) / (2 * h);
    const auto gamma = extended_christoffel(amb, s, p, h);
    const Mat4 g = amb.metric(s, p);
    const Vec4 nab = project_to_model(amb, g, p, dEj + contract(gamma, ei, F.col(j)));
    return amb.frame_components(p, nab);
}

double extended_mean_curvature(const GroupAmbient& amb, const SurfaceImmersion& s, const Vec2& uv, Signature sig,
                               const Vec3& ref_normal, double h) {
    const SurfaceJet jet = surface_jet(s, uv, h);
    const VecX& p = jet.p;
    amb.check_point(p);
    const Mat4 g = amb.metric(sig, p);
    const auto gamma = extended_christoffel(amb, sig, p, h);
    const Vec4 xu = jet.du, xv = jet.dv;

    Eigen::Matrix<double, 3, 4> C;
    C.row(0) = (g * xu).transpose();
    C.row(1) = (g * xv).transpose();
    C.row(2) = amb.constraint_gradient(p).transpose();
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(C, Eigen::ComputeFullV);
    Vec4 N = svd.matrixV().col(3);
    const double nn = N.dot(g * N);
    if (std::abs(nn) < 1e-14) throw Error(ErrorCode::NUMERIC_FAILURE, "null normal in extended metric");
    N /= std::sqrt(std::abs(nn));
    if (ref_normal.squaredNorm() > 0) {
        const Vec4 ref = amb.to_ambient(p, ref_normal);
        if (N.dot(g * ref) * (nn < 0 ? -1 : 1) < 0) N = -N;
    }

    Mat2 G, b;
    const std::array<Vec4, 2> x{xu, xv};
    const std::array<std::array<Vec4, 2>, 2> xx{{{Vec4(jet.duu), Vec4(jet.duv)}, {Vec4(jet.duv), Vec4(jet.dvv)}}};
    for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j) {
            G(k, j) = x[k].dot(g * x[j]);
            b(k, j) = (xx[k][j] + contract(gamma, x[k], x[j])).dot(g * N);
        }
    const Mat2 M = G.inverse() * b.transpose();
    if (sig == Signature::RIEMANNIAN) return M.trace() / 2;
    const double eps = G.determinant() < 0 ? 1.0 : -1.0;
    return eps * M.trace() / 2;
}

double extended_geodesic_defect(const GroupAmbient& amb, Signature s, const std::function<VecX(double)>& c,
                                double t, double h) {
    const VecX p = c(t);
    const Vec4 v = (c(t + h) - c(t - h)) / (2 * h);
    const Vec4 a = (c(t + h) - 2 * p + c(t - h)) / (h * h);
    const Mat4 g = amb.metric(s, p);
    const auto gamma = extended_christoffel(amb, s, p, h);
    Vec4 acc = project_to_model(amb, g, p, a + contract(gamma, v, v));
    const double vv = v.dot(g * v);
    acc -= (acc.dot(g * v) / vv) * v;
    return std::sqrt(std::abs(acc.dot(g * acc))) / std::abs(vv);
}

// ---------------------------------------------------------------- catalog surfaces

bool CatalogSurface::expects(const std::string& tag) const {
    return std::find(expected.begin(), expected.end(), tag) != expected.end();
}

static std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

static VecX v3(double a, double b, double c) {
    VecX p(3);
    p << a, b, c;
    return p;
}

static VecX v4(double a, double b, double c, double d) {
    VecX p(4);
    p << a, b, c, d;
    return p;
}

CatalogSurface hopf_cylinder(const SpaceParams& prm, const PlanarCurve& alpha, const ParamRect& domain,
                             const std::string& name) {
    constexpr int kChecks = 64;
    for (int i = 0; i <= kChecks; ++i) {
        const double s = domain.u0 + (domain.u1 - domain.u0) * i / kChecks;
        if (alpha.velocity(s).norm() <= 1e-10) throw Error(ErrorCode::CURVE_SINGULAR, name + ": alpha' vanishes");
        if (prm.disk_radius && alpha.point(s).norm() >= *prm.disk_radius - kDomainMargin)
            throw Error(ErrorCode::DOMAIN_VIOLATION, name + ": curve leaves the disk");
    }
    CatalogSurface cs;
    cs.name = name;
    cs.ambient = std::make_shared<CoordinateAmbient>(prm);
    cs.immersion.domain = domain;
    cs.immersion.chart = [alpha](double s, double t) {
        const Vec2 a = alpha.point(s);
        return v3(a[0], a[1], t);
    };
    cs.immersion.jacobian = [alpha](double s, double) {
        const Vec2 d = alpha.velocity(s);
        return std::make_pair(v3(d[0], d[1], 0), v3(0, 0, 1));
    };
    cs.expected = {"TIMELIKE", "HOPF", "OMEGA_L=1", "CONST_ANGLE"};
    return cs;
}

CatalogSurface slice_surface(const SpaceParams& prm, double t0, const ParamRect& domain) {
    if (prm.tau != 0.0) throw Error(ErrorCode::TAU_NONZERO, "slices need tau = 0");
    CatalogSurface cs;
    cs.name = "slice:t0=" + fmt(t0);
    cs.ambient = std::make_shared<CoordinateAmbient>(prm);
    cs.immersion.domain = domain;
    cs.immersion.chart = [t0](double u, double v) { return v3(u, v, t0); };
    cs.immersion.jacobian = [](double, double) { return std::make_pair(v3(1, 0, 0), v3(0, 1, 0)); };
    cs.expected = {"SPACELIKE", "HORIZONTAL", "TOTALLY_GEODESIC", "H_R=0", "H_L=0"};
    return cs;
}

CatalogSurface berger_helicoid(const SpaceParams& prm, double alpha, const ParamRect& domain) {
    CatalogSurface cs;
    cs.name = "berger-helicoid:alpha=" + fmt(alpha);
    cs.ambient = std::make_shared<GroupAmbient>(GroupTag::BERGER_S3, prm);
    cs.group_model = true;
    cs.immersion.domain = domain;
    cs.immersion.chart = [alpha](double s, double t) {
        return v4(std::cos(alpha * s) * std::cos(t), std::sin(alpha * s) * std::cos(t), std::cos(s) * std::sin(t),
                  std::sin(s) * std::sin(t));
    };
    cs.immersion.jacobian = [alpha](double s, double t) {
        const double ca = std::cos(alpha * s), sa = std::sin(alpha * s), c = std::cos(s), sn = std::sin(s);
        const double ct = std::cos(t), st = std::sin(t);
        return std::make_pair(v4(-alpha * sa * ct, alpha * ca * ct, -sn * st, c * st),
                              v4(-ca * st, -sa * st, c * ct, sn * ct));
    };
    cs.expected = {"H_R=0", "H_L=0", "RULED", "ART_ZERO"};
    if (alpha == -1.0) cs.expected.push_back("HOPF");
    return cs;
}

namespace {

Eigen::Matrix2cd lambda_e(double s) {
    Eigen::Matrix2cd m;
    m << std::polar(1.0, s), 0, 0, std::polar(1.0, -s);
    return m;
}
Eigen::Matrix2cd lambda_p(double s) {
    const cplx i(0, 1);
    Eigen::Matrix2cd m;
    m << 1.0 + i * s, -i * s, i * s, 1.0 - i * s;
    return m;
}
Eigen::Matrix2cd lambda_h(double s) {
    Eigen::Matrix2cd m;
    m << std::cosh(s), std::sinh(s), std::sinh(s), std::cosh(s);
    return m;
}
Eigen::Matrix2cd lambda_p1(double s) {
    const cplx i(0, 1);
    Eigen::Matrix2cd m;
    m << 1.0 + i * s, i * s, -i * s, 1.0 - i * s;
    return m;
}
Eigen::Matrix2cd lambda_h1(double s) {
    const cplx i(0, 1);
    Eigen::Matrix2cd m;
    m << std::cosh(s), i * std::sinh(s), -i * std::sinh(s), std::cosh(s);
    return m;
}

const char* family_name(Su11Family f) {
    switch (f) {
        case Su11Family::E: return "E";
        case Su11Family::H1: return "H1";
        case Su11Family::P1: return "P1";
        case Su11Family::P: return "P";
    }
    return "?";
}

const char* coeff_name(Su11Family f) {
    switch (f) {
        case Su11Family::E:
        case Su11Family::H1: return "alpha";
        case Su11Family::P1: return "b";
        case Su11Family::P: return "a";
    }
    return "?";
}

}  // namespace

Eigen::Matrix2cd su11_helicoid_matrix(const SpaceParams& prm, const Su11HelicoidSpec& spec, double s, double t) {
    const double rate = spec.rate.value_or(prm.kappa * prm.kappa);
    Eigen::Matrix2cd L;
    switch (spec.family) {
        case Su11Family::E: L = lambda_e(-2 * spec.coeff * s); break;
        case Su11Family::H1: L = lambda_h1(2 * spec.coeff * s); break;
        case Su11Family::P1: L = lambda_p1(spec.coeff * s); break;
        case Su11Family::P: L = lambda_p(-spec.coeff * s); break;
    }
    return spec.A * L * lambda_h(rate * t / 2) * lambda_e(s / 2);
}

CatalogSurface su11_helicoid(const SpaceParams& prm, const Su11HelicoidSpec& spec) {
    const Eigen::Matrix2cd& A = spec.A;
    const bool in_group = std::abs(A(1, 0) - std::conj(A(0, 1))) < 1e-12 &&
                          std::abs(A(1, 1) - std::conj(A(0, 0))) < 1e-12 &&
                          std::abs(std::norm(A(0, 0)) - std::norm(A(0, 1)) - 1.0) < 1e-12;
    if (!in_group) throw Error(ErrorCode::MODEL_MISMATCH, "A is not in SU(1,1)");
    if (spec.family == Su11Family::E && spec.coeff == 0.25 && spec.domain.v0 <= 0.0 && spec.domain.v1 >= 0.0)
        throw Error(ErrorCode::DOMAIN_VIOLATION, "family E with alpha = 1/4 needs t of one sign");

    CatalogSurface cs;
    std::string name = std::string("su11-helicoid:family=") + family_name(spec.family) + "," +
                       coeff_name(spec.family) + "=" + fmt(spec.coeff);
    if (spec.rate) name += ",rate=" + fmt(*spec.rate);
    cs.name = name;
    cs.ambient = std::make_shared<GroupAmbient>(GroupTag::SU11, prm);
    cs.group_model = true;
    cs.immersion.domain = spec.domain;
    cs.immersion.chart = [prm, spec](double s, double t) {
        const Eigen::Matrix2cd X = su11_helicoid_matrix(prm, spec, s, t);
        return v4(X(0, 0).real(), X(0, 0).imag(), X(0, 1).real(), X(0, 1).imag());
    };
    cs.expected = {"H_R=0", "H_L=0", "RULED", "ART_ZERO"};
    return cs;
}

// ---------------------------------------------------------------- name parsing

namespace {

struct ParsedName {
    std::string kind;
    std::vector<std::string> words;
    std::map<std::string, std::string> kv;
    std::set<std::string> used;

    double num(const std::string& key, double dflt) {
        used.insert(key);
        auto it = kv.find(key);
        if (it == kv.end()) return dflt;
        try {
            std::size_t pos = 0;
            const double x = std::stod(it->second, &pos);
            if (pos != it->second.size() || !std::isfinite(x)) throw std::invalid_argument("trailing");
            return x;
        } catch (const std::exception&) {
            throw Error(ErrorCode::CONFIG_INVALID, "parameter " + key + " is not a number: " + it->second);
        }
    }
    std::optional<double> opt_num(const std::string& key) {
        used.insert(key);
        if (!kv.count(key)) return std::nullopt;
        return num(key, 0.0);
    }
    std::string str(const std::string& key, const std::string& dflt) {
        used.insert(key);
        auto it = kv.find(key);
        return it == kv.end() ? dflt : it->second;
    }
    ParamRect domain(ParamRect d) {
        d.u0 = num("u0", d.u0);
        d.u1 = num("u1", d.u1);
        d.v0 = num("v0", d.v0);
        d.v1 = num("v1", d.v1);
        if (!(d.u0 < d.u1 && d.v0 < d.v1)) throw Error(ErrorCode::CONFIG_INVALID, "empty parameter domain");
        return d;
    }
    void finish(const std::string& full) const {
        for (const auto& [k, v] : kv)
            if (!used.count(k)) throw Error(ErrorCode::CONFIG_INVALID, "unknown parameter '" + k + "' in " + full);
    }
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

ParsedName parse_name(const std::string& name) {
    ParsedName p;
    const auto parts = split(name, ':');
    if (parts.empty() || parts[0].empty()) throw Error(ErrorCode::CONFIG_INVALID, "empty surface name");
    p.kind = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) {
        if (parts[i].find('=') == std::string::npos) {
            if (parts[i].empty()) throw Error(ErrorCode::CONFIG_INVALID, "malformed surface name: " + name);
            p.words.push_back(parts[i]);
            continue;
        }
        for (const auto& tok : split(parts[i], ',')) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos || eq == 0) throw Error(ErrorCode::CONFIG_INVALID, "malformed parameter: " + tok);
            p.kv[tok.substr(0, eq)] = tok.substr(eq + 1);
        }
    }
    return p;
}

std::string domain_suffix(const ParamRect& d, const ParamRect& dflt) {
    std::string s;
    if (d.u0 != dflt.u0) s += ",u0=" + fmt(d.u0);
    if (d.u1 != dflt.u1) s += ",u1=" + fmt(d.u1);
    if (d.v0 != dflt.v0) s += ",v0=" + fmt(d.v0);
    if (d.v1 != dflt.v1) s += ",v1=" + fmt(d.v1);
    return s;
}

std::string to_upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

std::string with_domain(std::string base, const ParamRect& d, const ParamRect& dflt) {
    const std::string suf = domain_suffix(d, dflt);
    if (suf.empty()) return base;
    return base + (base.find('=') == std::string::npos ? ":" + suf.substr(1) : suf);
}

// Polynomial chart component: sum of c u^i v^j.
struct Poly {
    std::vector<std::tuple<int, int, double>> terms;
    double eval(double u, double v) const {
        double r = 0;
        for (auto [i, j, c] : terms) r += c * std::pow(u, i) * std::pow(v, j);
        return r;
    }
    double du(double u, double v) const {
        double r = 0;
        for (auto [i, j, c] : terms)
            if (i > 0) r += c * i * std::pow(u, i - 1) * std::pow(v, j);
        return r;
    }
    double dv(double u, double v) const {
        double r = 0;
        for (auto [i, j, c] : terms)
            if (j > 0) r += c * j * std::pow(u, i) * std::pow(v, j - 1);
        return r;
    }
};

Poly parse_poly(const nlohmann::json& j, const std::string& key) {
    Poly p;
    if (!j.contains(key)) throw Error(ErrorCode::CONFIG_INVALID, "chart file lacks '" + key + "'");
    const auto& arr = j.at(key);
    if (arr.is_number()) {
        p.terms.emplace_back(0, 0, arr.get<double>());
        return p;
    }
    if (!arr.is_array()) throw Error(ErrorCode::CONFIG_INVALID, "chart component '" + key + "' must be a list");
    for (const auto& t : arr) {
        if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer() ||
            !t[2].is_number() || t[0].get<int>() < 0 || t[1].get<int>() < 0)
            throw Error(ErrorCode::CONFIG_INVALID, "chart terms are [i, j, coefficient] with i, j >= 0");
        p.terms.emplace_back(t[0].get<int>(), t[1].get<int>(), t[2].get<double>());
    }
    return p;
}

CatalogSurface file_surface(const std::string& path, const SpaceParams& prm) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::CONFIG_INVALID, "cannot open chart file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::CONFIG_INVALID, "chart file " + path + ": " + e.what());
    }
    const Poly px = parse_poly(j, "x"), py = parse_poly(j, "y"), pz = parse_poly(j, "z");
    ParamRect d{-0.5, 0.5, -0.5, 0.5};
    if (j.contains("domain")) {
        const auto& a = j.at("domain");
        if (!a.is_array() || a.size() != 4) throw Error(ErrorCode::CONFIG_INVALID, "domain is [u0, u1, v0, v1]");
        d = {a[0].get<double>(), a[1].get<double>(), a[2].get<double>(), a[3].get<double>()};
        if (!(d.u0 < d.u1 && d.v0 < d.v1)) throw Error(ErrorCode::CONFIG_INVALID, "empty parameter domain");
    }
    CatalogSurface cs;
    cs.name = "file:" + path;
    cs.ambient = std::make_shared<CoordinateAmbient>(prm);
    cs.immersion.domain = d;
    cs.immersion.chart = [px, py, pz](double u, double v) { return v3(px.eval(u, v), py.eval(u, v), pz.eval(u, v)); };
    cs.immersion.jacobian = [px, py, pz](double u, double v) {
        return std::make_pair(v3(px.du(u, v), py.du(u, v), pz.du(u, v)), v3(px.dv(u, v), py.dv(u, v), pz.dv(u, v)));
    };
    if (j.contains("expected")) {
        for (const auto& e : j.at("expected")) cs.expected.push_back(e.get<std::string>());
    }
    return cs;
}

// Causal character of a chart at (s, t) by central differences, ignoring the domain.
Character chart_character(const CatalogSurface& cs, double s, double t) {
    constexpr double h = 1e-5;
    SurfaceJet jet;
    jet.p = cs.immersion.chart(s, t);
    jet.du = (cs.immersion.chart(s + h, t) - cs.immersion.chart(s - h, t)) / (2 * h);
    jet.dv = (cs.immersion.chart(s, t + h) - cs.immersion.chart(s, t - h)) / (2 * h);
    return causal_character(*cs.ambient, jet).tag;
}

// Widest t-interval of [t0, t1] on which the character at s is constant (preferring `want` when set),
// shrunk away from the null locus.
std::pair<double, double> character_window(const CatalogSurface& cs, double s, double t0, double t1,
                                           std::optional<Character> want) {
    constexpr int kSteps = 600;
    std::vector<Character> ch(kSteps + 1);
    for (int i = 0; i <= kSteps; ++i) ch[i] = chart_character(cs, s, t0 + (t1 - t0) * i / kSteps);
    int best_a = -1, best_b = -1;
    for (int a = 0; a <= kSteps;) {
        int b = a;
        while (b + 1 <= kSteps && ch[b + 1] == ch[a]) ++b;
        const bool ok = ch[a] != Character::DEGENERATE && (!want || ch[a] == *want);
        if (ok && b - a > best_b - best_a) best_a = a, best_b = b;
        a = b + 1;
    }
    if (best_a < 0 || best_b - best_a < 12)
        throw Error(ErrorCode::DOMAIN_VIOLATION, cs.name + ": no non-degenerate window of the requested character");
    const double lo = t0 + (t1 - t0) * best_a / kSteps, hi = t0 + (t1 - t0) * best_b / kSteps;
    const double pad = std::max(0.05 * (hi - lo), 0.02);
    const bool open_lo = best_a == 0, open_hi = best_b == kSteps;
    return {open_lo ? lo : lo + pad, open_hi ? hi : hi - pad};
}

std::optional<Character> parse_character(ParsedName& p) {
    const std::string c = p.str("character", "");
    if (c.empty()) return std::nullopt;
    if (c == "spacelike") return Character::SPACELIKE;
    if (c == "timelike") return Character::TIMELIKE;
    throw Error(ErrorCode::CONFIG_INVALID, "character must be spacelike or timelike");
}

void require_words(const ParsedName& p, std::size_t n, const std::string& full) {
    if (p.words.size() != n) throw Error(ErrorCode::CONFIG_INVALID, "malformed surface name: " + full);
}

}  // namespace

CatalogSurface make_surface(const std::string& name, const SpaceParams& prm) {
    if (name.rfind("file:", 0) == 0) return file_surface(name.substr(5), prm);
    ParsedName p = parse_name(name);
    CatalogSurface cs;

    if (p.kind == "hopf") {
        require_words(p, 1, name);
        const std::string& shape = p.words[0];
        PlanarCurve alpha;
        std::string base;
        ParamRect dflt;
        if (shape == "circle") {
            const double r = p.num("r", 0.8);
            alpha.point = [r](double s) { return Vec2(r * std::cos(s), r * std::sin(s)); };
            alpha.velocity = [r](double s) { return Vec2(-r * std::sin(s), r * std::cos(s)); };
            base = "hopf:circle:r=" + fmt(r);
            dflt = {0.0, 2 * std::numbers::pi, -1.0, 1.0};
        } else if (shape == "line") {
            const double th = p.num("theta", 0.3);
            alpha.point = [th](double s) { return Vec2(s * std::cos(th), s * std::sin(th)); };
            alpha.velocity = [th](double) { return Vec2(std::cos(th), std::sin(th)); };
            base = "hopf:line:theta=" + fmt(th);
            dflt = {-0.8, 0.8, -1.0, 1.0};
        } else if (shape == "sine") {
            const double a = p.num("a", 0.3);
            alpha.point = [a](double s) { return Vec2(s, a * std::sin(2 * s)); };
            alpha.velocity = [a](double s) { return Vec2(1.0, 2 * a * std::cos(2 * s)); };
            base = "hopf:sine:a=" + fmt(a);
            dflt = {-0.8, 0.8, -1.0, 1.0};
        } else {
            throw Error(ErrorCode::CONFIG_INVALID, "unknown Hopf curve '" + shape + "'");
        }
        const ParamRect d = p.domain(dflt);
        p.finish(name);
        cs = hopf_cylinder(prm, alpha, d, with_domain(base, d, dflt));
        if (shape == "line") {
            cs.expected.push_back("H_R=0");
            cs.expected.push_back("H_L=0");
        }
        return cs;
    }
    if (p.kind == "slice") {
        require_words(p, 0, name);
        const double t0 = p.num("t0", 0.0);
        const ParamRect dflt{-0.5, 0.5, -0.5, 0.5};
        const ParamRect d = p.domain(dflt);
        p.finish(name);
        cs = slice_surface(prm, t0, d);
        cs.name = with_domain(cs.name, d, dflt);
        return cs;
    }
    if (p.kind == "graph") {
        require_words(p, 0, name);
        const double a = p.num("a", 0.3), b = p.num("b", -0.2), c = p.num("c", 0.1);
        const ParamRect dflt{-0.3, 0.3, -0.3, 0.3};
        const ParamRect d = p.domain(dflt);
        p.finish(name);
        cs.name = with_domain("graph:a=" + fmt(a) + ",b=" + fmt(b) + ",c=" + fmt(c), d, dflt);
        cs.ambient = std::make_shared<CoordinateAmbient>(prm);
        cs.immersion.domain = d;
        cs.immersion.chart = [a, b, c](double u, double v) { return v3(u, v, a * u * u + b * u * v + c * v * v); };
        cs.immersion.jacobian = [a, b, c](double u, double v) {
            return std::make_pair(v3(1, 0, 2 * a * u + b * v), v3(0, 1, b * u + 2 * c * v));
        };
        cs.expected = {"SPACELIKE"};
        return cs;
    }
    if (p.kind == "tilted") {
        require_words(p, 0, name);
        const ParamRect dflt{-0.3, 0.3, -0.3, 0.3};
        const ParamRect d = p.domain(dflt);
        p.finish(name);
        cs.name = with_domain("tilted", d, dflt);
        cs.ambient = std::make_shared<CoordinateAmbient>(prm);
        cs.immersion.domain = d;
        cs.immersion.chart = [](double u, double v) {
            return v3(u + 0.1 * v * v, 0.5 * u + 0.2 * v, 1.5 * u + 0.1 * u * u - 0.3 * v);
        };
        cs.immersion.jacobian = [](double u, double v) {
            return std::make_pair(v3(1, 0.5, 1.5 + 0.2 * u), v3(0.2 * v, 0.2, -0.3));
        };
        cs.expected = {"TIMELIKE"};
        return cs;
    }
    if (p.kind == "helicoid") {
        require_words(p, 0, name);
        if (prm.tau != 0.0) throw Error(ErrorCode::TAU_NONZERO, "helicoid is catalogued for tau = 0");
        const double c = p.num("c", 1.0);
        const ParamRect dflt{0.1, 0.7, -1.0, 1.0};
        const ParamRect d = p.domain(dflt);
        p.finish(name);
        if (prm.disk_radius && std::max(std::abs(d.u0), std::abs(d.u1)) >= *prm.disk_radius)
            throw Error(ErrorCode::DOMAIN_VIOLATION, "helicoid leaves the disk");
        cs.name = with_domain("helicoid:c=" + fmt(c), d, dflt);
        cs.ambient = std::make_shared<CoordinateAmbient>(prm);
        cs.immersion.domain = d;
        cs.immersion.chart = [c](double u, double v) { return v3(u * std::cos(v), u * std::sin(v), c * v); };
        cs.immersion.jacobian = [c](double u, double v) {
            return std::make_pair(v3(std::cos(v), std::sin(v), 0), v3(-u * std::sin(v), u * std::cos(v), c));
        };
        cs.expected = {"H_R=0", "H_L=0", "RULED"};
        return cs;
    }
    if (p.kind == "berger-helicoid") {
        require_words(p, 0, name);
        const double alpha = p.num("alpha", 0.5);
        const auto want = parse_character(p);
        const bool auto_window = !p.kv.count("v0") && !p.kv.count("v1");
        ParamRect dflt{0.0, 1.0, 0.05, std::numbers::pi / 2 - 0.05};
        ParamRect d = p.domain(dflt);
        p.finish(name);
        cs = berger_helicoid(prm, alpha, d);
        if (auto_window) {
            std::tie(d.v0, d.v1) = character_window(cs, 0.5 * (d.u0 + d.u1), dflt.v0, dflt.v1, want);
            cs.immersion.domain = d;
            dflt.v0 = d.v0, dflt.v1 = d.v1;
        }
        if (want) cs.name += std::string(",character=") + (*want == Character::SPACELIKE ? "spacelike" : "timelike");
        cs.name = with_domain(cs.name, d, dflt);
        cs.expected.push_back(to_upper(to_string(chart_character(cs, 0.5 * (d.u0 + d.u1), 0.5 * (d.v0 + d.v1)))));
        return cs;
    }
    if (p.kind == "su11-helicoid") {
        require_words(p, 0, name);
        Su11HelicoidSpec spec;
        const std::string fam = p.str("family", "H1");
        if (fam == "E") spec.family = Su11Family::E;
        else if (fam == "H1") spec.family = Su11Family::H1;
        else if (fam == "P1") spec.family = Su11Family::P1;
        else if (fam == "P") spec.family = Su11Family::P;
        else throw Error(ErrorCode::CONFIG_INVALID, "unknown SU(1,1) family '" + fam + "'");
        spec.coeff = p.num(coeff_name(spec.family), 0.5);
        spec.rate = p.opt_num("rate");
        const auto want = parse_character(p);
        const bool auto_window = !p.kv.count("v0") && !p.kv.count("v1");
        const bool half_plane = spec.family == Su11Family::E && spec.coeff == 0.25;
        ParamRect dflt{-0.5, 0.5, half_plane ? 0.05 : -1.5, 1.5};
        spec.domain = p.domain(dflt);
        p.finish(name);
        if (auto_window) {
            Su11HelicoidSpec probe = spec;
            probe.domain.v0 = 0.05;  // any admissible rectangle; only the chart is used for the scan
            cs = su11_helicoid(prm, probe);
            std::tie(spec.domain.v0, spec.domain.v1) =
                character_window(cs, 0.5 * (spec.domain.u0 + spec.domain.u1), dflt.v0, dflt.v1, want);
            dflt.v0 = spec.domain.v0, dflt.v1 = spec.domain.v1;
        }
        cs = su11_helicoid(prm, spec);
        if (want) cs.name += std::string(",character=") + (*want == Character::SPACELIKE ? "spacelike" : "timelike");
        cs.name = with_domain(cs.name, spec.domain, dflt);
        const ParamRect& d = spec.domain;
        cs.expected.push_back(to_upper(to_string(chart_character(cs, 0.5 * (d.u0 + d.u1), 0.5 * (d.v0 + d.v1)))));
        return cs;
    }
    throw Error(ErrorCode::CONFIG_INVALID, "unknown surface '" + name + "'");
}

bool surface_applicable(const std::string& name, const SpaceParams& prm) {
    try {
        make_surface(name, prm);
        return true;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::CONFIG_INVALID) throw;
        return false;
    }
}

const std::vector<std::string>& default_surface_names() {
    static const std::vector<std::string> names{
        "hopf:circle:r=0.8",
        "hopf:line",
        "hopf:sine:a=0.3",
        "graph",
        "tilted",
        "slice",
        "helicoid",
        "berger-helicoid:alpha=0.5,character=spacelike",
        "berger-helicoid:alpha=2,character=timelike",
        "berger-helicoid:alpha=-1",
        "su11-helicoid:family=E",
        "su11-helicoid:family=H1,character=spacelike",
        "su11-helicoid:family=P1",
        "su11-helicoid:family=P,character=spacelike",
    };
    return names;
}

}  // namespace bicausal
