// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bicausal/verify.hpp"

using namespace bicausal;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Line {
    int id = 0;
    std::string title;
    bool pass = true;
    std::vector<std::string> notes;

    Line(int i = 0, std::string t = {}) : id(i), title(std::move(t)) {}

    void check(bool ok, const std::string& what) {
        if (!ok) pass = false;
        notes.push_back(std::string(ok ? "" : "!") + what);
    }
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

const std::vector<std::pair<double, double>> kTauParams = {{1, 1}, {-1, 1}, {4, 1}, {1, 0.5}};
const std::vector<std::pair<double, double>> kFlatParams = {{1, 0}, {-1, 0}, {0, 0}};

std::vector<std::pair<double, double>> all_params() {
    auto v = kTauParams;
    v.insert(v.end(), kFlatParams.begin(), kFlatParams.end());
    return v;
}

Vec3 random_point(const SpaceParams& prm, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const double r = prm.disk_radius ? 0.9 * *prm.disk_radius : 1.5;
    const double box = std::min(1.5, r);
    Vec3 p;
    do {
        p = Vec3(box * uni(rng), box * uni(rng), 2 * uni(rng));
    } while (p.head<2>().norm() >= r);
    return p;
}

Vec3 random_vec(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    return Vec3(g(rng), g(rng), g(rng));
}

std::vector<Vec2> interior_grid(const ParamRect& r, int n) {
    std::vector<Vec2> out;
    const double iu = 0.05 * (r.u1 - r.u0), iv = 0.05 * (r.v1 - r.v0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.emplace_back(r.u0 + iu + (r.u1 - r.u0 - 2 * iu) * i / (n - 1),
                             r.v0 + iv + (r.v1 - r.v0 - 2 * iv) * j / (n - 1));
    return out;
}

// Evaluates f on every catalog sample (default surfaces x all parameter sets); skips inapplicable pairs.
std::size_t for_catalog_samples(int per_surface,
                                const std::function<void(const CatalogSurface&, const TwoMetricFrameData&)>& f) {
    std::size_t n = 0;
    std::uint64_t seed = 11;
    for (const auto& [k, t] : all_params()) {
        const SpaceParams prm = SpaceParams::make(k, t);
        for (const auto& name : default_surface_names()) {
            ++seed;
            if (!surface_applicable(name, prm)) continue;
            const CatalogSurface cs = make_surface(name, prm);
            for (const Vec2& uv : stratified_samples(cs.immersion.domain, per_surface, seed)) {
                f(cs, evaluate_point(*cs.ambient, cs.immersion, uv));
                ++n;
            }
        }
    }
    return n;
}

double report_max(const SuiteReport& rep, IdentityId id, std::size_t* samples = nullptr) {
    for (const auto& r : rep.identities)
        if (r.id == id) {
            if (samples) *samples = r.samples;
            return r.max_abs_residual;
        }
    return INFINITY;
}

double property_max(const SuiteReport& rep, const std::string& name) {
    double m = 0;
    for (const auto& p : rep.properties)
        if (p.property == name) m = std::max(m, p.max_residual);
    return m;
}

// 1. Frame orthonormality and the metric sum / difference identities.
Line criterion_1() {
    Line L{1, "frame/metric axioms"};
    const auto t0 = Clock::now();
    std::mt19937_64 rng(101);
    const auto params = all_params();
    double worst_frame = 0, worst_id = 0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
        const auto [k, t] = params[i % params.size()];
        const SpaceParams prm = SpaceParams::make(k, t);
        AmbientSample a;
        a.prm = prm;
        a.p = random_point(prm, rng);
        a.x = random_vec(rng);
        a.y = random_vec(rng);
        const Mat3 F = frame_matrix(prm, a.p);
        const Mat3 GR = F.transpose() * coordinate_metric(prm, Signature::RIEMANNIAN, a.p) * F;
        const Mat3 GL = F.transpose() * coordinate_metric(prm, Signature::LORENTZIAN, a.p) * F;
        const Mat3 etaL = Vec3(1, 1, -1).asDiagonal();
        worst_frame = std::max({worst_frame, (GR - Mat3::Identity()).cwiseAbs().maxCoeff(),
                                (GL - etaL).cwiseAbs().maxCoeff()});
        // Frame-component and coordinate evaluations of the two metrics must agree.
        const auto X = AmbientVector::from_frame(prm, a.p, a.x), Y = AmbientVector::from_frame(prm, a.p, a.y);
        for (Signature s : {Signature::RIEMANNIAN, Signature::LORENTZIAN})
            worst_frame = std::max(worst_frame, rel_residual(metric_eval(prm, s, X, Y), metric_eval_coord(prm, s, X, Y)));
        const IdentityContext ctx{&a, nullptr};
        worst_id = std::max({worst_id, identity_residual(IdentityId::METRIC_SUM, ctx),
                             identity_residual(IdentityId::METRIC_DIFF, ctx)});
    }
    const double secs = seconds_since(t0);
    L.check(worst_frame < 1e-12, fmt("orthonormality %.2e", worst_frame));
    L.check(worst_id < 1e-12, fmt("METRIC_SUM/DIFF %.2e", worst_id));
    L.check(secs < 1.0, fmt("n=1000 in %.2f s", secs));
    return L;
}

// 2. Closed-form connection tables against the FD Koszul oracle.
Line criterion_2() {
    Line L{2, "connection tables vs Koszul oracle"};
    const auto t0 = Clock::now();
    std::mt19937_64 rng(202);
    const std::vector<std::pair<double, double>> params = {{1, 1},   {-1, 1}, {4, 1},   {1, 0.5}, {-4, 0.5},
                                                           {-2, -1}, {1, 0},  {-1, 0},  {0, 0},   {0, 1}};
    double worst = 0, worst_group = 0;
    for (int n = 0; n < 100; ++n) {
        const auto [k, t] = params[n % params.size()];
        const SpaceParams prm = SpaceParams::make(k, t);
        const Vec3 p = random_point(prm, rng);
        for (Signature s : {Signature::RIEMANNIAN, Signature::LORENTZIAN}) {
            const ConnectionTable tab = connection_table(prm, s, p);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    worst = std::max(worst, (koszul_fd_oracle(prm, s, p, i, j) - tab.c[i][j]).norm());
        }
    }
    // The same tables serve the group models; check them against the extended-metric oracle.
    for (const auto& [tag, k, t] : {std::tuple{GroupTag::BERGER_S3, 1.0, 1.0}, std::tuple{GroupTag::BERGER_S3, 4.0, 0.5},
                                    std::tuple{GroupTag::SU11, -1.0, 1.0}, std::tuple{GroupTag::SU11, -4.0, 0.5}}) {
        const GroupAmbient amb(tag, SpaceParams::make(k, t));
        VecX p(4);
        if (tag == GroupTag::BERGER_S3)
            p << std::cos(0.3) * std::cos(0.7), std::cos(0.3) * std::sin(0.7), std::sin(0.3) * std::cos(-0.4),
                std::sin(0.3) * std::sin(-0.4);
        else
            p << std::cosh(0.4) * std::cos(0.2), std::cosh(0.4) * std::sin(0.2), std::sinh(0.4) * std::cos(1.1),
                std::sinh(0.4) * std::sin(1.1);
        for (Signature s : {Signature::RIEMANNIAN, Signature::LORENTZIAN}) {
            const ConnectionTable tab = amb.table(s, p);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    worst_group = std::max(worst_group, (group_koszul_oracle(amb, s, p, i, j) - tab.c[i][j]).norm());
        }
    }
    const double secs = seconds_since(t0);
    L.check(worst < 1e-5, fmt("coordinate model %.2e (100 configs)", worst));
    L.check(worst_group < 1e-5, fmt("group models %.2e", worst_group));
    L.check(secs < 5.0, fmt("%.2f s", secs));
    return L;
}

// 3. Difference of the two connections.
Line criterion_3() {
    Line L{3, "connection difference W"};
    std::mt19937_64 rng(303);
    const auto params = all_params();
    double frame = 0, extended = 0, flat = 0;
    for (int n = 0; n < 140; ++n) {
        const auto [k, t] = params[n % params.size()];
        const SpaceParams prm = SpaceParams::make(k, t);
        AmbientSample a;
        a.prm = prm;
        a.p = random_point(prm, rng);
        a.x = random_vec(rng);
        a.y = random_vec(rng);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                a.gx(i, j) = uni(rng);
                a.gy(i, j) = uni(rng);
            }
        const ConnectionTable R = connection_table(prm, Signature::RIEMANNIAN, a.p);
        const ConnectionTable Lt = connection_table(prm, Signature::LORENTZIAN, a.p);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const Vec3 W = difference_tensor_W(prm.tau, Vec3::Unit(i), Vec3::Unit(j));
                frame = std::max(frame, rel_residual(R.c[i][j] - Lt.c[i][j], W));
                if (t == 0) flat = std::max({flat, W.norm(), (R.c[i][j] - Lt.c[i][j]).norm()});
            }
        if (t == 0) flat = std::max(flat, difference_tensor_W(0.0, a.x, a.y).norm());
        extended = std::max(extended, identity_residual(IdentityId::CONN_DIFF, {&a, nullptr}));
    }
    L.check(frame < 1e-10, fmt("frame fields %.2e", frame));
    L.check(extended < 1e-5, fmt("extended fields %.2e", extended));
    L.check(flat < 1e-12, fmt("tau=0 W %.2e", flat));
    return L;
}

// 4. Normal transform, unit length and pairing on every catalog surface.
Line criterion_4() {
    Line L{4, "normal transform and pairing"};
    double transform = 0, unit = 0, pairing = 0;
    std::set<int> characters;
    std::mt19937_64 rng(404);
    const std::size_t n = for_catalog_samples(8, [&](const CatalogSurface& cs, const TwoMetricFrameData& d) {
        characters.insert(d.eps);
        SurfaceSample ss;
        ss.amb = cs.ambient.get();
        ss.surface = &cs.immersion;
        ss.data = &d;
        for (int i = 0; i < 3; ++i) ss.probes.push_back(random_vec(rng));
        ss.directions = {Vec2(1, 0), Vec2(0, 1), Vec2(1, 1)};
        const IdentityContext ctx{nullptr, &ss};
        transform = std::max(transform, identity_residual(IdentityId::NORMAL_TRANSFORM, ctx));
        transform = std::max(transform, (d.N_R - d.N_R_wedge).norm());
        unit = std::max(unit, std::abs(inner(Signature::RIEMANNIAN, d.N_R, d.N_R) - 1));
        pairing = std::max(pairing, identity_residual(IdentityId::NORMAL_PAIRING, ctx));
    });
    L.check(transform < 1e-9, fmt("transform vs wedge %.2e", transform));
    L.check(unit < 1e-10, fmt("<N_R,N_R>_R - 1 %.2e", unit));
    L.check(pairing < 1e-9, fmt("pairing %.2e", pairing));
    L.check(characters.count(-1) && characters.count(1), fmt("n=%.0f, both characters", double(n)));
    return L;
}

SuiteConfig suite_config(std::vector<IdentityId> ids) {
    SuiteConfig cfg;
    cfg.params = all_params();
    cfg.identities = std::move(ids);
    return cfg;
}

std::size_t parameter_sets_with_samples(const SuiteReport& rep) {
    std::set<std::pair<double, double>> s;
    for (const auto& r : rep.surfaces)
        if (r.samples > 0) s.insert({r.kappa, r.tau});
    return s.size();
}

// 5. Shape operators, bilinear forms, mean curvature relations.
Line criterion_5() {
    Line L{5, "shape operators and mean curvatures"};
    const auto t0 = Clock::now();
    const SuiteReport rep = run_suite(suite_config({IdentityId::SHAPE_R, IdentityId::SHAPE_L, IdentityId::BILINEAR_R,
                                                    IdentityId::BILINEAR_L, IdentityId::MEANCURV_L,
                                                    IdentityId::MEANCURV_R}));
    const double secs = seconds_since(t0);
    std::size_t samples = 0;
    for (IdentityId id : {IdentityId::SHAPE_R, IdentityId::SHAPE_L, IdentityId::BILINEAR_R, IdentityId::BILINEAR_L,
                          IdentityId::MEANCURV_L, IdentityId::MEANCURV_R}) {
        std::size_t n = 0;
        const double m = report_max(rep, id, &n);
        samples = samples == 0 ? n : std::min(samples, n);
        L.check(m < 1e-4, std::string(to_string(id)) + fmt(" %.2e", m));
    }
    const std::size_t sets = parameter_sets_with_samples(rep);
    L.check(samples >= 200 && sets >= 3, fmt("n=%.0f over %.0f parameter sets", double(samples), double(sets)));
    L.check(secs < 30.0, fmt("%.2f s", secs));
    return L;
}

// 6. Integrability conditions.
Line criterion_6() {
    Line L{6, "integrability"};
    const SuiteReport rep = run_suite(
        suite_config({IdentityId::INT1_L, IdentityId::INT2_L, IdentityId::INT1_R, IdentityId::INT2_R}));
    for (IdentityId id : {IdentityId::INT1_L, IdentityId::INT2_L, IdentityId::INT1_R, IdentityId::INT2_R}) {
        std::size_t n = 0;
        const double m = report_max(rep, id, &n);
        L.check(m < 1e-4 && n >= 200, std::string(to_string(id)) + fmt(" %.2e", m));
    }
    return L;
}

// 7. Surfaces minimal for both metrics.
Line criterion_7() {
    Line L{7, "simultaneous minimal-maximal surfaces"};
    struct Case {
        std::string name;
        double k, t;
    };
    const std::vector<Case> helicoids = {
        {"berger-helicoid:alpha=0.5,character=spacelike", 1, 1}, {"berger-helicoid:alpha=2,character=timelike", 1, 1},
        {"berger-helicoid:alpha=-1", 4, 1},                      {"berger-helicoid:alpha=0.5", 1, 0.5},
        {"berger-helicoid:alpha=3", 8, 1},                       {"su11-helicoid:family=E", -1, 1},
        {"su11-helicoid:family=H1,character=spacelike", -1, 1}, {"su11-helicoid:family=H1", -1, 1},
        {"su11-helicoid:family=P1", -1, 1},                      {"su11-helicoid:family=P,character=spacelike", -1, 1},
        {"su11-helicoid:family=P1,b=0.3", -2, 0.5},             {"su11-helicoid:family=E,alpha=0.25", -1, 1},
    };
    double H = 0, H_ext = 0, ruling = 0;
    std::size_t n = 0;
    for (const auto& c : helicoids) {
        const CatalogSurface cs = make_surface(c.name, SpaceParams::make(c.k, c.t));
        const auto& group = dynamic_cast<const GroupAmbient&>(*cs.ambient);
        for (const Vec2& uv : interior_grid(cs.immersion.domain, 10)) {
            if (!cs.immersion.admits(uv, 0)) continue;
            const TwoMetricFrameData d = evaluate_point(*cs.ambient, cs.immersion, uv);
            H = std::max({H, std::abs(d.H_R), std::abs(d.H_L)});
            H_ext = std::max({H_ext, std::abs(extended_mean_curvature(group, cs.immersion, uv, Signature::RIEMANNIAN, d.N_R)),
                              std::abs(extended_mean_curvature(group, cs.immersion, uv, Signature::LORENTZIAN, d.N_L))});
            const RulingResult r = ruling_residual(*cs.ambient, cs.immersion, d, {}, 1e-4);
            ruling = std::max({ruling, r.defect_R, r.defect_L});
            ++n;
        }
    }
    double slice = 0;
    for (const auto& [k, t] : kFlatParams) {
        const CatalogSurface cs = make_surface("slice:t0=0.3", SpaceParams::make(k, t));
        for (const Vec2& uv : interior_grid(cs.immersion.domain, 10)) {
            const TwoMetricFrameData d = evaluate_point(*cs.ambient, cs.immersion, uv);
            slice = std::max({slice, std::abs(d.H_R), std::abs(d.H_L), d.A_R.cwiseAbs().maxCoeff(),
                              d.A_L.cwiseAbs().maxCoeff()});
        }
    }
    L.check(H < 1e-4, fmt("|H_R|,|H_L| %.2e", H));
    L.check(H_ext < 1e-4, fmt("extended-metric H %.2e", H_ext));
    L.check(ruling < 1e-3, fmt("ruling defect %.2e", ruling));
    L.check(slice < 1e-9, fmt("slices %.2e", slice));
    L.check(n >= 10 * 100, fmt("n=%.0f", double(n)));
    return L;
}

// 8. Nowhere-definite A_R where H_R = H_L.
Line criterion_8() {
    Line L{8, "indefiniteness where H_R = H_L"};
    double det = -INFINITY, ratio = 0;
    std::size_t n = 0, ratio_n = 0, skipped = 0;
    for_catalog_samples(16, [&](const CatalogSurface& cs, const TwoMetricFrameData& d) {
        if (std::abs(d.H_R - d.H_L) >= 1e-6) return;
        // Asserted for spacelike points and for surfaces minimal in both metrics.
        if (d.eps != -1 && !(cs.expects("H_R=0") && cs.expects("H_L=0"))) {
            ++skipped;
            return;
        }
        const IndefinitenessResult r = indefiniteness_check(d, 1e-6);
        det = std::max(det, r.det_A_R);
        ++n;
        if (r.ratio_checked && std::abs(d.omega_L - 1) > 1e-6) {
            ratio = std::max(ratio, r.ratio_residual);
            ++ratio_n;
        }
    });
    L.check(det <= 1e-8, fmt("max det(A_R) %.2e", det));
    L.check(ratio < 1e-5, fmt("ratio %.2e", ratio) + fmt(" (n=%.0f)", double(ratio_n)));
    L.check(n > 0, fmt("n=%.0f, %.0f timelike non-minimal points not asserted", double(n), double(skipped)));
    return L;
}

// 9. Curvature relations and the intrinsic oracle.
Line criterion_9() {
    Line L{9, "curvature relations"};
    const std::vector<IdentityId> ids = {IdentityId::SECTIONAL_REL, IdentityId::EXTRINSIC_REL, IdentityId::GAUSS_R,
                                         IdentityId::GAUSS_L, IdentityId::COMBINED_516};
    const SuiteReport rep = run_suite(suite_config(ids));
    for (IdentityId id : ids) {
        std::size_t n = 0;
        const double m = report_max(rep, id, &n);
        L.check(m < 1e-4 && n > 0, std::string(to_string(id)) + fmt(" %.2e", m));
    }
    const double b = std::max(property_max(rep, "BRIOSCHI_R"), property_max(rep, "BRIOSCHI_L"));
    L.check(b < 1e-3, fmt("intrinsic vs Gauss %.2e", b));
    return L;
}

// 10. Hopf cylinders: equal curvatures for kappa + 4 tau^2 > 0, flat for tau = 0.
Line criterion_10() {
    Line L{10, "Hopf cylinder curvature instances"};
    const std::vector<std::string> cylinders = {"hopf:circle:r=0.8", "hopf:circle:r=0.3", "hopf:line:theta=0.3",
                                                "hopf:sine:a=0.3"};
    double equal = 0, omega = 0, flat = 0;
    for (const auto& [k, t] : std::vector<std::pair<double, double>>{{1, 1}, {-1, 1}, {4, 1}, {1, 0.5}, {-2, 1}}) {
        const SpaceParams prm = SpaceParams::make(k, t);
        for (const auto& name : cylinders) {
            const CatalogSurface cs = make_surface(name, prm);
            for (const Vec2& uv : interior_grid(cs.immersion.domain, 5)) {
                const TwoMetricFrameData d = evaluate_point(*cs.ambient, cs.immersion, uv);
                const CurvatureRecord c = curvature_suite(*cs.ambient, cs.immersion, d, false);
                equal = std::max({equal, std::abs(c.K_R - c.K_L), std::abs(c.Ke_R - c.Ke_L)});
                omega = std::max(omega, std::abs(d.omega_L - 1));
            }
        }
    }
    for (const auto& [k, t] : kFlatParams) {
        const SpaceParams prm = SpaceParams::make(k, t);
        for (const auto& name : cylinders) {
            const CatalogSurface cs = make_surface(name, prm);
            for (const Vec2& uv : interior_grid(cs.immersion.domain, 5)) {
                const TwoMetricFrameData d = evaluate_point(*cs.ambient, cs.immersion, uv);
                const CurvatureRecord c = curvature_suite(*cs.ambient, cs.immersion, d, true);
                flat = std::max({flat, std::abs(c.Ke_R), std::abs(c.Ke_L), std::abs(c.K_R), std::abs(c.K_L),
                                 std::abs(*c.K_R_intrinsic), std::abs(*c.K_L_intrinsic)});
                omega = std::max(omega, std::abs(d.omega_L - 1));
            }
        }
    }
    L.check(equal < 1e-4, fmt("K_R-K_L, Ke_R-Ke_L %.2e", equal));
    L.check(omega < 1e-8, fmt("omega_L-1 %.2e", omega));
    L.check(flat < 1e-4, fmt("tau=0 curvatures %.2e", flat));
    return L;
}

// 11. Deterministic report and runtime of the default suite.
Line criterion_11() {
    Line L{11, "determinism and runtime"};
    const auto t0 = Clock::now();
    const SuiteReport a = run_suite(SuiteConfig{});
    const double secs = seconds_since(t0);
    SuiteConfig single;
    single.threads = 1;
    const SuiteReport b = run_suite(single);
    const std::string ja = a.to_json(false), jb = b.to_json(false);
    L.check(ja == jb, "byte-identical JSON (parallel vs single thread)");
    L.check(a.pass, "default suite verdict");
    L.check(secs < 120.0, fmt("default suite %.2f s", secs));
    return L;
}

}  // namespace

int main() {
    const std::vector<std::function<Line()>> criteria = {criterion_1, criterion_2, criterion_3, criterion_4,
                                                         criterion_5, criterion_6, criterion_7, criterion_8,
                                                         criterion_9, criterion_10, criterion_11};
    int failed = 0;
    for (const auto& run : criteria) {
        Line line;
        try {
            line = run();
        } catch (const std::exception& e) {
            line.id = static_cast<int>(&run - criteria.data()) + 1;
            line.title = "exception";
            line.check(false, e.what());
        }
        std::string detail;
        for (const auto& n : line.notes) detail += (detail.empty() ? "" : "; ") + n;
        std::printf("%s %2d %s: %s\n", line.pass ? "PASS" : "FAIL", line.id, line.title.c_str(), detail.c_str());
        if (!line.pass) ++failed;
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}
