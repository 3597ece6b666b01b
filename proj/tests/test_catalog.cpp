#include <cmath>
#include <cstdio>
#include <fstream>

#include <gtest/gtest.h>

#include "bicausal/catalog.hpp"
#include "bicausal/verify.hpp"

using namespace bicausal;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::NUMERIC_FAILURE;
}

VecX berger_point(double a, double b, double c) {
    VecX p(4);
    p << std::cos(a) * std::cos(b), std::cos(a) * std::sin(b), std::sin(a) * std::cos(c), std::sin(a) * std::sin(c);
    return p;
}

VecX su11_point(double a, double b, double c) {
    VecX p(4);
    p << std::cosh(a) * std::cos(b), std::cosh(a) * std::sin(b), std::sinh(a) * std::cos(c), std::sinh(a) * std::sin(c);
    return p;
}

TEST(GroupModel, ParameterRanges) {
    EXPECT_EQ(code_of([] { GroupAmbient(GroupTag::BERGER_S3, SpaceParams::make(-1, 1)); }), ErrorCode::MODEL_MISMATCH);
    EXPECT_EQ(code_of([] { GroupAmbient(GroupTag::SU11, SpaceParams::make(1, 1)); }), ErrorCode::MODEL_MISMATCH);
    EXPECT_EQ(code_of([] { GroupAmbient(GroupTag::BERGER_S3, SpaceParams::make(1, 0)); }), ErrorCode::MODEL_MISMATCH);
    const GroupAmbient g(GroupTag::BERGER_S3, SpaceParams::make(1, 1));
    EXPECT_EQ(code_of([&] { g.check_point(Vec4(1, 1, 0, 0)); }), ErrorCode::MODEL_MISMATCH);
    EXPECT_DOUBLE_EQ(g.metric_modifier(Signature::RIEMANNIAN), 3.0);
    EXPECT_DOUBLE_EQ(g.metric_modifier(Signature::LORENTZIAN), -5.0);
}

struct GroupCase {
    GroupTag tag;
    double k, t;
};

class GroupFrame : public ::testing::TestWithParam<GroupCase> {};

TEST_P(GroupFrame, TangentAndOrthonormal) {
    const auto c = GetParam();
    const GroupAmbient g(c.tag, SpaceParams::make(c.k, c.t));
    for (double a : {0.2, 0.7, 1.1}) {
        const VecX p = c.tag == GroupTag::BERGER_S3 ? berger_point(a, 0.4, -1.3) : su11_point(a, 0.4, -1.3);
        EXPECT_NEAR(g.constraint(p), 0, 1e-12);
        const auto X = g.fields(p);
        const Vec4 grad = g.constraint_gradient(p);
        for (int i = 0; i < 3; ++i) EXPECT_NEAR(grad.dot(X.col(i)), 0, 1e-12);
        const MatX F = g.frame(p);
        const Mat3 GR = F.transpose() * g.metric(Signature::RIEMANNIAN, p) * F;
        const Mat3 GL = F.transpose() * g.metric(Signature::LORENTZIAN, p) * F;
        EXPECT_LT((GR - Mat3::Identity()).norm(), 1e-12);
        EXPECT_LT((GL - Mat3(Vec3(1, 1, -1).asDiagonal())).norm(), 1e-12);
        EXPECT_NEAR(GR(2, 2), 1.0, 1e-12);  // xi is a unit field
    }
}

TEST_P(GroupFrame, TableMatchesExtendedMetric) {
    const auto c = GetParam();
    const GroupAmbient g(c.tag, SpaceParams::make(c.k, c.t));
    const VecX p = c.tag == GroupTag::BERGER_S3 ? berger_point(0.5, 0.1, 0.9) : su11_point(0.5, 0.1, 0.9);
    for (Signature s : {Signature::RIEMANNIAN, Signature::LORENTZIAN}) {
        const auto tab = g.table(s, p);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                EXPECT_LT((group_koszul_oracle(g, s, p, i, j) - tab.c[i][j]).norm(), 1e-5) << i << j;
    }
}

INSTANTIATE_TEST_SUITE_P(Models, GroupFrame,
                         ::testing::Values(GroupCase{GroupTag::BERGER_S3, 1, 1}, GroupCase{GroupTag::BERGER_S3, 4, 1},
                                           GroupCase{GroupTag::BERGER_S3, 2, -0.5}, GroupCase{GroupTag::SU11, -1, 1},
                                           GroupCase{GroupTag::SU11, -4, 0.5}),
                         [](const ::testing::TestParamInfo<GroupCase>& i) {
                             return std::string(i.param.tag == GroupTag::BERGER_S3 ? "Berger" : "SU11") +
                                    std::to_string(i.index);
                         });

TEST(GroupModel, RoundCaseGreatCircles) {
    // kappa = 4 tau^2: the Riemannian Berger metric is the round unit sphere.
    const GroupAmbient g(GroupTag::BERGER_S3, SpaceParams::make(4, 1));
    const Vec4 a = berger_point(0.3, 0.2, 0.5);
    Vec4 b(0.1, -0.7, 0.4, 0.2);
    b -= b.dot(a) * a;
    b.normalize();
    auto circle = [a, b](double t) -> VecX { return std::cos(t) * a + std::sin(t) * b; };
    for (double t : {0.0, 0.7, 2.0}) EXPECT_LT(extended_geodesic_defect(g, Signature::RIEMANNIAN, circle, t), 1e-4);
    // A small circle is not a geodesic.
    auto small = [a, b](double t) -> VecX {
        const Vec4 n = Vec4(0, 0, 0, 1) - Vec4(0, 0, 0, 1).dot(a) * a;
        return (0.8 * (std::cos(t) * a + std::sin(t) * b) + 0.6 * n.normalized()).normalized();
    };
    EXPECT_GT(extended_geodesic_defect(g, Signature::RIEMANNIAN, small, 0.3), 1e-2);
}

TEST(GroupModel, HopfFibresAreGeodesics) {
    const GroupAmbient g(GroupTag::BERGER_S3, SpaceParams::make(1, 1));
    const VecX p = berger_point(0.4, 0.3, -0.2);
    const std::complex<double> z(p[0], p[1]), w(p[2], p[3]);
    // Integral curve of X3 = (-y, x, v, -u): (e^{it} z, e^{-it} w).
    auto fibre = [z, w](double t) -> VecX {
        const auto e = std::polar(1.0, t);
        return Vec4((e * z).real(), (e * z).imag(), (w / e).real(), (w / e).imag());
    };
    for (Signature s : {Signature::RIEMANNIAN, Signature::LORENTZIAN})
        EXPECT_LT(extended_geodesic_defect(g, s, fibre, 0.5), 1e-4);
}

TEST(Catalog, DefaultNamesBuild) {
    std::size_t built = 0;
    for (const auto& name : default_surface_names())
        for (const auto& [k, t] : SuiteConfig::default_params()) {
            const auto prm = SpaceParams::make(k, t);
            if (!surface_applicable(name, prm)) continue;
            const auto cs = make_surface(name, prm);
            EXPECT_FALSE(cs.expected.empty()) << name;
            EXPECT_TRUE(cs.immersion.domain.u0 < cs.immersion.domain.u1);
            ++built;
        }
    EXPECT_GT(built, 40u);
}

TEST(Catalog, Errors) {
    EXPECT_EQ(code_of([] { make_surface("nonsense", SpaceParams::make(0, 0)); }), ErrorCode::CONFIG_INVALID);
    EXPECT_EQ(code_of([] { make_surface("hopf:circle:q=1", SpaceParams::make(0, 0)); }), ErrorCode::CONFIG_INVALID);
    EXPECT_EQ(code_of([] { make_surface("hopf:circle:r=abc", SpaceParams::make(0, 0)); }), ErrorCode::CONFIG_INVALID);
    EXPECT_EQ(code_of([] { make_surface("slice", SpaceParams::make(1, 1)); }), ErrorCode::TAU_NONZERO);
    EXPECT_EQ(code_of([] { make_surface("helicoid", SpaceParams::make(1, 1)); }), ErrorCode::TAU_NONZERO);
    EXPECT_EQ(code_of([] { make_surface("berger-helicoid", SpaceParams::make(-1, 1)); }), ErrorCode::MODEL_MISMATCH);
    EXPECT_EQ(code_of([] { make_surface("su11-helicoid", SpaceParams::make(1, 1)); }), ErrorCode::MODEL_MISMATCH);
    EXPECT_EQ(code_of([] { make_surface("hopf:circle:r=3", SpaceParams::make(-1, 1)); }), ErrorCode::DOMAIN_VIOLATION);
    EXPECT_EQ(code_of([] { make_surface("hopf:circle:r=0", SpaceParams::make(0, 0)); }), ErrorCode::CURVE_SINGULAR);
    EXPECT_EQ(code_of([] { make_surface("file:/nonexistent/chart.json", SpaceParams::make(0, 0)); }),
              ErrorCode::CONFIG_INVALID);
    EXPECT_FALSE(surface_applicable("slice", SpaceParams::make(1, 1)));
    EXPECT_THROW(surface_applicable("nonsense", SpaceParams::make(1, 1)), Error);
}

TEST(Catalog, HopfCylinderProperties) {
    const auto cs = make_surface("hopf:circle:r=0.8", SpaceParams::make(-1, 1));
    EXPECT_TRUE(cs.expects("HOPF"));
    const auto d = evaluate_point(*cs.ambient, cs.immersion, Vec2(1.0, 0.3));
    EXPECT_EQ(d.eps, 1);
    EXPECT_NEAR(d.omega_L, 1, 1e-12);
    EXPECT_NEAR(d.angle_L, 0, 1e-12);
}

TEST(Catalog, BergerHelicoidOnSphere) {
    const auto prm = SpaceParams::make(1, 1);
    const auto cs = make_surface("berger-helicoid:alpha=1", prm);
    const auto& g = dynamic_cast<const GroupAmbient&>(*cs.ambient);
    const auto& r = cs.immersion.domain;
    for (double s = r.u0; s <= r.u1; s += 0.1)
        for (double t = r.v0; t <= r.v1; t += 0.1) {
            const VecX p = cs.immersion.chart(s, t);
            EXPECT_NEAR(p.norm(), 1.0, 1e-15);
            EXPECT_NEAR(g.constraint(p), 0, 1e-12);
        }
}

TEST(Catalog, Su11Helicoids) {
    const auto prm = SpaceParams::make(-1, 1);
    for (const char* fam : {"E", "H1", "P1", "P"}) {
        const auto cs = make_surface(std::string("su11-helicoid:family=") + fam, prm);
        const auto& g = dynamic_cast<const GroupAmbient&>(*cs.ambient);
        const auto& r = cs.immersion.domain;
        for (int i = 0; i <= 10; ++i)
            for (int j = 0; j <= 10; ++j) {
                const VecX p = cs.immersion.chart(r.u0 + (r.u1 - r.u0) * i / 10, r.v0 + (r.v1 - r.v0) * j / 10);
                EXPECT_NEAR(g.constraint(p), 0, 1e-12) << fam;
            }
    }
}

TEST(Catalog, Su11IdentityPoint) {
    Su11HelicoidSpec spec;
    spec.family = Su11Family::H1;
    spec.rate = 0.0;
    const auto M = su11_helicoid_matrix(SpaceParams::make(-1, 1), spec, 0.0, 0.0);
    EXPECT_LT((M - Eigen::Matrix2cd::Identity()).norm(), 1e-15);
}

TEST(Catalog, Su11HalfPlaneRestriction) {
    Su11HelicoidSpec spec;
    spec.family = Su11Family::E;
    spec.coeff = 0.25;
    spec.domain = {-0.5, 0.5, -0.5, 0.5};
    EXPECT_EQ(code_of([&] { su11_helicoid(SpaceParams::make(-1, 1), spec); }), ErrorCode::DOMAIN_VIOLATION);
    spec.domain = {-0.5, 0.5, 0.1, 0.5};
    EXPECT_NO_THROW(su11_helicoid(SpaceParams::make(-1, 1), spec));
    spec.A << 2.0, 0.0, 0.0, 1.0;
    EXPECT_EQ(code_of([&] { su11_helicoid(SpaceParams::make(-1, 1), spec); }), ErrorCode::MODEL_MISMATCH);
}

TEST(Catalog, CharacterOption) {
    const auto prm = SpaceParams::make(1, 1);
    const auto sp = make_surface("berger-helicoid:alpha=0.5,character=spacelike", prm);
    const auto tl = make_surface("berger-helicoid:alpha=2,character=timelike", prm);
    EXPECT_TRUE(sp.expects("SPACELIKE"));
    EXPECT_TRUE(tl.expects("TIMELIKE"));
    const auto& r = sp.immersion.domain;
    EXPECT_EQ(evaluate_point(*sp.ambient, sp.immersion, Vec2(0.5 * (r.u0 + r.u1), 0.5 * (r.v0 + r.v1))).eps, -1);
    EXPECT_EQ(code_of([&] { make_surface("berger-helicoid:character=sideways", prm); }), ErrorCode::CONFIG_INVALID);
}

TEST(Catalog, FileChart) {
    const std::string path = ::testing::TempDir() + "bicausal_chart.json";
    {
        std::ofstream out(path);
        out << R"({"x": [[1, 0, 1.0]], "y": [[0, 1, 1.0]], "z": [[2, 0, 0.5], [0, 0, 0.1]],
                  "domain": [-0.2, 0.2, -0.3, 0.3], "expected": ["SPACELIKE"]})";
    }
    const auto cs = make_surface("file:" + path, SpaceParams::make(0, 0));
    EXPECT_TRUE(cs.expects("SPACELIKE"));
    EXPECT_DOUBLE_EQ(cs.immersion.domain.v1, 0.3);
    const VecX p = cs.immersion.chart(0.2, -0.1);
    EXPECT_NEAR(p[2], 0.5 * 0.04 + 0.1, 1e-15);
    const auto d = evaluate_point(*cs.ambient, cs.immersion, Vec2(0.1, 0.1));
    // z = u^2 / 2 + 0.1 in L^3(0,0): a spacelike parabolic cylinder.
    EXPECT_EQ(d.eps, -1);
    std::remove(path.c_str());
}

TEST(Catalog, DomainOverride) {
    const auto cs = make_surface("graph:u0=-0.1,u1=0.2", SpaceParams::make(0, 0));
    EXPECT_DOUBLE_EQ(cs.immersion.domain.u0, -0.1);
    EXPECT_DOUBLE_EQ(cs.immersion.domain.u1, 0.2);
    EXPECT_EQ(code_of([] { make_surface("graph:u0=1,u1=0", SpaceParams::make(0, 0)); }), ErrorCode::CONFIG_INVALID);
}

}  // namespace
