#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fraclap/domain.hpp"
#include "fraclap/errors.hpp"

using namespace fraclap;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

Point randomPoint(std::mt19937_64& rng, int dim, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    Point p(dim);
    for (int i = 0; i < dim; ++i) p[i] = u(rng);
    return p;
}
}  // namespace

TEST_CASE("signed distance") {
    const auto I = Domain::unitInterval();
    CHECK(I.signedDistance(Point{0.3}) == Approx(0.7));
    CHECK(I.signedDistance(Point{1.5}) == Approx(-0.5));
    const auto B = Domain::unitBall(3);
    CHECK(B.signedDistance(Point{0.2, 0.0, 0.0}) == Approx(0.8));
    CHECK(B.signedDistance(Point{0.0, 0.0, 0.2}) == Approx(0.8));
}

TEST_CASE("signed distance is 1-Lipschitz") {
    std::mt19937_64 rng(11);
    const Domain doms[] = {Domain::interval(-0.5, 1.5), Domain::unitBall(2), Domain::ball(Point{0.1, -0.2, 0.3}, 0.7)};
    for (const auto& d : doms)
        for (int k = 0; k < 1000; ++k) {
            const Point x = randomPoint(rng, d.dim(), -2.0, 2.0);
            const Point y = randomPoint(rng, d.dim(), -2.0, 2.0);
            CHECK(std::abs(d.signedDistance(x) - d.signedDistance(y)) <= distance(x, y) + 1e-15);
        }
}

TEST_CASE("outward normal") {
    const auto I = Domain::unitInterval();
    CHECK(I.outwardNormal(Point{1.0})[0] == Approx(1.0));
    CHECK(I.outwardNormal(Point{-1.0})[0] == Approx(-1.0));
    const auto n = Domain::unitBall(2).outwardNormal(Point{0.0, 1.0});
    CHECK(n[0] == Approx(0.0));
    CHECK(n[1] == Approx(1.0));
    CHECK_THROWS_AS(I.outwardNormal(Point{0.5}), GeometryError);
}

TEST_CASE("boundary rules") {
    const auto r1 = boundaryRule(Domain::unitInterval(), 1);
    REQUIRE(r1.size() == 2);
    CHECK(r1.nodes[0][0] == -1.0);
    CHECK(r1.nodes[1][0] == 1.0);
    CHECK(r1.weights[0] == 1.0);
    CHECK(r1.normals[0][0] == -1.0);
    CHECK(r1.normals[1][0] == 1.0);

    for (int order : {3, 16, 128}) CHECK(std::abs(boundaryRule(Domain::unitBall(2), order).totalWeight() - 2 * kPi) < 1e-10);
    CHECK(std::abs(boundaryRule(Domain::unitBall(3), 32).totalWeight() - 4 * kPi) < 1e-10);
    CHECK(boundaryRule(Domain::ball(Point{1.0, 2.0}, 0.5), 64).totalWeight() == Approx(kPi).epsilon(1e-12));

    for (const auto& d : {Domain::unitBall(2), Domain::unitBall(3)}) {
        const auto rule = boundaryRule(d, 24);
        for (const auto& n : rule.normals) CHECK(n.norm() == Approx(1.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(boundaryRule(Domain::unitInterval(), 0), ParameterError);
}

TEST_CASE("sphere and circle rules integrate affine functions exactly") {
    for (int dim : {2, 3}) {
        const Domain d = Domain::ball(dim == 2 ? Point{0.3, -0.1} : Point{0.3, -0.1, 0.2}, 1.3);
        const auto rule = boundaryRule(d, 20);
        // ∫ (α + β·x) dσ = |∂Ω| (α + β·c)
        Point beta(dim);
        for (int i = 0; i < dim; ++i) beta[i] = 0.7 - 0.4 * i;
        double acc = 0.0;
        for (std::size_t k = 0; k < rule.size(); ++k) acc += rule.weights[k] * (2.0 + beta.dot(rule.nodes[k]));
        CHECK(std::abs(acc - d.boundaryMeasure() * (2.0 + beta.dot(d.center()))) < 1e-10);
    }
}

TEST_CASE("distance along the inward normal is first-order exact") {
    for (const auto& d : {Domain::unitInterval(), Domain::unitBall(2), Domain::unitBall(3)}) {
        const auto rule = boundaryRule(d, 8);
        for (std::size_t k = 0; k < rule.size(); ++k)
            for (double eps : {1e-3, 1e-4}) {
                const double delta = d.signedDistance(rule.nodes[k] - eps * rule.normals[k]);
                CHECK(std::abs(delta - eps) < 10.0 * eps * eps);
            }
    }
}

TEST_CASE("interior grids") {
    const auto g = interiorGrid(Domain::unitInterval(), 0.5);
    REQUIRE(g.size() == 4);
    const double expected[] = {-0.75, -0.25, 0.25, 0.75};
    for (int i = 0; i < 4; ++i) CHECK(g[i][0] == Approx(expected[i]));
    const auto g1 = interiorGrid(Domain::unitInterval(), 1.0);
    REQUIRE(g1.size() == 2);
    CHECK(g1[0][0] == Approx(-0.5));
    CHECK(g1[1][0] == Approx(0.5));

    const auto g2 = interiorGrid(Domain::unitBall(2), 0.5);
    CHECK(g2.size() == 12);  // 16 cell centres, the 4 corners (|x| ≈ 1.06) fall outside
    for (const auto& p : g2) CHECK(p.norm() < 1.0);

    CHECK_THROWS_AS(interiorGrid(Domain::unitInterval(), 0.0), ParameterError);
    CHECK_THROWS_AS(interiorGrid(Domain::unitInterval(), 0.3), ParameterError);
    CHECK_THROWS_AS(interiorGrid(Domain::unitInterval(), 2.0), ParameterError);
}

TEST_CASE("exit distance along rays") {
    const auto d = Domain::unitBall(2);
    CHECK(d.exitDistance(Point{0.5, 0.0}, Point{1.0, 0.0}) == Approx(0.5));
    CHECK(d.exitDistance(Point{0.5, 0.0}, Point{-1.0, 0.0}) == Approx(1.5));
    CHECK(Domain::interval(-0.5, 1.5).exitDistance(Point{0.0}, Point{-1.0}) == Approx(0.5));
}

TEST_CASE("domain JSON form") {
    const auto d = Domain::interval(-0.5, 1.5);
    const auto j = toJson(d);
    CHECK(j["kind"] == "interval");
    CHECK(j["params"]["a"].get<double>() == -0.5);
    const auto back = domainFromJson(j);
    CHECK(back.center()[0] == Approx(0.5));
    const auto b = domainFromJson(toJson(Domain::ball(Point{0.0, 1.0}, 2.0)));
    CHECK(b.dim() == 2);
    CHECK(b.radius() == 2.0);
    CHECK_THROWS_AS(domainFromJson(nlohmann::json{{"kind", "torus"}, {"params", nlohmann::json::object()}}),
                    ParameterError);
}
