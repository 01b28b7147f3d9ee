#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fraclap/errors.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/solver.hpp"

using namespace fraclap;
using doctest::Approx;

namespace {

double torsion(double s, double x) { return torsionScale(FracParams(1, s)) * std::pow((1 - x) * (1 + x), s); }

double supError(const Solution& sol, double s) {
    double e = 0;
    for (std::size_t i = 0; i < sol.u.size(); ++i) e = std::max(e, std::abs(sol.u.values[i] - torsion(s, sol.u.points[i][0])));
    return e;
}

SolverOptions quiet() {
    SolverOptions o;
    o.computeTrace = false;
    return o;
}

// ∫ G(x, z) f(z) dz by adaptive Gauss–Kronrod with breaks at x and ±1 (the
// interval Green function from the closed form, no product integration).
double convolutionOracle(double s, double x, const std::function<double(double)>& f) {
    GreenFunction g(FracParams(1, s), Domain::unitInterval());
    auto lo = [&](double t) { return g.value1dOffset(x, -t) * f(x - t); };
    auto hi = [&](double t) { return g.value1dOffset(x, t) * f(x + t); };
    quad::Options o{1e-14, 1e-12};
    return quad::gaussKronrod(lo, 0.0, 1.0 + x, o).value + quad::gaussKronrod(hi, 0.0, 1.0 - x, o).value;
}

}  // namespace

TEST_CASE("torsion problem: sup error and convergence order") {
    for (double s : {0.25, 0.5, 0.75}) {
        CAPTURE(s);
        const FracParams p(1, s);
        const auto sol = solveLinear(p, Domain::unitInterval(), SourceTerm::constant(1.0), 1.0 / 256, quiet());
        CHECK(supError(sol, s) < 1e-4);

        double prev = 0;
        for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128}) {
            const double e = supError(solveLinear(p, Domain::unitInterval(), SourceTerm::constant(1.0), h, quiet()), s);
            if (prev > 0) CHECK(std::log2(prev / e) >= 1.0);
            prev = e;
        }
    }
}

TEST_CASE("zero source gives the zero solution") {
    const FracParams p(1, 0.4);
    const auto lin = solveLinear(p, Domain::unitInterval(), SourceTerm::constant(0.0), 1.0 / 32, quiet());
    for (double v : lin.u.values) CHECK(v == 0.0);
    const auto semi = solveSemilinear(p, Domain::unitInterval(),
                                      SourceTerm::semilinear([](double, double q) { return q * q * q; }), 1.0 / 32,
                                      quiet());
    for (double v : semi.u.values) CHECK(v == 0.0);
    CHECK(semi.iterations == 1);
}

TEST_CASE("variable source matches an independent convolution") {
    for (double s : {0.3, 0.5, 0.8}) {
        CAPTURE(s);
        auto f = [](double z) { return std::exp(z) + z * z; };
        const auto sol = solveLinear(FracParams(1, s), Domain::unitInterval(), SourceTerm::pure(f), 1.0 / 256, quiet());
        for (double x : {-0.93, -0.41, 0.0, 0.377, 0.9}) {
            CAPTURE(x);
            CHECK(sol.valueAt(x) == Approx(convolutionOracle(s, x, f)).epsilon(5e-5));
        }
    }
}

TEST_CASE("off-grid values and derivatives of the torsion function") {
    for (double s : {0.25, 0.5, 0.75}) {
        CAPTURE(s);
        const auto sol = solveLinear(FracParams(1, s), Domain::unitInterval(), SourceTerm::constant(1.0), 1.0 / 256, quiet());
        const double k = torsionScale(FracParams(1, s));
        for (double x : {-0.8, -0.333, 0.1, 0.55, 0.97}) {
            CAPTURE(x);
            CHECK(std::abs(sol.valueAt(x) - torsion(s, x)) < 1e-4);
            const double exact = -2 * s * x * k * std::pow((1 - x) * (1 + x), s - 1);
            CHECK(std::abs(sol.derivativeAt(x) - exact) < 1e-3 * std::max(1.0, std::abs(exact)));
        }
    }
}

TEST_CASE("boundary trace of the torsion function") {
    for (double s : {0.25, 0.5}) {
        CAPTURE(s);
        SolverOptions o;
        const auto sol = solveLinear(FracParams(1, s), Domain::unitInterval(), SourceTerm::constant(1.0), 1.0 / 128, o);
        REQUIRE(sol.trace.size() == 2);
        const double expected = std::pow(2.0, s) * torsionScale(FracParams(1, s));
        for (double v : sol.trace.values) CHECK(std::abs(v - expected) < 1e-3);
    }
    const auto half = solveLinear(FracParams(1, 0.5), Domain::unitInterval(), SourceTerm::constant(1.0), 1.0 / 128);
    CHECK(std::abs(half.trace.values[0] - std::sqrt(2.0)) < 1e-3);
}

TEST_CASE("semilinear source 1 - u") {
    const FracParams p(1, 0.5);
    const auto sol = solveSemilinear(p, Domain::unitInterval(),
                                     SourceTerm::semilinear([](double, double q) { return 1 - q; }, {},
                                                            [](double, double) { return -1.0; }),
                                     1.0 / 64, quiet());
    CHECK(sol.residual <= 1e-10);
    CHECK_FALSE(sol.damped);
    for (std::size_t i = 0; i < sol.u.size(); ++i) {
        CHECK(sol.u.values[i] > 0);
        CHECK(sol.u.values[i] < torsion(0.5, sol.u.points[i][0]));
    }
    // fixed point: u = ∫G(1 - u)
    const double x = 0.3;
    const double direct = sol.valueAt(x);
    CHECK(direct == Approx(sol.interpolated(x)).epsilon(1e-4));
}

TEST_CASE("damping engages for a strong coupling and diverging iterations are reported") {
    const FracParams p(1, 0.5);
    const auto damped = solveSemilinear(p, Domain::unitInterval(),
                                        SourceTerm::semilinear([](double, double q) { return 1 - 3 * q; }), 1.0 / 32,
                                        quiet());
    CHECK(damped.damped);
    CHECK(damped.residual <= 1e-10);
    CHECK_THROWS_AS(solveSemilinear(p, Domain::unitInterval(),
                                    SourceTerm::semilinear([](double, double q) { return 1 - 10 * q; }), 1.0 / 32,
                                    quiet()),
                    ConvergenceError);
    SolverOptions few = quiet();
    few.maxIterations = 3;
    CHECK_THROWS_AS(solveSemilinear(p, Domain::unitInterval(),
                                    SourceTerm::semilinear([](double, double q) { return 1 - 0.5 * q; }), 1.0 / 32, few),
                    ConvergenceError);
}

TEST_CASE("odd source gives an odd solution") {
    const auto sol = solveLinear(FracParams(1, 0.6), Domain::unitInterval(), SourceTerm::pure([](double x) { return x; }),
                                 1.0 / 64, quiet());
    CHECK(std::abs(sol.valueAt(0.0)) < 1e-6);
    const std::size_t n = sol.u.size();
    for (std::size_t i = 0; i < n / 2; ++i) CHECK(sol.u.values[i] == Approx(-sol.u.values[n - 1 - i]).epsilon(1e-9));
}

TEST_CASE("comparison properties on random sources") {
    std::mt19937_64 rng(20261016);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_real_distribution<double> sdist(0.1, 0.9);
    for (int trial = 0; trial < 6; ++trial) {
        const double s = sdist(rng);
        const double a0 = coef(rng), a1 = coef(rng), a2 = coef(rng);
        CAPTURE(s);
        // f >= 0: a nonnegative quadratic
        auto f = [=](double x) { return (a0 + a1 * x) * (a0 + a1 * x) + a2 * a2; };
        auto g = [=](double x) { return f(x) + 0.25 * (1 + std::cos(3 * x)); };
        const FracParams p(1, s);
        const auto uf = solveLinear(p, Domain::unitInterval(), SourceTerm::pure(f), 1.0 / 32, quiet());
        const auto ug = solveLinear(p, Domain::unitInterval(), SourceTerm::pure(g), 1.0 / 32, quiet());
        double supF = 0;
        for (double x = -1; x <= 1; x += 1.0 / 256) supF = std::max(supF, std::abs(f(x)));
        const double lam = 2.5 * coef(rng);
        const auto ul = solveLinear(p, Domain::unitInterval(), SourceTerm::pure([=](double x) { return lam * f(x); }),
                                    1.0 / 32, quiet());
        for (std::size_t i = 0; i < uf.u.size(); ++i) {
            CHECK(uf.u.values[i] >= 0);
            CHECK(uf.u.values[i] <= ug.u.values[i]);
            CHECK(std::abs(uf.u.values[i]) <= supF * torsionScale(p) * (1 + 1e-9));
            CHECK(std::abs(ul.u.values[i] - lam * uf.u.values[i]) <= 1e-12 * std::max(1.0, std::abs(ul.u.values[i])));
        }
    }
}

TEST_CASE("scaled and shifted interval") {
    const double s = 0.5;
    const auto d = Domain::interval(1.0, 4.0);  // R = 1.5
    const auto sol = solveLinear(FracParams(1, s), d, SourceTerm::constant(1.0), 3.0 / 256, quiet());
    for (std::size_t i = 0; i < sol.u.size(); ++i) {
        const double x = sol.u.points[i][0];
        const double exact = torsionScale(FracParams(1, s)) * std::pow((x - 1) * (4 - x), s);
        CHECK(std::abs(sol.u.values[i] - exact) < 2e-4);
    }
}

TEST_CASE("capabilities and preconditions") {
    CHECK_THROWS_AS(solveLinear(FracParams(2, 0.5), Domain::unitBall(2), SourceTerm::constant(1.0), 0.1),
                    CapabilityError);
    CHECK_THROWS_AS(GreenConvolution1D(FracParams(3, 0.5), Domain::unitBall(3), 0.1), CapabilityError);
    CHECK_THROWS_AS(solveLinear(FracParams(1, 0.5), Domain::unitInterval(),
                                SourceTerm::semilinear([](double, double q) { return q; }), 0.1),
                    ParameterError);
}

TEST_CASE("boundary interpolant") {
    const double s = 0.35;
    const auto d = Domain::unitInterval();
    std::vector<double> nodes, vals;
    for (const auto& pt : interiorGrid(d, 1.0 / 64)) {
        nodes.push_back(pt[0]);
        vals.push_back(std::pow(1 - pt[0] * pt[0], s) * std::cos(pt[0]));
    }
    BoundaryInterpolant it(d, s, nodes, vals);
    for (double z : {-0.9999, -0.5, 0.123, 0.99}) {
        const double A = 1 - z * z;
        CHECK(it(z) == Approx(std::pow(A, s) * std::cos(z)).epsilon(1e-7));
        const double dz = std::pow(A, s) * (-std::sin(z)) + s * std::pow(A, s - 1) * (-2 * z) * std::cos(z);
        CHECK(it.derivative(z) == Approx(dz).epsilon(1e-5));
    }
    CHECK(it(1.5) == 0.0);
}

TEST_CASE("exports") {
    const auto sol = solveLinear(FracParams(1, 0.5), Domain::unitInterval(), SourceTerm::constant(1.0), 0.5, quiet());
    std::ostringstream csv, plot;
    writeSolutionCsv(sol, csv);
    writePlotData(sol, plot);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,u,delta_s,ratio");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 4);
    const auto j = solutionSummary(sol);
    CHECK(j["points"] == 4);
    CHECK(j["s"] == 0.5);
}

TEST_CASE("results do not depend on the number of threads") {
    SolverOptions one = quiet(), many = quiet();
    one.jobs = 1;
    many.jobs = 4;
    auto f = SourceTerm::pure([](double x) { return std::sin(4 * x) + 1; });
    const auto a = solveLinear(FracParams(1, 0.45), Domain::unitInterval(), f, 1.0 / 64, one);
    const auto b = solveLinear(FracParams(1, 0.45), Domain::unitInterval(), f, 1.0 / 64, many);
    CHECK((a.u.values == b.u.values));
}
