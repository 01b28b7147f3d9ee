#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fraclap/errors.hpp"
#include "fraclap/operator.hpp"
#include "fraclap/quadrature.hpp"

using namespace fraclap;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

double gaussian(const Point& x) { return std::exp(-x.norm2()); }

// (-Δ)^s e^{-|x|²} through its Fourier transform.
double gaussianMultiplier1d(double s, double x) {
    auto f = [&](double xi) { return std::pow(xi, 2 * s) * std::sqrt(kPi) * std::exp(-0.25 * xi * xi) * std::cos(x * xi); };
    return quad::gaussKronrod(f, 0.0, 40.0, {1e-14, 1e-13}).value / kPi;
}

double gaussianMultiplier2d(double s, double r) {
    auto f = [&](double k) { return std::pow(k, 2 * s + 1) * std::exp(-0.25 * k * k) * std::cyl_bessel_j(0.0, k * r); };
    return 0.5 * quad::gaussKronrod(f, 0.0, 40.0, {1e-14, 1e-13}).value;
}

double bump(double t) { return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

}  // namespace

TEST_CASE("fractional Laplacian of a Gaussian matches the Fourier multiplier") {
    const Domain wide = Domain::interval(-9.0, 9.0);
    for (double s : {0.2, 0.5, 0.8})
        for (double x : {0.0, 0.7, 1.5, 3.0}) {
            const double ref = gaussianMultiplier1d(s, x);
            CHECK(applyFracLap(FracParams(1, s), wide, gaussian, Point{x}) == Approx(ref).epsilon(1e-7));
        }
    const Domain disk = Domain::ball(Point{0.0, 0.0}, 9.0);
    for (double s : {0.3, 0.7})
        for (double r : {0.0, 0.8}) {
            const double ref = gaussianMultiplier2d(s, r);
            CHECK(applyFracLap(FracParams(2, s), disk, gaussian, Point{r, 0.0}) == Approx(ref).epsilon(1e-6));
        }
}

TEST_CASE("torsion functions are mapped to 1") {
    const FracParams half(1, 0.5);
    auto u = [](const Point& x) { return std::sqrt(1.0 - x[0] * x[0]); };
    CHECK(applyFracLap(half, Domain::unitInterval(), u, Point{0.3}) == Approx(1.0).epsilon(1e-6));

    for (int n : {1, 2, 3})
        for (double s : {0.25, 0.75}) {
            const FracParams p(n, s);
            const double g = torsionScale(p);
            auto w = [&](const Point& x) { return g * std::pow(1.0 - x.norm2(), s); };
            OperatorOptions opt;
            opt.directions = n == 3 ? 16 : 64;
            const Point x = Point::axis(n, 0, 0.45);
            CHECK(applyFracLap(p, Domain::unitBall(n), w, x, opt) == Approx(1.0).epsilon(n == 3 ? 1e-4 : 1e-6));
        }
}

TEST_CASE("zero function and linearity") {
    const FracParams p(1, 0.35);
    const Domain d = Domain::unitInterval();
    auto zero = [](const Point&) { return 0.0; };
    CHECK(applyFracLap(p, d, zero, Point{0.2}) == 0.0);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> coef(-2.0, 2.0), pos(-0.9, 0.9);
    auto u = [](const Point& x) { return std::cos(1.3 * x[0]) * (1 - x[0] * x[0]); };
    auto v = [](const Point& x) { return std::sqrt(1 - x[0] * x[0]) * x[0]; };
    for (int k = 0; k < 20; ++k) {
        const double a = coef(rng), b = coef(rng);
        const Point x{pos(rng)};
        auto w = [&](const Point& y) { return a * u(y) + b * v(y); };
        const double lhs = applyFracLap(p, d, w, x);
        const double rhs = a * applyFracLap(p, d, u, x) + b * applyFracLap(p, d, v, x);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("reflection equivariance on the interval") {
    const FracParams p(1, 0.6);
    const Domain d = Domain::unitInterval();
    auto u = [](const Point& x) { return (1 - x[0] * x[0]) * std::exp(x[0]); };
    auto ur = [&](const Point& x) { return u(Point{-x[0]}); };
    for (double x : {-0.7, 0.1, 0.55}) {
        const double a = applyFracLap(p, d, u, Point{x});
        const double b = applyFracLap(p, d, ur, Point{-x});
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("translation equivariance") {
    const FracParams p(2, 0.4);
    auto u = [](const Point& x) { return 1 - x.norm2(); };
    const Point shift{0.7, -1.2};
    auto us = [&](const Point& x) { return u(x - shift); };
    const Point x{0.2, 0.3};
    const double a = applyFracLap(p, Domain::unitBall(2), u, x);
    const double b = applyFracLap(p, Domain::ball(shift, 1.0), us, x + shift);
    CHECK(a == Approx(b).epsilon(1e-10));
}

TEST_CASE("interaction form: nonnegative and symmetric") {
    const Domain d = Domain::unitInterval();
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> pos(-0.95, 0.95);
    auto u = [](const Point& x) { return std::sin(2 * x[0]) + 0.5; };
    auto v = [](const Point& x) { return (1 - x[0] * x[0]) * x[0]; };
    for (double s : {0.3, 0.7}) {
        const FracParams p(1, s);
        for (int k = 0; k < 50; ++k) {
            const Point x{pos(rng)};
            CHECK(interactionForm(p, d, u, u, x) >= 0.0);
            const double a = interactionForm(p, d, u, v, x), b = interactionForm(p, d, v, u, x);
            CHECK(std::abs(a - b) <= 1e-13 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST_CASE("fractional product rule") {
    const Domain d = Domain::unitInterval();
    auto u = [](const Point& x) { return bump(x[0] / 0.8); };
    auto v = [](const Point& x) { return bump((x[0] - 0.1) / 0.7) * (1 + x[0]); };
    auto uv = [&](const Point& x) { return u(x) * v(x); };
    for (double s : {0.3, 0.6}) {
        const FracParams p(1, s);
        for (int k = 0; k < 20; ++k) {
            const Point x{-0.95 + 1.9 * (k + 0.5) / 20};
            const double res = applyFracLap(p, d, uv, x) - v(x) * applyFracLap(p, d, u, x) -
                               u(x) * applyFracLap(p, d, v, x) + interactionForm(p, d, u, v, x);
            CHECK(std::abs(res) < 1e-6);
        }
    }
}

TEST_CASE("exterior kernel mass") {
    // at the centre of a ball: |S^{N-1}| R^{-2s} / (2s)
    const double R = 1.5;
    CHECK(exteriorKernelMass(FracParams(1, 0.3), Domain::interval(-R, R), Point{0.0}) ==
          Approx(2.0 * std::pow(R, -0.6) / 0.6).epsilon(1e-13));
    CHECK(exteriorKernelMass(FracParams(2, 0.3), Domain::ball(Point{0.0, 0.0}, R), Point{0.0, 0.0}) ==
          Approx(2 * kPi * std::pow(R, -0.6) / 0.6).epsilon(1e-12));
    CHECK(exteriorKernelMass(FracParams(3, 0.3), Domain::ball(Point{0.0, 0.0, 0.0}, R), Point{0.0, 0.0, 0.0}, 16) ==
          Approx(4 * kPi * std::pow(R, -0.6) / 0.6).epsilon(1e-12));
    // off-centre on the interval: ((y-a)^{-2s} + (b-y)^{-2s}) / (2s)
    CHECK(exteriorKernelMass(FracParams(1, 0.7), Domain::unitInterval(), Point{0.4}) ==
          Approx((std::pow(1.4, -1.4) + std::pow(0.6, -1.4)) / 1.4).epsilon(1e-13));
}

TEST_CASE("energy form: symmetry, positivity, torsion value") {
    const Domain d = Domain::unitInterval();
    const FracParams p(1, 0.5);
    std::mt19937_64 rng(31);
    std::normal_distribution<double> n01;
    const double h = 1.0 / 16;
    for (int k = 0; k < 50; ++k) {
        auto u = GridFunction::sample(d, h, [&](const Point&) { return n01(rng); });
        auto v = GridFunction::sample(d, h, [&](const Point&) { return n01(rng); });
        CHECK(energyForm(p, u, v) == energyForm(p, v, u));
        CHECK(energyForm(p, u, u) >= 0.0);
    }
    // the δ^s boundary layer limits the pair sum to first order in h
    auto torsionOn = [](double mesh) {
        return GridFunction::sample(Domain::unitInterval(), mesh, [](const Point& x) { return std::sqrt(1 - x[0] * x[0]); });
    };
    const auto torsion = torsionOn(1.0 / 1024);
    CHECK(std::abs(energyForm(p, torsion, torsion) - kPi / 2) < 1e-3);
    const double e1 = std::abs(energyForm(p, torsionOn(1.0 / 64), torsionOn(1.0 / 64)) - kPi / 2);
    const double e2 = std::abs(energyForm(p, torsionOn(1.0 / 128), torsionOn(1.0 / 128)) - kPi / 2);
    CHECK(std::log2(e1 / e2) > 0.9);

    auto other = GridFunction::sample(Domain::unitInterval(), 1.0 / 8, [](const Point&) { return 1.0; });
    CHECK_THROWS_AS(energyForm(p, other, torsion), ParameterError);
}

TEST_CASE("energy form is consistent with the pointwise operator") {
    const Domain d = Domain::unitInterval();
    auto u = [](const Point& x) { return bump(x[0] / 0.9); };
    auto v = [](const Point& x) { return bump((x[0] + 0.1) / 0.8) * std::cos(x[0]); };
    for (double s : {0.3, 0.7}) {
        const FracParams p(1, s);
        std::vector<double> gaps;
        for (double h : {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64}) {
            const auto gu = GridFunction::sample(d, h, u);
            const auto gv = GridFunction::sample(d, h, v);
            double weak = 0.0;
            for (std::size_t i = 0; i < gu.size(); ++i) weak += gv.values[i] * applyFracLap(p, d, u, gu.points[i]) * h;
            gaps.push_back(std::abs(energyForm(p, gu, gv) - weak));
        }
        for (std::size_t k = 0; k + 1 < gaps.size(); ++k) CHECK(gaps[k + 1] < gaps[k]);
        const double order = std::log2(gaps[gaps.size() - 2] / gaps.back());
        CHECK(order >= 1.0);
    }
}

TEST_CASE("energy form in two dimensions is positive and symmetric") {
    const FracParams p(2, 0.4);
    const Domain d = Domain::unitBall(2);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n01;
    for (int k = 0; k < 5; ++k) {
        auto u = GridFunction::sample(d, 0.2, [&](const Point&) { return n01(rng); });
        auto v = GridFunction::sample(d, 0.2, [&](const Point&) { return n01(rng); });
        CHECK(energyForm(p, u, v) == Approx(energyForm(p, v, u)).epsilon(1e-14));
        CHECK(energyForm(p, u, u) > 0.0);
    }
}

TEST_CASE("universal constant a_{N,s}[ρ]") {
    const CutoffProfile standard, narrow(1.2, 1.9);
    for (double s : {0.25, 0.5, 0.75}) {
        const auto a = aConstant(FracParams(1, s), standard);
        const auto b = aConstant(FracParams(1, s), narrow);
        CHECK(a.converged);
        CHECK(std::abs(a.value + 2.0) < 1e-2);
        CHECK(std::abs(a.value - b.value) <= a.error + b.error + 1e-6);
    }
    const auto plane = aConstant(FracParams(2, 0.5));
    CHECK(std::abs(plane.value + 2.0) < 1e-2);
    CHECK_THROWS_AS(aConstant(FracParams(3, 0.5)), CapabilityError);

    const auto starved = aConstant(FracParams(1, 0.5), standard, 1000);
    CHECK_FALSE(starved.converged);
}

TEST_CASE("cutoff profile") {
    const CutoffProfile rho;
    CHECK(rho(0.0) == 1.0);
    CHECK(rho(-1.0) == 1.0);
    CHECK(rho(2.0) == 0.0);
    CHECK(rho(1.5) == Approx(0.5));
    double prev = 1.0;
    for (double t = 1.0; t <= 2.0; t += 0.01) {
        const double v = rho(t);
        CHECK(v <= prev);
        CHECK(v >= 0.0);
        prev = v;
    }
    CHECK_THROWS_AS(CutoffProfile(0.5, 2.0), ParameterError);
}
