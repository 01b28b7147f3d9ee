#include <cmath>
#include <random>

#include "doctest.h"
#include "fraclap/errors.hpp"
#include "fraclap/expression.hpp"

using namespace fraclap;
using doctest::Approx;

TEST_CASE("expressions evaluate with the usual precedence") {
    CHECK(Expression::parse("1 + 2 * 3")(0, 0) == 7);
    CHECK(Expression::parse("(1 + 2) * 3")(0, 0) == 9);
    CHECK(Expression::parse("2 ^ 3 ^ 2")(0, 0) == 512);
    CHECK(Expression::parse("-2 ^ 2")(0, 0) == -4);
    CHECK(Expression::parse("8 / 4 / 2")(0, 0) == 1);
    CHECK(Expression::parse("1 - 2 - 3")(0, 0) == -4);
    CHECK(Expression::parse("x * u")(3, 5) == 15);
    CHECK(Expression::parse("1e-3 * 2")(0, 0) == Approx(2e-3));
    CHECK(Expression::parse("exp(log(x))")(2.5, 0) == Approx(2.5));
    CHECK(Expression::parse("sqrt(x) * pi")(4, 0) == Approx(2 * M_PI));
    CHECK(Expression::parse("  1-u ")(0, 0.25) == 0.75);
}

TEST_CASE("malformed expressions raise ParameterError") {
    for (const char* bad : {"", "1+", "(1", "1)", "2x", "foo(x)", "exp x", "x $ 2", "y", "sqrt()"})
        CHECK_THROWS_AS(Expression::parse(bad), ParameterError);
}

TEST_CASE("symbolic partials agree with central differences") {
    const char* cases[] = {"1 - u",       "x^2 * u - 3",     "exp(-x*u) / (1 + u^2)", "sqrt(1 + x^2) * log(2 + u)",
                           "x^u + u^x",   "(x - u)^3 / 7",   "-u^2 + 2*x*u",          "1"};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> xs(0.2, 0.9), us(0.1, 1.5);
    for (const char* text : cases) {
        const Expression e = Expression::parse(text);
        const Expression dx = e.dx(), du = e.du();
        for (int k = 0; k < 10; ++k) {
            const double x = xs(rng), u = us(rng), h = 1e-5;
            const double fdx = (e(x + h, u) - e(x - h, u)) / (2 * h);
            const double fdu = (e(x, u + h) - e(x, u - h)) / (2 * h);
            CHECK(dx(x, u) == Approx(fdx).epsilon(1e-7).scale(1));
            CHECK(du(x, u) == Approx(fdu).epsilon(1e-7).scale(1));
        }
    }
}

TEST_CASE("source terms follow the dependence on u") {
    CHECK_FALSE(Expression::parse("x^2 + 1").dependsOnU());
    CHECK(Expression::parse("1 - u").dependsOnU());
    const SourceTerm pure = sourceFromExpression(Expression::parse("x^2 + 1"));
    CHECK(pure.kind == SourceKind::pureSpace);
    CHECK(pure.hasPartials());
    CHECK(pure(0.5, 9.0) == Approx(1.25));
    const SourceTerm semi = sourceFromExpression(Expression::parse("1 - u*x"));
    CHECK(semi.kind == SourceKind::semilinear);
    CHECK(semi(0.5, 2.0) == Approx(0.0));
}
