#include "fraclap/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczosGamma(double x) {
    // valid for x >= 0.5
    const double z = x - 1.0;
    double sum = kLanczos[0];
    for (std::size_t k = 1; k < kLanczos.size(); ++k) sum += kLanczos[k] / (z + static_cast<double>(k));
    const double t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * sum;
}

// Modified Lentz evaluation of the continued fraction for the incomplete beta.
double betaContinuedFraction(double a, double b, double x) {
    constexpr int kMaxIter = 1000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw NumericalError("incompleteBeta: continued fraction did not converge");
}

double directIncompleteBeta(double a, double b, double x, double xc) {
    if (x <= 0.0) return 0.0;
    const double front = std::exp(a * std::log(x) + b * std::log(xc));
    return front * betaContinuedFraction(a, b, x) / a;
}

}  // namespace

std::string toString(Regime r) {
    switch (r) {
        case Regime::subcritical: return "subcritical";
        case Regime::logCritical: return "logCritical";
        case Regime::superharmonicLine: return "superharmonicLine";
    }
    return "unknown";
}

FracParams::FracParams(int dim, double s) : dim_(dim), s_(s) {
    if (dim < 1) throw ParameterError("FracParams: dimension must be >= 1");
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("FracParams: order s must lie in (0,1)");
    const double twoS = 2.0 * s;
    if (static_cast<double>(dim) > twoS)
        regime_ = Regime::subcritical;
    else if (static_cast<double>(dim) == twoS)
        regime_ = Regime::logCritical;
    else
        regime_ = Regime::superharmonicLine;
}

double gammaFn(double x) {
    if (!(x > 0.0)) throw DomainError("gammaFn: argument must be positive");
    if (x < 0.5) return kPi / (std::sin(kPi * x) * lanczosGamma(1.0 - x));
    return lanczosGamma(x);
}

double gammaReal(double x) {
    if (x > 0.0) return gammaFn(x);
    if (x == std::floor(x)) throw DomainError("gammaReal: pole at a non-positive integer");
    return kPi / (std::sin(kPi * x) * lanczosGamma(1.0 - x));
}

double betaFn(double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw DomainError("betaFn: arguments must be positive");
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double incompleteBeta(double a, double b, double x, double xc) {
    if (!(a > 0.0 && b > 0.0)) throw DomainError("incompleteBeta: parameters must be positive");
    if (x < 0.0 || xc < 0.0) throw DomainError("incompleteBeta: x must lie in [0,1]");
    if (x < (a + 1.0) / (a + b + 2.0)) return directIncompleteBeta(a, b, x, xc);
    return betaFn(a, b) - directIncompleteBeta(b, a, xc, x);
}

double cConst(const FracParams& p) {
    const double n = p.dim();
    const double s = p.s();
    return s * std::pow(4.0, s) * gammaFn(0.5 * (n + 2.0 * s)) /
           (std::pow(kPi, 0.5 * n) * gammaFn(1.0 - s));
}

double bConst(const FracParams& p) {
    if (p.regime() != Regime::subcritical)
        throw RegimeError("bConst: requires N > 2s (regime is " + toString(p.regime()) + ")");
    const double n = p.dim();
    const double s = p.s();
    return std::pow(kPi, -0.5 * n) * std::pow(4.0, -s) * gammaFn(0.5 * (n - 2.0 * s)) / gammaFn(s);
}

double fundamental(const FracParams& p, double r) {
    if (!(r > 0.0)) throw SingularityError("fundamental: distance must be positive");
    const double s = p.s();
    switch (p.regime()) {
        case Regime::subcritical: return bConst(p) * std::pow(r, 2.0 * s - p.dim());
        case Regime::logCritical: return -std::log(r) / kPi;
        case Regime::superharmonicLine:
            return std::pow(r, 2.0 * s - 1.0) / (2.0 * std::cos(kPi * s) * gammaFn(2.0 * s));
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double torsionScale(const FracParams& p) {
    const double n = p.dim();
    const double s = p.s();
    return gammaFn(0.5 * n) / (std::pow(4.0, s) * gammaFn(0.5 * (n + 2.0 * s)) * gammaFn(1.0 + s));
}

double ballGreenScale(const FracParams& p) {
    const double n = p.dim();
    const double s = p.s();
    const double gs = gammaFn(s);
    return gammaFn(0.5 * n) / (std::pow(4.0, s) * std::pow(kPi, 0.5 * n) * gs * gs);
}

ConstantSet constants(const FracParams& p) {
    ConstantSet out{};
    out.cNs = cConst(p);
    if (p.regime() == Regime::subcritical) out.bNs = bConst(p);
    const double g = gammaFn(1.0 + p.s());
    out.gammaSq = g * g;
    out.torsionScale = torsionScale(p);
    return out;
}

}  // namespace fraclap
