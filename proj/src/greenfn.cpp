#include "fraclap/greenfn.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

GreenFunction::GreenFunction(const FracParams& p, const Domain& d)
    : p_(p), d_(d), kappa_(ballGreenScale(p)), alpha_(0.5 * p.dim() - p.s()) {
    if (p.dim() != d.dim()) throw ParameterError("GreenFunction: parameter and domain dimensions differ");
    const double two_s_minus_n = 2.0 * p.s() - p.dim();
    scaleValue_ = std::pow(d.radius(), two_s_minus_n);
    scaleGrad_ = scaleValue_ / d.radius();
    switch (p.regime()) {
        case Regime::subcritical: fundamentalConst_ = bConst(p); break;
        case Regime::logCritical: fundamentalConst_ = -1.0 / kPi; break;
        case Regime::superharmonicLine:
            fundamentalConst_ = 1.0 / (2.0 * std::cos(kPi * p.s()) * gammaFn(2.0 * p.s()));
            break;
    }
}

double GreenFunction::unitValue(double r, double ax, double ay) const {
    const double s = p_.s();
    const double r2 = r * r;
    const double aa = ax * ay;
    switch (p_.regime()) {
        case Regime::subcritical: {
            const double w = aa / (r2 + aa);
            const double wc = r2 / (r2 + aa);
            return kappa_ * std::pow(r, 2.0 * s - p_.dim()) * incompleteBeta(s, alpha_, w, wc);
        }
        case Regime::logCritical: return std::asinh(std::sqrt(aa) / r) / kPi;
        case Regime::superharmonicLine: {
            // B_w(s, b) = [(s+b) B_w(s, b+1) - w^s (1-w)^b] / b with b = 1/2 - s < 0
            const double w = aa / (r2 + aa);
            const double wc = r2 / (r2 + aa);
            const double head = std::pow(w, s) * std::pow(r2 + aa, s - 0.5);
            const double tail = r > 0.0 ? 0.5 * std::pow(r, 2.0 * s - 1.0) * incompleteBeta(s, 1.5 - s, w, wc) : 0.0;
            return kappa_ * (head - tail) / (s - 0.5);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double GreenFunction::unitRegular(double r, double ax, double ay) const {
    const double s = p_.s();
    const double aa = ax * ay;
    if (r == 0.0) {
        if (p_.regime() == Regime::logCritical) return -std::log(2.0 * ax) / kPi;
        return kappa_ / alpha_ * std::pow(ax, 2.0 * s - p_.dim());
    }
    const double r2 = r * r;
    switch (p_.regime()) {
        case Regime::subcritical: {
            // ∫_{r0}^∞ t^{s-1}(1+t)^{-N/2} dt = B_{1-w}(N/2 - s, s)
            const double w = aa / (r2 + aa);
            const double wc = r2 / (r2 + aa);
            return kappa_ * std::pow(r, 2.0 * s - p_.dim()) * incompleteBeta(alpha_, s, wc, w);
        }
        case Regime::logCritical: return -std::log(std::sqrt(aa) + std::sqrt(r2 + aa)) / kPi;
        case Regime::superharmonicLine:
            return fundamentalConst_ * std::pow(r, 2.0 * s - 1.0) - unitValue(r, ax, ay);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double GreenFunction::value1d(double x, double y) const {
    const double c = d_.center()[0];
    const double R = d_.radius();
    const double xs = (x - c) / R;
    const double ys = (y - c) / R;
    const double ax = (1.0 - xs) * (1.0 + xs);
    const double ay = (1.0 - ys) * (1.0 + ys);
    if (ax <= 0.0 || ay <= 0.0) return 0.0;
    const double r = std::abs(xs - ys);
    if (r == 0.0) return p_.regime() == Regime::superharmonicLine ? scaleValue_ * unitValue(0.0, ax, ay) : kInf;
    return scaleValue_ * unitValue(r, ax, ay);
}

double GreenFunction::value1dOffset(double x, double t) const {
    const double R = d_.radius();
    const double xs = (x - d_.center()[0]) / R;
    const double ts = t / R;
    const double ys = xs + ts;
    const double ax = (1.0 - xs) * (1.0 + xs);
    const double ay = (1.0 - ys) * (1.0 + ys);
    if (ax <= 0.0 || ay <= 0.0) return 0.0;
    const double r = std::abs(ts);
    if (r == 0.0) return p_.regime() == Regime::superharmonicLine ? scaleValue_ * unitValue(0.0, ax, ay) : kInf;
    return scaleValue_ * unitValue(r, ax, ay);
}

double GreenFunction::grad1dOffset(double x, double t) const {
    const double R = d_.radius();
    const double xs = (x - d_.center()[0]) / R;
    const double ts = t / R;
    const double ys = xs + ts;
    const double ax = (1.0 - xs) * (1.0 + xs);
    const double ay = (1.0 - ys) * (1.0 + ys);
    if (ax <= 0.0 || ay <= 0.0 || ts == 0.0) return 0.0;
    const double s = p_.s();
    const double r2 = ts * ts;
    const double aa = ax * ay;
    const double g = unitValue(std::abs(ts), ax, ay);
    const double bracket = 2.0 * kappa_ * std::pow(aa, s) / std::sqrt(r2 + aa);
    return scaleGrad_ * ((2.0 * s - 1.0) * g / ts - bracket * (ys / ay + 1.0 / ts));
}

double GreenFunction::value(const Point& x, const Point& y) const {
    if (p_.dim() == 1) return value1d(x[0], y[0]);
    const double R = d_.radius();
    const Point xs = (1.0 / R) * (x - d_.center());
    const Point ys = (1.0 / R) * (y - d_.center());
    const double ax = 1.0 - xs.norm2();
    const double ay = 1.0 - ys.norm2();
    if (ax <= 0.0 || ay <= 0.0) return 0.0;
    const double r = distance(xs, ys);
    if (r == 0.0) return p_.regime() == Regime::superharmonicLine ? scaleValue_ * unitValue(0.0, ax, ay) : kInf;
    return scaleValue_ * unitValue(r, ax, ay);
}

GreenEval GreenFunction::evaluate(const Point& x, const Point& y) const {
    const int n = p_.dim();
    GreenEval out;
    out.gradY = Point(n);
    const double R = d_.radius();
    const Point xs = (1.0 / R) * (x - d_.center());
    const Point ys = (1.0 / R) * (y - d_.center());
    const double ax = n == 1 ? (1.0 - xs[0]) * (1.0 + xs[0]) : 1.0 - xs.norm2();
    const double ay = n == 1 ? (1.0 - ys[0]) * (1.0 + ys[0]) : 1.0 - ys.norm2();
    if (ax <= 0.0 || ay <= 0.0) return out;
    const Point diff = ys - xs;
    const double r2 = diff.norm2();
    if (r2 == 0.0) {
        out.singular = true;
        out.value = p_.regime() == Regime::superharmonicLine ? scaleValue_ * unitValue(0.0, ax, ay) : kInf;
        return out;
    }
    const double r = std::sqrt(r2);
    const double s = p_.s();
    const double g = unitValue(r, ax, ay);
    const double aa = ax * ay;
    // ∇_y G = (2s-N) G (y-x)/r^2 - 2κ (AxAy)^s (r^2 + AxAy)^{-N/2} (y/Ay + (y-x)/r^2)
    const double bracket = 2.0 * kappa_ * std::pow(aa, s) * std::pow(r2 + aa, -0.5 * n);
    for (int i = 0; i < n; ++i) {
        const double radial = (2.0 * s - n) * g * diff[i] / r2;
        out.gradY[i] = scaleGrad_ * (radial - bracket * (ys[i] / ay + diff[i] / r2));
    }
    out.value = scaleValue_ * g;
    return out;
}

double GreenFunction::gradX(const Point& x, const Point& y, int axis) const {
    if (axis < 0 || axis >= p_.dim()) throw ParameterError("gradX: axis out of range");
    // symmetry: ∂_{x_i} G(y, x) is the y-gradient of G(y, ·) at x
    return evaluate(y, x).gradY[axis];
}

double GreenFunction::regularPart(const Point& x, const Point& y) const {
    if (!d_.contains(x)) throw GeometryError("regularPart: x must be interior");
    if (!d_.contains(y)) return fundamentalAt(p_, x, y);
    const double R = d_.radius();
    const Point xs = (1.0 / R) * (x - d_.center());
    const Point ys = (1.0 / R) * (y - d_.center());
    const int n = p_.dim();
    const double ax = n == 1 ? (1.0 - xs[0]) * (1.0 + xs[0]) : 1.0 - xs.norm2();
    const double ay = n == 1 ? (1.0 - ys[0]) * (1.0 + ys[0]) : 1.0 - ys.norm2();
    const double h = unitRegular(distance(xs, ys), ax, ay);
    if (p_.regime() == Regime::logCritical) return h - std::log(R) / kPi;
    return scaleValue_ * h;
}

double GreenFunction::robin(const Point& x) const { return regularPart(x, x); }

double GreenFunction::trace(const Point& x, const Point& sigma) const {
    if (!d_.contains(x)) throw GeometryError("trace: x must be interior");
    if (std::abs(d_.signedDistance(sigma)) > 1e-12 * std::max(1.0, d_.radius()))
        throw GeometryError("trace: " + sigma.str() + " is not a boundary point");
    const double s = p_.s();
    const int n = p_.dim();
    const double R = d_.radius();
    const Point xs = (1.0 / R) * (x - d_.center());
    const Point ss = (1.0 / R) * (sigma - d_.center());
    const double ax = n == 1 ? (1.0 - xs[0]) * (1.0 + xs[0]) : 1.0 - xs.norm2();
    const double unit = kappa_ * std::pow(2.0, s) / s * std::pow(ax, s) * std::pow(distance(xs, ss), -n);
    return std::pow(R, s - n) * unit;
}

GreenEval greenValue(const FracParams& p, const Domain& d, const Point& x, const Point& y) {
    return GreenFunction(p, d).evaluate(x, y);
}

double regularPart(const FracParams& p, const Domain& d, const Point& x, const Point& y) {
    return GreenFunction(p, d).regularPart(x, y);
}

double robin(const FracParams& p, const Domain& d, const Point& x) { return GreenFunction(p, d).robin(x); }

double gradGreenX(const FracParams& p, const Domain& d, const Point& x, const Point& y, int axis) {
    if (x == y) throw ParameterError("gradGreenX: x and y must differ");
    return GreenFunction(p, d).gradX(x, y, axis);
}

TraceField greenTrace(const FracParams& p, const Domain& d, const Point& x, const BoundaryRule& rule) {
    const GreenFunction g(p, d);
    TraceField out;
    out.nodes = rule.nodes;
    out.values.reserve(rule.size());
    for (const auto& sigma : rule.nodes) out.values.push_back(g.trace(x, sigma));
    return out;
}

double fundamentalAt(const FracParams& p, const Point& x, const Point& y) { return fundamental(p, distance(x, y)); }

// ---------------------------------------------------------------------------

Extrapolation extrapolateToBoundary(const std::function<double(double)>& ratio, double s,
                                    const TraceSchedule& schedule) {
    Extrapolation out;
    const int levels = schedule.levels;
    if (levels < 2) throw ParameterError("extrapolateToBoundary: need at least two levels");
    std::vector<double> exponents;
    const double lead = std::min(1.0, 2.0 - 2.0 * s);
    if (lead < 1.0) exponents.push_back(lead);
    for (int k = 1; static_cast<int>(exponents.size()) < levels - 1; ++k) exponents.push_back(k);

    double delta = schedule.firstStep;
    for (int k = 0; k < levels; ++k, delta *= 0.5) out.samples.push_back(ratio(delta));

    // table[k][j]: j eliminations using samples k-j..k
    std::vector<std::vector<double>> table(levels);
    for (int k = 0; k < levels; ++k) {
        table[k].push_back(out.samples[k]);
        for (int j = 1; j <= k; ++j) {
            const double q = std::pow(0.5, exponents[j - 1]);
            table[k].push_back((table[k][j - 1] - q * table[k - 1][j - 1]) / (1.0 - q));
        }
    }
    // most settled diagonal pair
    double bestErr = std::numeric_limits<double>::infinity();
    for (int k = 1; k < levels; ++k) {
        for (int j = 1; j <= k; ++j) {
            const double err = std::abs(table[k][j] - table[k][j - 1]);
            if (err < bestErr) {
                bestErr = err;
                out.value = table[k][j];
            }
        }
    }
    out.error = bestErr;
    const double tol = std::max(schedule.absTol, schedule.relTol * std::abs(out.value));
    out.converged = std::isfinite(out.value) && out.error <= tol;
    return out;
}

double boundaryLimit(const std::function<double(double)>& ratio, double s, const TraceSchedule& schedule) {
    const auto ex = extrapolateToBoundary(ratio, s, schedule);
    if (!ex.converged) {
        std::ostringstream msg;
        msg << "boundary trace extrapolation did not converge (error estimate " << ex.error << "); samples:";
        for (double v : ex.samples) msg << ' ' << v;
        throw NumericalError(msg.str());
    }
    return ex.value;
}

TraceField extrapolatedGreenTrace(const FracParams& p, const Domain& d, const Point& x, const BoundaryRule& rule,
                                  const TraceSchedule& schedule) {
    const GreenFunction g(p, d);
    TraceField out;
    out.nodes = rule.nodes;
    for (std::size_t k = 0; k < rule.size(); ++k) {
        const Point sigma = rule.nodes[k];
        const Point nu = rule.normals[k];
        auto ratio = [&](double delta) {
            const Point y = sigma - delta * nu;
            return g.value(x, y) / std::pow(d.signedDistance(y), p.s());
        };
        out.values.push_back(boundaryLimit(ratio, p.s(), schedule));
    }
    return out;
}

}  // namespace fraclap
