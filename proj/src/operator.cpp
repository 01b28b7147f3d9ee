#include "fraclap/operator.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "fraclap/errors.hpp"
#include "fraclap/quadrature.hpp"

namespace fraclap {

namespace {

constexpr double kPi = std::numbers::pi;

struct RadialResult {
    double value = 0.0;
    double error = 0.0;
};

// ∫_0^∞ Q(ρ) ρ^{-1-2s} dρ where Q(ρ) = O(ρ²) at 0 and Q ≡ qInf beyond d2.
// d1 <= d2 are the exit distances along ±ω.
template <class Q>
RadialResult radialIntegral(Q&& q, double qInf, double d1, double d2, double s, const OperatorOptions& opt) {
    RadialResult out;
    // Q is even in ρ: Q ≈ Aρ² + Bρ⁴ below ρ_c, fitted at ρ_c and ρ_c/2
    const double rc = opt.taylorCutoff * d1;
    const double q1 = q(rc), q2 = q(0.5 * rc);
    const double b4 = (q1 - 4.0 * q2) / (0.75 * rc * rc * rc * rc);
    const double a2 = (q1 - b4 * rc * rc * rc * rc) / (rc * rc);
    out.value += a2 * std::pow(rc, 2.0 - 2.0 * s) / (2.0 - 2.0 * s) + b4 * std::pow(rc, 4.0 - 2.0 * s) / (4.0 - 2.0 * s);

    auto integrand = [&](double rho) { return q(rho) * std::pow(rho, -1.0 - 2.0 * s); };
    const quad::Options qo{opt.absTol, opt.relTol};
    double lo = rc;
    while (lo < d1) {
        const double hi = std::min(d1, 10.0 * lo);
        const auto r = quad::tanhSinh(integrand, lo, hi, qo);
        out.value += r.value;
        out.error += r.error;
        lo = hi;
    }
    if (d2 > d1) {
        const auto r = quad::tanhSinh(integrand, d1, d2, qo);
        out.value += r.value;
        out.error += r.error;
    }
    out.value += qInf * std::pow(d2, -2.0 * s) / (2.0 * s);
    return out;
}

// u extended by zero, evaluated at x + ρω when ρ is below the exit distance.
double along(const Domain& d, const ScalarField& u, const Point& x, const Point& dir, double rho, double exit) {
    if (!(rho < exit)) return 0.0;
    const Point z = x + rho * dir;
    return d.contains(z) ? u(z) : 0.0;
}

void requireInterior(const Domain& d, const Point& x, const char* who) {
    if (x.dim() != d.dim()) throw ParameterError(std::string(who) + ": point dimension does not match the domain");
    if (!d.contains(x)) throw GeometryError(std::string(who) + ": point " + x.str() + " is not inside the domain");
}

// Self-interaction of one cubic cell: (1/N) ∬_{cell²} |y-z|^{2-N-2s}, divided by h^{N+2-2s}.
double cellSelfMoment(int dim, double s) {
    const double e = 2.0 - 2.0 * s;
    auto tPow = [&](int k) { return 1.0 / (e + k); };  // ∫_0^1 t^{1-2s} t^k dt
    if (dim == 1) return 2.0 * (tPow(0) - tPow(1));
    const auto& gl = quad::gaussLegendre(24);
    if (dim == 2) {
        // d = t(1, v) on the half of [0,1]^2 where the first component is largest
        double acc = 0.0;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double v = 0.5 * (gl.nodes[i] + 1.0);
            const double inner = tPow(0) - (1.0 + v) * tPow(1) + v * tPow(2);
            acc += 0.5 * gl.weights[i] * std::pow(1.0 + v * v, -s) * inner;
        }
        return 0.5 * 4.0 * 2.0 * acc;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
        for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
            const double v = 0.5 * (gl.nodes[i] + 1.0);
            const double w = 0.5 * (gl.nodes[j] + 1.0);
            const double e1 = 1.0 + v + w, e2 = v + w + v * w, e3 = v * w;
            const double inner = tPow(0) - e1 * tPow(1) + e2 * tPow(2) - e3 * tPow(3);
            acc += 0.25 * gl.weights[i] * gl.weights[j] * std::pow(1.0 + v * v + w * w, -0.5 - s) * inner;
        }
    return (1.0 / 3.0) * 8.0 * 3.0 * acc;
}

bool sameGrid(const GridFunction& a, const GridFunction& b) {
    const auto& da = a.domain;
    const auto& db = b.domain;
    return da.kind() == db.kind() && da.center() == db.center() && da.radius() == db.radius() && a.h == b.h &&
           a.points.size() == b.points.size() && a.values.size() == a.points.size() &&
           b.values.size() == b.points.size();
}

// Grid gradients from lattice neighbours (central where both exist).
std::vector<Point> gridGradient(const GridFunction& g) {
    using Key = std::array<long long, 3>;
    const int dim = g.domain.dim();
    auto keyOf = [&](const Point& p) {
        Key k{0, 0, 0};
        for (int i = 0; i < dim; ++i) k[i] = std::llround(2.0 * (p[i] - g.domain.center()[i]) / g.h);
        return k;
    };
    std::map<Key, std::size_t> index;
    for (std::size_t i = 0; i < g.size(); ++i) index[keyOf(g.points[i])] = i;
    std::vector<Point> grad(g.size(), Point(dim));
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Key k = keyOf(g.points[i]);
        for (int a = 0; a < dim; ++a) {
            Key kp = k, km = k;
            kp[a] += 2;
            km[a] -= 2;
            const auto ip = index.find(kp);
            const auto im = index.find(km);
            const bool hasP = ip != index.end(), hasM = im != index.end();
            if (hasP && hasM)
                grad[i][a] = (g.values[ip->second] - g.values[im->second]) / (2.0 * g.h);
            else if (hasP)
                grad[i][a] = (g.values[ip->second] - g.values[i]) / g.h;
            else if (hasM)
                grad[i][a] = (g.values[i] - g.values[im->second]) / g.h;
        }
    }
    return grad;
}

}  // namespace

GridFunction GridFunction::sample(const Domain& d, double h, const ScalarField& u) {
    GridFunction g;
    g.domain = d;
    g.h = h;
    g.points = interiorGrid(d, h);
    g.values.reserve(g.points.size());
    for (const auto& p : g.points) g.values.push_back(u(p));
    return g;
}

CutoffProfile::CutoffProfile(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo >= 1.0 && hi <= 2.0 && lo < hi)) throw ParameterError("CutoffProfile: need 1 <= lo < hi <= 2");
}

double CutoffProfile::operator()(double t) const {
    const double a = std::abs(t);
    if (a <= lo_) return 1.0;
    if (a >= hi_) return 0.0;
    const double x = (a - lo_) / (hi_ - lo_);
    const double left = std::exp(-1.0 / x);
    const double right = std::exp(-1.0 / (1.0 - x));
    return right / (left + right);
}

std::string CutoffProfile::describe() const {
    std::ostringstream os;
    os << "smoothstep(" << lo_ << ", " << hi_ << ")";
    return os.str();
}

DirectionRule halfSphereDirections(int dim, int order) {
    if (order < 1) throw ParameterError("halfSphereDirections: order must be positive");
    DirectionRule r;
    if (dim == 1) {
        r.dirs.push_back(Point{1.0});
        r.weights.push_back(1.0);
    } else if (dim == 2) {
        for (int k = 0; k < order; ++k) {
            const double t = kPi * k / order;
            r.dirs.push_back(Point{std::cos(t), std::sin(t)});
            r.weights.push_back(kPi / order);
        }
    } else if (dim == 3) {
        const auto& gl = quad::gaussLegendre(order);
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double ct = gl.nodes[i];
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            for (int k = 0; k < order; ++k) {
                const double phi = kPi * k / order;
                r.dirs.push_back(Point{st * std::cos(phi), st * std::sin(phi), ct});
                r.weights.push_back(gl.weights[i] * kPi / order);
            }
        }
    } else {
        throw CapabilityError("halfSphereDirections: dimension must be 1, 2 or 3");
    }
    return r;
}

OperatorValue fracLap(const FracParams& p, const Domain& d, const ScalarField& u, const Point& x,
                      const OperatorOptions& opt) {
    requireInterior(d, x, "applyFracLap");
    const double s = p.s();
    const double ux = u(x);
    const auto rule = halfSphereDirections(d.dim(), opt.directions);
    quad::CompensatedSum value, error;
    for (std::size_t k = 0; k < rule.dirs.size(); ++k) {
        const Point& w = rule.dirs[k];
        const double a = d.exitDistance(x, w);
        const double b = d.exitDistance(x, -w);
        auto q = [&](double rho) {
            return 2.0 * ux - along(d, u, x, w, rho, a) - along(d, u, x, -w, rho, b);
        };
        const auto r = radialIntegral(q, 2.0 * ux, std::min(a, b), std::max(a, b), s, opt);
        value += rule.weights[k] * r.value;
        error += rule.weights[k] * r.error;
    }
    const double c = cConst(p);
    OperatorValue out;
    out.value = c * value.value();
    out.error = c * error.value();
    out.nearBoundary = d.signedDistance(x) < opt.warnDistance;
    return out;
}

double applyFracLap(const FracParams& p, const Domain& d, const ScalarField& u, const Point& x,
                    const OperatorOptions& opt) {
    return fracLap(p, d, u, x, opt).value;
}

double interactionForm(const FracParams& p, const Domain& d, const ScalarField& u, const ScalarField& v,
                       const Point& x, const OperatorOptions& opt) {
    requireInterior(d, x, "interactionForm");
    const double s = p.s();
    const double ux = u(x), vx = v(x);
    const auto rule = halfSphereDirections(d.dim(), opt.directions);
    quad::CompensatedSum acc;
    for (std::size_t k = 0; k < rule.dirs.size(); ++k) {
        const Point& w = rule.dirs[k];
        const double a = d.exitDistance(x, w);
        const double b = d.exitDistance(x, -w);
        auto q = [&](double rho) {
            const double up = along(d, u, x, w, rho, a), vp = along(d, v, x, w, rho, a);
            const double um = along(d, u, x, -w, rho, b), vm = along(d, v, x, -w, rho, b);
            return (ux - up) * (vx - vp) + (ux - um) * (vx - vm);
        };
        acc += rule.weights[k] * radialIntegral(q, 2.0 * ux * vx, std::min(a, b), std::max(a, b), s, opt).value;
    }
    return cConst(p) * acc.value();
}

double exteriorKernelMass(const FracParams& p, const Domain& d, const Point& y, int directions) {
    requireInterior(d, y, "exteriorKernelMass");
    const double s = p.s();
    const auto rule = halfSphereDirections(d.dim(), directions);
    quad::CompensatedSum acc;
    for (std::size_t k = 0; k < rule.dirs.size(); ++k) {
        const double a = d.exitDistance(y, rule.dirs[k]);
        const double b = d.exitDistance(y, -rule.dirs[k]);
        acc += rule.weights[k] * (std::pow(a, -2.0 * s) + std::pow(b, -2.0 * s)) / (2.0 * s);
    }
    return acc.value();
}

double energyForm(const FracParams& p, const GridFunction& u, const GridFunction& v) {
    if (!sameGrid(u, v)) throw ParameterError("energyForm: grid functions live on different grids");
    if (u.domain.dim() != p.dim()) throw ParameterError("energyForm: dimension mismatch");
    const int dim = p.dim();
    const double s = p.s();
    const double c = cConst(p);
    const double cell = std::pow(u.h, dim);
    const std::size_t n = u.size();

    quad::CompensatedSum pairs;
    if (dim == 1) {
        // cells k apart: the kernel is replaced by its exact cell-pair moment
        // ∬ |y-z|^{1-2s} / (kh)², so locally linear data is integrated exactly
        const double alpha = 1.0 - 2.0 * s;
        const double norm = (alpha + 1.0) * (alpha + 2.0);
        std::vector<double> weight(n, 0.0);
        for (std::size_t k = 1; k < n; ++k) {
            const double kk = static_cast<double>(k);
            const double second =
                std::pow(kk + 1.0, alpha + 2.0) - 2.0 * std::pow(kk, alpha + 2.0) + std::pow(kk - 1.0, alpha + 2.0);
            weight[k] = second / (norm * kk * kk) * std::pow(u.h, alpha - 2.0);
        }
        for (std::size_t i = 0; i < n; ++i) {
            quad::CompensatedSum row;
            for (std::size_t j = i + 1; j < n; ++j)
                row += (u.values[i] - u.values[j]) * (v.values[i] - v.values[j]) * weight[j - i];
            pairs += row.value();
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            quad::CompensatedSum row;
            for (std::size_t j = i + 1; j < n; ++j) {
                const double r2 = (u.points[i] - u.points[j]).norm2();
                const double du = u.values[i] - u.values[j];
                const double dv = v.values[i] - v.values[j];
                row += du * dv * std::pow(r2, -0.5 * dim - s);
            }
            pairs += row.value();
        }
    }

    quad::CompensatedSum exterior;
    for (std::size_t i = 0; i < n; ++i)
        exterior += u.values[i] * v.values[i] * exteriorKernelMass(p, u.domain, u.points[i]);

    const auto gu = gridGradient(u);
    const auto gv = gridGradient(v);
    quad::CompensatedSum diag;
    for (std::size_t i = 0; i < n; ++i) diag += gu[i].dot(gv[i]);
    const double moment = cellSelfMoment(dim, s) * std::pow(u.h, dim + 2.0 - 2.0 * s);

    return c * (pairs.value() * cell * cell + exterior.value() * cell + 0.5 * diag.value() * moment);
}

// ---------------------------------------------------------------------------
// a_{N,s}[ρ]

namespace {

class ConstantIntegrator {
public:
    ConstantIntegrator(const FracParams& p, const CutoffProfile& rho, std::size_t budget, double tol)
        : p_(p), rho_(rho), budget_(budget), tol_(tol), s_(p.s()) {}

    ConstantEstimate run() {
        ConstantEstimate out;
        const auto r = p_.dim() == 1 ? lineIntegral() : planeIntegral();
        out.value = cConst(p_) * r.value;
        out.error = cConst(p_) * r.error;
        out.evaluations = evaluations_;
        out.converged = r.converged && !exhausted_;
        return out;
    }

private:
    double F(double r) const { return r > 0.0 ? fundamental(p_, r) : 0.0; }
    double rhoSq(double t) const { return rho_(t * t); }

    bool spend(std::size_t n) {
        evaluations_ += n;
        if (evaluations_ > budget_) exhausted_ = true;
        return !exhausted_;
    }

    // Integral over a sorted list of breakpoints clipped to [lo, hi].
    template <class G>
    quad::Result piecewise(G&& g, std::vector<double> pts, double lo, double hi, double relTol) {
        pts.push_back(lo);
        pts.push_back(hi);
        std::sort(pts.begin(), pts.end());
        quad::Result total;
        double prev = lo;
        for (double x : pts) {
            if (x <= prev || x > hi) continue;
            total += quad::tanhSinh(g, prev, x, {0.0, relTol});
            prev = x;
        }
        return total;
    }

    // ∫_0^{x0} m(x) x^{1-2s} dx for a smooth m, from m(x0) and m(x0/2) with m linear.
    template <class M>
    double stripIntegral(M&& m, double x0) {
        const double m1 = m(x0), m2 = m(0.5 * x0);
        const double slope = (m1 - m2) / (0.5 * x0);
        const double m0 = m1 - slope * x0;
        return m0 * std::pow(x0, 2.0 - 2.0 * s_) / (2.0 - 2.0 * s_) + slope * std::pow(x0, 3.0 - 2.0 * s_) / (3.0 - 2.0 * s_);
    }

    static constexpr double kDiagonalStrip = 1e-3;

    // N = 1: a/c = 4 ∫_0^∞ dh h^{-1-2s} ∫_{max(-h/2,-√hi)}^{√hi} (ρ(y²)-ρ((y+h)²))(F(|y+h|)-F(|y|)) dy,
    // using the symmetries (y,z) -> (z,y) and (y,z) -> (-z,-y) with z = y + h.
    quad::Result lineIntegral() {
        const double a1 = std::sqrt(rho_.lo()), a2 = std::sqrt(rho_.hi());
        auto inner = [&](double h) {
            if (exhausted_) return 0.0;
            auto g = [&](double y) {
                const double z = y + h;
                const double dr = rhoSq(y) - rhoSq(z);
                if (dr == 0.0) return 0.0;
                return dr * (F(std::abs(z)) - F(std::abs(y)));
            };
            const std::vector<double> pts{0.0, -a1, a1, -a2, a2, -h, -h - a1, -h + a1, -h - a2, -h + a2};
            const auto r = piecewise(g, pts, std::max(-0.5 * h, -a2), a2, 0.01 * tol_);
            spend(r.evaluations);
            if (r.value == 0.0) return 0.0;
            // r.value is O(h²); form the product in logs so h^{-1-2s} cannot overflow
            return std::copysign(std::exp(std::log(std::abs(r.value)) - (1.0 + 2.0 * s_) * std::log(h)), r.value);
        };
        const double hMax = 2.0 * a2;
        std::vector<double> hBreaks;
        const double marks[] = {0.0, a1, -a1, a2, -a2};
        for (double m1 : marks)
            for (double m2 : marks)
                if (m1 - m2 > 0.0 && m1 - m2 < hMax) hBreaks.push_back(m1 - m2);
        // inner(h) = C2 h² + C3 h³ + ... ; below h0 the differences lose digits,
        // so that strip uses the two-term model fitted at h0 and h0/2
        const double h0 = kDiagonalStrip;
        auto body = piecewise(inner, hBreaks, h0, hMax, tol_);
        body.value += stripIntegral([&](double h) { return inner(h) * std::pow(h, 1.0 + 2.0 * s_) / (h * h); }, h0);
        // h = hMax / t on (0, 1]
        auto tail = [&](double t) {
            if (t < 1e-150) return 0.0;  // h beyond 1e150; the neglected piece is O(t^{2s})
            return inner(hMax / t) * hMax / (t * t);
        };
        body += quad::tanhSinh(tail, 0.0, 1.0, {1e-15, tol_});
        body.value *= 4.0;
        body.error *= 4.0;
        return body;
    }

    // d^{2+2s} ∫_0^{2π} (r1² + r2² - 2 r1 r2 cos φ)^{-1-s} dφ with r2 = r1 + d
    // (scaled so that tiny d cannot overflow).
    double angularScaled(double r1, double d) {
        const double r2 = r1 + d;
        const double q = 4.0 * r1 * r2 / (d * d);
        auto g = [&](double psi) {
            const double sn = std::sin(psi);
            return std::pow(1.0 + q * sn * sn, -1.0 - s_);
        };
        std::vector<double> pts;
        for (double m = 1.0 / std::sqrt(q); m < 1.0; m *= 10.0) pts.push_back(std::asin(m));
        const auto r = piecewise(g, pts, 0.0, 0.5 * kPi, 1e-10);
        spend(r.evaluations);
        return 4.0 * r.value;
    }

    // N = 2: a/c = 2π ∬ r1 r2 (ρ(r1²)-ρ(r2²))(F(r2)-F(r1)) Φ(r1,r2) dr1 dr2, folded to r2 = r1 + d > r1.
    quad::Result planeIntegral() {
        const double a1 = std::sqrt(rho_.lo()), a2 = std::sqrt(rho_.hi());
        auto outer = [&](double r1) {
            if (exhausted_ || r1 < 1e-100) return 0.0;
            auto g = [&](double d) {
                if (d < 1e-300) return 0.0;
                const double r2 = r1 + d;
                const double dr = rhoSq(r1) - rhoSq(r2);
                if (dr == 0.0) return 0.0;
                return r1 * r2 * (dr / d) * ((F(r2) - F(r1)) / d) * std::pow(d, -2.0 * s_) * angularScaled(r1, d);
            };
            const double dMax = std::max(2.0 * a2, 2.0 * r1);
            const double d0 = kDiagonalStrip * std::min(1.0, r1);
            auto body = piecewise(g, {a1 - r1, a2 - r1}, d0, dMax, 0.1 * tol_);
            body.value += stripIntegral([&](double d) { return g(d) * std::pow(d, 2.0 * s_ - 1.0); }, d0);
            auto tail = [&](double t) { return t < 1e-150 ? 0.0 : g(dMax / t) * dMax / (t * t); };
            body += quad::tanhSinh(tail, 0.0, 1.0, {1e-15, 0.1 * tol_});
            return body.value;
        };
        auto r = piecewise(outer, {a1}, 0.0, a2, tol_);
        r.value *= 2.0 * 2.0 * kPi;
        r.error *= 2.0 * 2.0 * kPi;
        return r;
    }

    FracParams p_;
    CutoffProfile rho_;
    std::size_t budget_;
    double tol_;
    double s_;
    std::size_t evaluations_ = 0;
    bool exhausted_ = false;
};

}  // namespace

ConstantEstimate aConstant(const FracParams& p, const CutoffProfile& rho, std::size_t budget, double tol) {
    if (p.dim() != 1 && p.dim() != 2)
        throw CapabilityError("aConstant: only N = 1 and N = 2 are supported");
    return ConstantIntegrator(p, rho, budget, tol).run();
}

}  // namespace fraclap
