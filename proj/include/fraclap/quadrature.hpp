#pragma once

// One-dimensional quadrature used throughout the library: Gauss–Legendre
// rules, adaptive Gauss–Kronrod (7/15) and double-exponential (tanh-sinh)
// integration. Integrands are taken as templates; they sit on the hot path.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <queue>
#include <tuple>
#include <span>
#include <vector>

namespace fraclap::quad {

/// Neumaier-compensated accumulator; fixed summation order gives
/// reproducible results.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;

    Result& operator+=(const Result& o) {
        value += o.value;
        error += o.error;
        evaluations += o.evaluations;
        converged = converged && o.converged;
        return *this;
    }
};

struct Options {
    double absTol = 1e-12;
    double relTol = 1e-12;
    std::size_t maxEvaluations = 500000;
};

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss–Legendre rule on [-1, 1] (Newton iteration on P_n).
Rule makeGaussLegendre(int n);

/// Cached rule for the common sizes; thread-safe.
const Rule& gaussLegendre(int n);

template <class F>
double fixedGaussLegendre(F&& f, double a, double b, const Rule& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    CompensatedSum acc;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) acc += rule.weights[k] * f(mid + half * rule.nodes[k]);
    return half * acc.value();
}

namespace detail {

// Kronrod 15-point abscissae and weights, Gauss 7-point weights (QUADPACK qk15).
inline constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                   0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                   0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                   0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                   0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                   0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                   0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                  0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment kronrod15(F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(mid);
    double resK = fc * kWgk[7];
    double resG = fc * kWg[3];
    for (int j = 0; j < 3; ++j) {
        const int k = 2 * j + 1;
        const double dx = half * kXgk[k];
        const double f1 = f(mid - dx);
        const double f2 = f(mid + dx);
        resG += kWg[j] * (f1 + f2);
        resK += kWgk[k] * (f1 + f2);
    }
    for (int j = 0; j < 4; ++j) {
        const int k = 2 * j;
        const double dx = half * kXgk[k];
        resK += kWgk[k] * (f(mid - dx) + f(mid + dx));
    }
    const double value = resK * half;
    const double err = std::abs((resK - resG) * half);
    return {a, b, value, err};
}

}  // namespace detail

/// Globally adaptive Gauss–Kronrod integration over [a, b], bisecting the
/// segment with the largest error estimate. `breaks` (optional, increasing,
/// strictly inside (a,b)) seed the initial partition.
template <class F>
Result gaussKronrod(F&& f, double a, double b, const Options& opt = {}, std::span<const double> breaks = {}) {
    Result out;
    if (a == b) return out;
    std::priority_queue<detail::Segment> heap;
    std::vector<double> edges{a};
    for (double x : breaks)
        if (x > a && x < b) edges.push_back(x);
    edges.push_back(b);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        heap.push(detail::kronrod15(f, edges[i], edges[i + 1]));
        out.evaluations += 15;
    }
    auto totals = [&heap]() {
        // priority_queue has no iteration; rebuild totals from a copy
        auto copy = heap;
        CompensatedSum v, e;
        while (!copy.empty()) {
            v += copy.top().value;
            e += copy.top().error;
            copy.pop();
        }
        return std::pair{v.value(), e.value()};
    };
    double value = 0.0, error = 0.0;
    std::tie(value, error) = totals();
    while (error > std::max(opt.absTol, opt.relTol * std::abs(value))) {
        if (out.evaluations + 30 > opt.maxEvaluations) {
            out.converged = false;
            break;
        }
        const detail::Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            out.converged = false;
            break;
        }
        heap.pop();
        const auto left = detail::kronrod15(f, worst.a, mid);
        const auto right = detail::kronrod15(f, mid, worst.b);
        out.evaluations += 30;
        heap.push(left);
        heap.push(right);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        if ((out.evaluations / 30) % 64 == 0) std::tie(value, error) = totals();
    }
    std::tie(value, error) = totals();
    out.value = value;
    out.error = error;
    return out;
}

/// Double-exponential (tanh-sinh) integration over [a, b]. Robust to
/// integrable algebraic or logarithmic singularities at the endpoints.
/// Nodes are generated from their distance to the nearest endpoint, so
/// the integrand is never sampled at a or b.
template <class F>
Result tanhSinh(F&& f, double a, double b, const Options& opt = {}, int maxLevel = 9) {
    constexpr double kHalfPi = 0.5 * std::numbers::pi;
    Result out;
    if (a == b) return out;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);

    // contribution of the pair of nodes at ±t (or the centre when t == 0)
    auto pairAt = [&](double t) {
        if (t == 0.0) {
            ++out.evaluations;
            return half * kHalfPi * f(mid);
        }
        const double u = kHalfPi * std::sinh(t);
        const double coshU = std::cosh(u);
        const double w = half * kHalfPi * std::cosh(t) / (coshU * coshU);
        const double gap = half * std::exp(-u) / coshU;  // distance to the endpoint
        double acc = 0.0;
        const double xr = b - gap;
        const double xl = a + gap;
        if (xr < b && xr > a) {
            acc += w * f(xr);
            ++out.evaluations;
        }
        if (xl > a && xl < b) {
            acc += w * f(xl);
            ++out.evaluations;
        }
        return acc;
    };
    auto tailEnds = [&](double t) {
        const double u = kHalfPi * std::sinh(t);
        const double gap = half * std::exp(-u) / std::cosh(u);
        // stop once neither endpoint can be approached any closer
        return (!(b - gap < b) && !(a + gap > a)) || gap < 1e-300;
    };

    double step = 1.0;
    CompensatedSum sum;
    sum += pairAt(0.0);
    for (double t = step; !tailEnds(t); t += step) sum += pairAt(t);
    double estimate = step * sum.value();
    out.converged = false;
    for (int level = 1; level <= maxLevel; ++level) {
        step *= 0.5;
        // only the odd multiples of the new step are new nodes
        for (double t = step; !tailEnds(t); t += 2.0 * step) sum += pairAt(t);
        const double next = step * sum.value();
        out.error = std::abs(next - estimate);
        estimate = next;
        if (level >= 3 && out.error <= std::max(opt.absTol, opt.relTol * std::abs(estimate))) {
            out.converged = true;
            break;
        }
        if (out.evaluations > opt.maxEvaluations) break;
    }
    out.value = estimate;
    return out;
}

/// tanh-sinh over consecutive pieces [p0,p1], [p1,p2], ...
template <class F>
Result tanhSinhPieces(F&& f, std::span<const double> points, const Options& opt = {}, int maxLevel = 9) {
    Result out;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (points[i + 1] <= points[i]) continue;
        out += tanhSinh(f, points[i], points[i + 1], opt, maxLevel);
    }
    return out;
}

}  // namespace fraclap::quad
