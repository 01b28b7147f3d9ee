#include "fraclap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "fraclap/errors.hpp"
#include "fraclap/parallel.hpp"
#include "fraclap/quadrature.hpp"

namespace fraclap {

namespace {

std::string formatNumber(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void requireLine(const Domain& d, const char* who) {
    if (d.dim() != 1)
        throw CapabilityError(std::string(who) + ": the Green-convolution solver supports one-dimensional domains only");
}

// sup_x ∫ G(x, z) dz: the torsion function at the centre, γ R^{2s}.
double greenMassBound(const FracParams& p, const Domain& d) {
    return torsionScale(p) * std::pow(d.radius(), 2.0 * p.s());
}

}  // namespace

SourceTerm SourceTerm::pure(std::function<double(double)> f, std::function<double(double)> df) {
    SourceTerm t;
    t.kind = SourceKind::pureSpace;
    t.f = [f](double x, double) { return f(x); };
    if (df) t.dh = [df](double x, double) { return df(x); };
    t.dq = [](double, double) { return 0.0; };
    return t;
}

SourceTerm SourceTerm::constant(double c) {
    return pure([c](double) { return c; }, [](double) { return 0.0; });
}

SourceTerm SourceTerm::semilinear(Fn f, Fn dh, Fn dq) {
    SourceTerm t;
    t.kind = SourceKind::semilinear;
    t.f = std::move(f);
    t.dh = std::move(dh);
    t.dq = std::move(dq);
    return t;
}

// ---------------------------------------------------------------------------

GreenConvolution1D::GreenConvolution1D(const FracParams& p, const Domain& d, double h, const ConvolutionOptions& opt)
    : p_(p), d_(d), h_(h), opt_(opt), green_((requireLine(d, "GreenConvolution1D"), p), d) {
    if (p.dim() != 1) throw ParameterError("GreenConvolution1D: parameters must have N = 1");
    for (const auto& pt : interiorGrid(d, h)) nodes_.push_back(pt[0]);
    left_ = d.center()[0] - d.radius();
}

double GreenConvolution1D::apply(const Density& g, double x, double reference) const {
    const double R = d_.radius();
    const double right = left_ + 2.0 * R;
    if (!(x > left_ && x < right)) return 0.0;
    const double nearDist = opt_.nearRadius * R;
    if (std::abs(x - reference) > 0.5 * nearDist) reference = x;

    const long n = static_cast<long>(nodes_.size());
    const long jx = std::clamp(static_cast<long>(std::floor((x - left_) / h_)), 0L, n - 1);
    const long sLo = std::max(0L, jx - 1);
    const long sHi = std::min(n - 1, jx + 1);
    const double zLo = left_ + static_cast<double>(sLo) * h_;
    const double zHi = sHi == n - 1 ? right : left_ + static_cast<double>(sHi + 1) * h_;

    const quad::Options qo{1e-16, opt_.relTol};
    quad::CompensatedSum acc;

    // singular block around x, in the offset t = |z - x|
    auto below = [&](double t) {
        const double gv = green_.value1dOffset(x, -t);
        return gv == 0.0 ? 0.0 : gv * g(x - t);
    };
    auto above = [&](double t) {
        const double gv = green_.value1dOffset(x, t);
        return gv == 0.0 ? 0.0 : gv * g(x + t);
    };
    // pieces end at the nodes, where the interpolated density may have kinks
    std::vector<double> cutsBelow{0.0}, cutsAbove{0.0};
    for (long j = sHi; j >= sLo; --j)
        if (nodes_[j] < x) cutsBelow.push_back(x - nodes_[j]);
    for (long j = sLo; j <= sHi; ++j)
        if (nodes_[j] > x) cutsAbove.push_back(nodes_[j] - x);
    cutsBelow.push_back(x - zLo);
    cutsAbove.push_back(zHi - x);
    acc += quad::tanhSinhPieces(below, cutsBelow, qo).value;
    acc += quad::tanhSinhPieces(above, cutsAbove, qo).value;

    auto plain = [&](double z) {
        const double gv = green_.value1d(x, z);
        return gv == 0.0 ? 0.0 : gv * g(z);
    };
    const auto& rule = quad::gaussLegendre(std::max(1, opt_.cellOrder / 2));
    for (long j = 0; j < n; ++j) {
        if (j >= sLo && j <= sHi) continue;
        const double a = left_ + static_cast<double>(j) * h_;
        const double b = j == n - 1 ? right : a + h_;
        const double c = nodes_[j];
        if (j == 0 || j == n - 1) {
            const double cuts[] = {a, c, b};  // δ^s endpoint behaviour
            acc += quad::tanhSinhPieces(plain, cuts, qo).value;
        } else if (std::abs(c - reference) < nearDist || c - left_ < nearDist || right - c < nearDist) {
            acc += quad::fixedGaussLegendre(plain, a, c, rule);
            acc += quad::fixedGaussLegendre(plain, c, b, rule);
        } else {
            acc += h_ * plain(c);
        }
    }
    return acc.value();
}

// ---------------------------------------------------------------------------

BoundaryInterpolant::BoundaryInterpolant(const Domain& d, double s, std::vector<double> nodes,
                                         const std::vector<double>& values)
    : d_(d), s_(s), nodes_(std::move(nodes)) {
    if (nodes_.size() != values.size() || nodes_.size() < 2)
        throw ParameterError("BoundaryInterpolant: need matching nodes and values (at least 2)");
    h_ = nodes_[1] - nodes_[0];
    scaled_.resize(values.size());
    for (std::size_t j = 0; j < values.size(); ++j)
        scaled_[j] = values[j] / std::pow(d_.boundaryWeight(Point{nodes_[j]}), s_);
}

namespace {

// Lagrange interpolation (value and derivative) on up to four uniform nodes.
std::pair<double, double> lagrange(const std::vector<double>& nodes, const std::vector<double>& vals, double h,
                                   double z) {
    const long n = static_cast<long>(nodes.size());
    const long m = std::min(4L, n);
    const long j0 = std::clamp(static_cast<long>(std::floor((z - nodes[0]) / h)) - (m / 2 - 1), 0L, n - m);
    double value = 0.0, slope = 0.0;
    for (long a = 0; a < m; ++a) {
        double basis = 1.0, dbasis = 0.0;
        for (long b = 0; b < m; ++b) {
            if (b == a) continue;
            const double denom = nodes[j0 + a] - nodes[j0 + b];
            dbasis = dbasis * (z - nodes[j0 + b]) / denom + basis / denom;
            basis *= (z - nodes[j0 + b]) / denom;
        }
        value += vals[j0 + a] * basis;
        slope += vals[j0 + a] * dbasis;
    }
    return {value, slope};
}

}  // namespace

double BoundaryInterpolant::operator()(double z) const {
    const double A = d_.boundaryWeight(Point{z});
    if (!(A > 0.0)) return 0.0;
    return std::pow(A, s_) * lagrange(nodes_, scaled_, h_, z).first;
}

double BoundaryInterpolant::derivative(double z) const {
    const double A = d_.boundaryWeight(Point{z});
    if (!(A > 0.0)) return 0.0;
    const auto [w, dw] = lagrange(nodes_, scaled_, h_, z);
    const double dA = -2.0 * (z - d_.center()[0]);
    return std::pow(A, s_) * dw + s_ * std::pow(A, s_ - 1.0) * dA * w;
}

// ---------------------------------------------------------------------------

double Solution::density(double z) const {
    const double q = interpolant ? (*interpolant)(z) : 0.0;
    return source(z, q);
}

double Solution::interpolated(double z) const { return interpolant ? (*interpolant)(z) : 0.0; }

double Solution::interpolatedDerivative(double z) const { return interpolant ? interpolant->derivative(z) : 0.0; }

double Solution::valueAt(double x, double reference) const {
    if (!convolution) throw ParameterError("Solution: no Green representation attached");
    return convolution->apply([this](double z) { return density(z); }, x, reference);
}

double Solution::derivativeAt(double x) const {
    const double delta = domain.signedDistance(Point{x});
    if (!(delta > 0.0)) throw GeometryError("derivativeAt: point outside the domain");
    const double eta = 0.02 * delta;
    const double f1 = valueAt(x + eta, x) - valueAt(x - eta, x);
    const double f2 = valueAt(x + 2.0 * eta, x) - valueAt(x - 2.0 * eta, x);
    return (8.0 * f1 - f2) / (12.0 * eta);
}

namespace {

Solution prepare(const FracParams& p, const Domain& d, const SourceTerm& f, double h, const SolverOptions& opt) {
    requireLine(d, "solve");
    if (p.dim() != 1) throw ParameterError("solve: parameters must have N = 1 on an interval");
    if (!f.f) throw ParameterError("solve: source term has no evaluator");
    Solution sol;
    sol.params = p;
    sol.domain = d;
    sol.source = f;
    sol.convolution = std::make_shared<GreenConvolution1D>(p, d, h, opt.convolution);
    sol.u.domain = d;
    sol.u.h = h;
    for (double x : sol.convolution->nodes()) sol.u.points.push_back(Point{x});
    sol.u.values.assign(sol.u.points.size(), 0.0);
    return sol;
}

std::vector<double> convolveOnGrid(const Solution& sol, int jobs) {
    const auto& nodes = sol.convolution->nodes();
    std::vector<double> out(nodes.size());
    parallelFor(
        nodes.size(), [&](std::size_t i) { out[i] = sol.valueAt(nodes[i]); }, jobs > 0 ? jobs : defaultJobs());
    return out;
}

void attachInterpolant(Solution& sol) {
    sol.interpolant =
        std::make_shared<BoundaryInterpolant>(sol.domain, sol.params.s(), sol.convolution->nodes(), sol.u.values);
}

}  // namespace

Solution solveLinear(const FracParams& p, const Domain& d, const SourceTerm& f, double h, const SolverOptions& opt) {
    if (f.kind != SourceKind::pureSpace) throw ParameterError("solveLinear: source term depends on u");
    Solution sol = prepare(p, d, f, h, opt);
    sol.u.values = convolveOnGrid(sol, opt.jobs);
    attachInterpolant(sol);
    sol.iterations = 1;
    sol.residual = 0.0;
    if (opt.computeTrace) sol.trace = solutionTrace(sol, opt.trace);
    return sol;
}

Solution solveSemilinear(const FracParams& p, const Domain& d, const SourceTerm& f, double h,
                         const SolverOptions& opt) {
    Solution sol = prepare(p, d, f, h, opt);
    attachInterpolant(sol);
    const double bound = greenMassBound(p, d);
    const auto& nodes = sol.convolution->nodes();

    auto lipschitz = [&]() {
        double L = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            const double q = sol.u.values[j];
            double slope;
            if (f.dq) {
                slope = f.dq(nodes[j], q);
            } else {
                const double eps = 1e-6 * std::max(1.0, std::abs(q));
                slope = (f(nodes[j], q + eps) - f(nodes[j], q - eps)) / (2.0 * eps);
            }
            L = std::max(L, std::abs(slope));
        }
        return L;
    };

    double previous = std::numeric_limits<double>::infinity();
    int increases = 0;
    for (int k = 1; k <= opt.maxIterations; ++k) {
        if (!sol.damped && lipschitz() * bound >= 1.0) sol.damped = true;
        const auto next = convolveOnGrid(sol, opt.jobs);
        double residual = 0.0;
        for (std::size_t j = 0; j < next.size(); ++j)
            residual = std::max(residual, std::abs(next[j] - sol.u.values[j]));
        sol.iterations = k;
        sol.residual = residual;
        if (residual <= opt.tol) break;
        if (sol.damped) {
            increases = residual > previous ? increases + 1 : 0;
            if (increases >= 3)
                throw ConvergenceError("solveSemilinear: damped Picard residual increased 3 times in a row (residual " +
                                       formatNumber(residual) + " at iteration " + std::to_string(k) + ")");
        }
        previous = residual;
        const double theta = sol.damped ? 0.5 : 1.0;
        for (std::size_t j = 0; j < next.size(); ++j)
            sol.u.values[j] = (1.0 - theta) * sol.u.values[j] + theta * next[j];
        attachInterpolant(sol);
        if (k == opt.maxIterations)
            throw ConvergenceError("solveSemilinear: no convergence in " + std::to_string(k) +
                                   " iterations (residual " + formatNumber(residual) + ")");
    }
    if (opt.computeTrace) sol.trace = solutionTrace(sol, opt.trace);
    return sol;
}

TraceField solutionTrace(const Solution& sol, const TraceSchedule& schedule) {
    const double s = sol.params.s();
    const double c = sol.domain.center()[0];
    const double R = sol.domain.radius();
    TraceField out;
    for (double nu : {-1.0, 1.0}) {
        const double sigma = c + nu * R;
        const double reference = sigma - nu * schedule.firstStep;
        auto ratio = [&](double delta) { return sol.valueAt(sigma - nu * delta, reference) / std::pow(delta, s); };
        out.nodes.push_back(Point{sigma});
        out.values.push_back(boundaryLimit(ratio, s, schedule));
    }
    return out;
}

void writeSolutionCsv(const Solution& sol, std::ostream& out) {
    const double s = sol.params.s();
    out << "x,u,delta_s,ratio\n";
    for (std::size_t i = 0; i < sol.u.size(); ++i) {
        const double x = sol.u.points[i][0];
        const double ds = std::pow(sol.domain.signedDistance(sol.u.points[i]), s);
        out << formatNumber(x) << ',' << formatNumber(sol.u.values[i]) << ',' << formatNumber(ds) << ','
            << formatNumber(sol.u.values[i] / ds) << '\n';
    }
}

void writePlotData(const Solution& sol, std::ostream& out) {
    for (std::size_t i = 0; i < sol.u.size(); ++i)
        out << formatNumber(sol.u.points[i][0]) << '\t' << formatNumber(sol.u.values[i]) << '\n';
}

nlohmann::json solutionSummary(const Solution& sol) {
    nlohmann::json trace = nlohmann::json::array();
    for (std::size_t k = 0; k < sol.trace.size(); ++k)
        trace.push_back({{"sigma", sol.trace.nodes[k][0]}, {"value", sol.trace.values[k]}});
    double sup = 0.0;
    for (double v : sol.u.values) sup = std::max(sup, std::abs(v));
    return {{"N", sol.params.dim()},
            {"s", sol.params.s()},
            {"domain", toJson(sol.domain)},
            {"mesh", sol.u.h},
            {"points", sol.u.size()},
            {"source", sol.source.kind == SourceKind::pureSpace ? "pureSpace" : "semilinear"},
            {"iterations", sol.iterations},
            {"residual", sol.residual},
            {"damped", sol.damped},
            {"supNorm", sup},
            {"trace", trace}};
}

}  // namespace fraclap
