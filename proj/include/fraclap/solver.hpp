#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "json.hpp"
#include "fraclap/domain.hpp"
#include "fraclap/greenfn.hpp"
#include "fraclap/operator.hpp"
#include "fraclap/specfun.hpp"

namespace fraclap {

enum class SourceKind { pureSpace, semilinear };

/// Right-hand side f(x, q) of (-Δ)^s u = f(x, u). For pureSpace sources the
/// second argument is ignored. dh = ∂f/∂x and dq = ∂f/∂q are optional.
struct SourceTerm {
    using Fn = std::function<double(double x, double q)>;

    SourceKind kind = SourceKind::pureSpace;
    Fn f;
    Fn dh;
    Fn dq;

    static SourceTerm pure(std::function<double(double)> f, std::function<double(double)> df = {});
    static SourceTerm constant(double c);
    static SourceTerm semilinear(Fn f, Fn dh = {}, Fn dq = {});

    double operator()(double x, double q) const { return f(x, q); }
    bool hasPartials() const { return static_cast<bool>(dh) && static_cast<bool>(dq); }
};

struct ConvolutionOptions {
    double nearRadius = 0.125;  // near field, as a fraction of R, around the reference point and ∂Ω
    int cellOrder = 8;          // Gauss–Legendre nodes per near-field cell, split at the node
    double relTol = 1e-12;      // tanh-sinh tolerance on the singular cells
};

/// Product integration of u(x) = ∫_Ω G(x, z) g(z) dz on a uniform 1-D grid.
/// Cells around x and the two boundary cells are integrated adaptively
/// (split at x, in the offset z - x); cells within the near radius of the
/// reference point or of ∂Ω use Gauss–Legendre; the rest use the midpoint
/// rule. Sharing the reference point between nearby x keeps the
/// discretization error smooth in x, which finite differences and boundary
/// extrapolation rely on.
class GreenConvolution1D {
public:
    using Density = std::function<double(double)>;

    GreenConvolution1D(const FracParams& p, const Domain& d, double h, const ConvolutionOptions& opt = {});

    double apply(const Density& g, double x, double reference) const;
    double apply(const Density& g, double x) const { return apply(g, x, x); }

    const std::vector<double>& nodes() const { return nodes_; }
    const GreenFunction& green() const { return green_; }
    double mesh() const { return h_; }

private:
    FracParams p_;
    Domain d_;
    double h_;
    ConvolutionOptions opt_;
    GreenFunction green_;
    double left_;
    std::vector<double> nodes_;
};

/// ũ(z) = A(z)^s · (cubic interpolant of u_j / A_j^s), A = R² - |z - c|²:
/// interpolates grid values while keeping the δ^s boundary behaviour.
class BoundaryInterpolant {
public:
    BoundaryInterpolant(const Domain& d, double s, std::vector<double> nodes, const std::vector<double>& values);
    double operator()(double z) const;
    /// dũ/dz
    double derivative(double z) const;

private:
    Domain d_;
    double s_;
    std::vector<double> nodes_;
    std::vector<double> scaled_;
    double h_;
};

struct SolverOptions {
    int maxIterations = 200;
    double tol = 1e-10;
    ConvolutionOptions convolution;
    TraceSchedule trace;
    int jobs = 0;  // 0: defaultJobs()
    bool computeTrace = true;
};

struct Solution {
    FracParams params = FracParams(1, 0.5);
    Domain domain = Domain::unitInterval();
    GridFunction u;
    TraceField trace;
    int iterations = 0;
    double residual = 0.0;
    bool damped = false;

    /// u at an arbitrary interior point through the Green representation.
    double valueAt(double x) const { return valueAt(x, x); }
    double valueAt(double x, double reference) const;
    /// ∂u/∂x by 4th-order central differences of valueAt with step 0.02·δ(x).
    double derivativeAt(double x) const;
    /// The right-hand side evaluated along the solution, f(z, ũ(z)).
    double density(double z) const;
    /// ũ and its derivative from the grid values.
    double interpolated(double z) const;
    double interpolatedDerivative(double z) const;

    std::shared_ptr<const GreenConvolution1D> convolution;
    std::shared_ptr<const BoundaryInterpolant> interpolant;
    SourceTerm source;
};

/// Dirichlet problem (-Δ)^s u = f in Ω, u = 0 outside, for a pure-space f.
/// One-dimensional domains only; balls raise CapabilityError.
Solution solveLinear(const FracParams& p, const Domain& d, const SourceTerm& f, double h,
                     const SolverOptions& opt = {});

/// Picard iteration u <- ∫ G f(·, u). Damping 0.5 is switched on when
/// L · sup_x ∫G(x,z)dz >= 1 (L estimated from ∂f/∂q along the iterate);
/// three consecutive increases of the damped residual raise ConvergenceError.
Solution solveSemilinear(const FracParams& p, const Domain& d, const SourceTerm& f, double h,
                         const SolverOptions& opt = {});

/// (u/δ^s) at both endpoints by extrapolation along the inward normal.
TraceField solutionTrace(const Solution& sol, const TraceSchedule& schedule = {});

/// Rows x, u, δ^s, u/δ^s with a header line.
void writeSolutionCsv(const Solution& sol, std::ostream& out);
/// Two columns x, u without a header, for plotting.
void writePlotData(const Solution& sol, std::ostream& out);
nlohmann::json solutionSummary(const Solution& sol);

}  // namespace fraclap
