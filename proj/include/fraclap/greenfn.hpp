#pragma once

#include <functional>
#include <vector>

#include "fraclap/domain.hpp"
#include "fraclap/point.hpp"
#include "fraclap/specfun.hpp"

namespace fraclap {

struct GreenEval {
    double value = 0.0;  // G_s(x, y)
    Point gradY;         // ∇_y G_s(x, y)
    bool singular = false;
};

/// Boundary values of w/δ^s, aligned with the nodes of a BoundaryRule.
struct TraceField {
    std::vector<Point> nodes;
    std::vector<double> values;

    std::size_t size() const { return nodes.size(); }
};

/// Green function of (-Δ)^s with zero exterior data on an interval or ball.
///
/// On the unit ball
///   G(x,y) = κ |x-y|^{2s-N} ∫_0^{r0} t^{s-1} (1+t)^{-N/2} dt,
///   r0 = (1-|x|^2)(1-|y|^2) / |x-y|^2,
/// with κ = Γ(N/2) / (4^s π^{N/2} Γ(s)^2). The integral is an incomplete
/// beta function in w = r0/(1+r0), which covers all three regimes
/// (the N < 2s case through the b -> b+1 recurrence). General balls follow by
/// translation and the scaling G_R(x,y) = R^{2s-N} G_1(x/R, y/R).
class GreenFunction {
public:
    GreenFunction(const FracParams& p, const Domain& d);

    const FracParams& params() const { return p_; }
    const Domain& domain() const { return d_; }

    /// G(x, y); 0 when either point is outside; +inf on the diagonal unless N < 2s.
    double value(const Point& x, const Point& y) const;
    GreenEval evaluate(const Point& x, const Point& y) const;

    /// ∂/∂x_i of G(y, x), i.e. the derivative in the second slot at x.
    double gradX(const Point& x, const Point& y, int axis) const;

    /// H(x, y) = F(x, y) - G(x, y), continuous across x = y.
    double regularPart(const Point& x, const Point& y) const;

    /// Robin function R(x) = H(x, x).
    double robin(const Point& x) const;

    /// lim_{y -> σ} G(x, y) / δ(y)^s, in closed form.
    double trace(const Point& x, const Point& sigma) const;

    /// Fast 1-D path used by the solver's hot loops.
    double value1d(double x, double y) const;
    /// G(x, x + t) and ∂_z G(x, z) at z = x + t, with the separation passed
    /// exactly so that t below the spacing of doubles near x stays usable.
    double value1dOffset(double x, double t) const;
    double grad1dOffset(double x, double t) const;

private:
    double unitValue(double r, double ax, double ay) const;
    double unitRegular(double r, double ax, double ay) const;

    FracParams p_;
    Domain d_;
    double kappa_;
    double alpha_;  // N/2 - s
    double scaleValue_;
    double scaleGrad_;
    double fundamentalConst_;  // b_{N,s}, or the N < 2s constant
};

// Free-function surface mirroring the operation list.
GreenEval greenValue(const FracParams& p, const Domain& d, const Point& x, const Point& y);
double regularPart(const FracParams& p, const Domain& d, const Point& x, const Point& y);
double robin(const FracParams& p, const Domain& d, const Point& x);
double gradGreenX(const FracParams& p, const Domain& d, const Point& x, const Point& y, int axis);
TraceField greenTrace(const FracParams& p, const Domain& d, const Point& x, const BoundaryRule& rule);

/// Fundamental solution at two points.
double fundamentalAt(const FracParams& p, const Point& x, const Point& y);

// ---------------------------------------------------------------------------
// Boundary-limit extrapolation

/// Geometric schedule δ_k = firstStep · 2^{-k}, k = 0..levels-1.
struct TraceSchedule {
    double firstStep = 1e-2;
    int levels = 9;
    double relTol = 1e-6;
    double absTol = 1e-12;
};

struct Extrapolation {
    double value = 0.0;
    double error = 0.0;
    std::vector<double> samples;  // ratio(δ_k)
    bool converged = false;
};

/// Richardson extrapolation of ratio(δ) -> δ = 0, assuming an expansion in
/// powers δ^{p0}, δ, δ^2, ... with p0 = min(1, 2 - 2s). Never throws.
Extrapolation extrapolateToBoundary(const std::function<double(double)>& ratio, double s,
                                    const TraceSchedule& schedule = {});

/// Same as above but throws NumericalError (with the samples in the message)
/// when the table does not settle below the schedule's tolerance.
double boundaryLimit(const std::function<double(double)>& ratio, double s, const TraceSchedule& schedule = {});

/// γ_0^s(G(x,·)) obtained by extrapolating G(x, σ - δν)/δ^s along the inward
/// normal rather than from the closed form.
TraceField extrapolatedGreenTrace(const FracParams& p, const Domain& d, const Point& x, const BoundaryRule& rule,
                                  const TraceSchedule& schedule = {});

}  // namespace fraclap
