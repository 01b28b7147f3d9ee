#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "fraclap/domain.hpp"
#include "fraclap/point.hpp"
#include "fraclap/specfun.hpp"

namespace fraclap {

/// A function on Ω, extended by zero outside. Only ever called at points
/// strictly inside the domain it is paired with.
using ScalarField = std::function<double(const Point&)>;

/// Grid samples of a function that vanishes outside its domain.
struct GridFunction {
    Domain domain = Domain::unitInterval();
    double h = 0.0;
    std::vector<Point> points;
    std::vector<double> values;

    std::size_t size() const { return points.size(); }
    static GridFunction sample(const Domain& d, double h, const ScalarField& u);
};

/// Smooth transition ρ with ρ = 1 on [-lo, lo] and ρ = 0 outside (-hi, hi),
/// 1 <= lo < hi <= 2. The transition is the exp(-1/t) smoothstep.
class CutoffProfile {
public:
    CutoffProfile(double lo = 1.0, double hi = 2.0);
    double operator()(double t) const;
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    std::string describe() const;

private:
    double lo_, hi_;
};

/// Half of the unit sphere's directions with weights summing to |S^{N-1}|/2.
/// N = 1: the single direction +1 with weight 1.
struct DirectionRule {
    std::vector<Point> dirs;
    std::vector<double> weights;
};
DirectionRule halfSphereDirections(int dim, int order);

struct OperatorOptions {
    double relTol = 1e-10;
    double absTol = 1e-13;
    int directions = 64;          // circle: trapezoid nodes on [0, π); sphere: Gauss–Legendre order
    double taylorCutoff = 1e-3;   // ρ_c as a fraction of the nearest exit distance
    double warnDistance = 0.0;    // flag points with δ(x) below this
};

struct OperatorValue {
    double value = 0.0;
    double error = 0.0;
    bool nearBoundary = false;
};

/// (-Δ)^s u(x) = c_{N,s} p.v.∫ (u(x) - u(z)) |x - z|^{-N-2s} dz, written as
///   c_{N,s} ∫_{half sphere} ∫_0^∞ (2u(x) - u(x+ρω) - u(x-ρω)) ρ^{-1-2s} dρ dω.
/// The ρ-integral is split at the exit distances along ±ω; beyond both only
/// 2u(x) remains and the tail is taken in closed form. Below ρ_c the second
/// difference is replaced by its quadratic Taylor model.
OperatorValue fracLap(const FracParams& p, const Domain& d, const ScalarField& u, const Point& x,
                      const OperatorOptions& opt = {});
double applyFracLap(const FracParams& p, const Domain& d, const ScalarField& u, const Point& x,
                    const OperatorOptions& opt = {});

/// I_s[u,v](x) = c_{N,s} p.v.∫ (u(x) - u(y))(v(x) - v(y)) |x - y|^{-N-2s} dy.
double interactionForm(const FracParams& p, const Domain& d, const ScalarField& u, const ScalarField& v,
                       const Point& x, const OperatorOptions& opt = {});

/// E_s(u, v) = (c_{N,s}/2) ∬ (u(y)-u(z))(v(y)-v(z)) |y-z|^{-N-2s} dy dz on grid samples.
/// Off-diagonal cell pairs use the midpoint rule, Ω × (R^N \ Ω) is folded into
/// c ∫ u v κ_ext with κ_ext(y) = ∫_{R^N\Ω} |y-z|^{-N-2s} dz, and each
/// diagonal cell contributes its linearized (∇u·∇v) self-interaction.
double energyForm(const FracParams& p, const GridFunction& u, const GridFunction& v);

/// ∫_{R^N\Ω} |y - z|^{-N-2s} dz for interior y.
double exteriorKernelMass(const FracParams& p, const Domain& d, const Point& y, int directions = 64);

struct ConstantEstimate {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// a_{N,s}[ρ] = c_{N,s} ∬ (ρ(|y|²) - ρ(|z|²)) (F(z) - F(y)) |z - y|^{-N-2s} dy dz
/// with F the fundamental solution, for N ∈ {1, 2}. The budget bounds the
/// number of integrand evaluations; when it runs out the partial value is
/// returned with converged = false.
ConstantEstimate aConstant(const FracParams& p, const CutoffProfile& rho = {}, std::size_t budget = 50'000'000,
                           double tol = 1e-6);

}  // namespace fraclap
