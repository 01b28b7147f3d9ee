#pragma once

#include <cstdint>
#include <limits>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "fraclap/domain.hpp"
#include "fraclap/greenfn.hpp"
#include "fraclap/operator.hpp"
#include "fraclap/solver.hpp"
#include "fraclap/specfun.hpp"

namespace fraclap {

enum class IdentityKind { thm11High, thm11Low, dedu, thm15, robinGrad, robinSymmetry, pohozaev, greenBounds, gradGreenL1 };

/// Report name (thm11_high, robinGrad, ...).
std::string toString(IdentityKind k);
/// Accepts the report name or the command-line spelling (thm11-high, robin-grad, ...).
std::optional<IdentityKind> parseIdentity(const std::string& name);
/// Command-line spellings, in a fixed order.
std::vector<std::string> identityNames();

struct IdentityReport {
    IdentityKind identity = IdentityKind::dedu;
    nlohmann::json params;  // N, s, domain, evaluation points and checker settings
    std::vector<double> lhs;
    std::vector<double> rhs;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::optional<double> runtimeMs;
    nlohmann::json details = nlohmann::json::object();
};

nlohmann::json toJson(const IdentityReport& r);

/// Shared knobs. A NaN tolerance selects the checker's default.
struct IdentityOptions {
    double tolerance = std::numeric_limits<double>::quiet_NaN();
    double mesh = 1.0 / 256;     // grid for solved u
    int boundaryOrder = 128;     // circle nodes; sphere: Gauss–Legendre order in cos θ
    double rhsPerturbation = 0;  // added to rhs before the residual; for failure injection
    bool timing = false;         // fill runtimeMs
    int jobs = 0;
    std::uint64_t seed = 20240917;
};

/// ∂_i u(x) = -Γ(1+s)² ∫ γ(u) γ(G(x,·)) ν_i for the torsion function.
/// Defaults: 1e-6 on intervals, 1e-3 on balls.
IdentityReport checkDedu(const FracParams& p, const Domain& d, const Point& x, int axis = 0,
                         const IdentityOptions& opt = {});

/// 2s > 1: ∂u(x) = -Γ(1+s)² Σ γ(u) γ(G(x,·)) ν - ∫ ∂_z G(x,z) f(z,u(z)) dz on an interval.
/// Default tolerance 1e-3.
IdentityReport checkThm11High(const FracParams& p, const Domain& d, const SourceTerm& f, double x,
                              const IdentityOptions& opt = {});

/// 2s <= 1: ∂u(x) = -Γ(1+s)² Σ γ(u) γ(G(x,·)) ν + ∫ G(x,z)(∂_h f + ∂_q f ∂_z u) dz on an interval.
/// The sign in front of the volume term is taken as printed; details carry the
/// residual with the opposite sign as well. Default tolerance 5e-3.
IdentityReport checkThm11Low(const FracParams& p, const Domain& d, const SourceTerm& f, double x,
                             const IdentityOptions& opt = {});

/// ∂_{x_i} G(y,x) + ∂_{y_i} G(x,y) = -Γ(1+s)² ∫ γ(G(x,·)) γ(G(y,·)) ν_i.
/// Defaults: 1e-5 on intervals, 1e-3 on balls.
IdentityReport checkThm15(const FracParams& p, const Domain& d, const Point& x, const Point& y, int axis = 0,
                          const IdentityOptions& opt = {});

/// ∂_i R(x) = Γ(1+s)² ∫ γ(G(x,·))² ν_i, the left side by differences of robin().
/// Defaults: 1e-6 on intervals, 1e-3 on balls.
IdentityReport checkRobinGrad(const FracParams& p, const Domain& d, const Point& x, int axis = 0,
                              const IdentityOptions& opt = {});

/// ∂_j R = 0 at a centre of symmetry and, with `second`, ∂_i ∂_j R = 0 (i != j).
/// Defaults: 1e-6, or 1e-5 when the mixed derivative is included.
IdentityReport checkRobinSymmetry(const FracParams& p, const Domain& d, int j, std::optional<int> second = {},
                                  std::optional<Point> at = {}, const IdentityOptions& opt = {});

/// A function admissible in the integration-by-parts identity: value, partial
/// derivatives, (-Δ)^s (computed by the operator module when empty) and the
/// boundary trace γ(v) (zero when empty). A positive `support` is the radius
/// of a ball around supportCenter outside which the function vanishes.
struct TestFunction {
    std::string name;
    ScalarField value;
    std::function<double(const Point&, int)> partial;
    ScalarField fracLap;
    std::function<double(const Point&)> trace;
    Point supportCenter;
    double support = 0.0;
};

/// exp(1 - 1/(1 - |x - c'|²/r²)) around c' = centre + shift.
TestFunction bumpFunction(const Domain& d, double radius, std::optional<Point> shift = {});
TestFunction torsionFunction(const FracParams& p, const Domain& d);
/// Wraps a solved u: derivatives through the solution, (-Δ)^s u = f.
TestFunction solvedFunction(const Solution& sol, std::string name);

/// ∫ ∂_i v (-Δ)^s w + ∫ ∂_i w (-Δ)^s v = -Γ(1+s)² ∫ γ(v) γ(w) ν_i.
/// Intervals (adaptive in z), and balls in the plane for functions of compact
/// support (fixed 20 x 32 polar rule on each support; accurate while the other
/// function's (-Δ)^s varies slowly there, e.g. for disjoint supports).
/// Defaults: 1e-3 when no trace is involved, 5e-3 otherwise.
IdentityReport checkPohozaev(const FracParams& p, const Domain& d, const TestFunction& v, const TestFunction& w,
                             int axis = 0, const IdentityOptions& opt = {});

/// |∇_y G(x,y)| <= N G / min(|x-y|, δ(y)) on random pairs, and for N > 2s the
/// spread of G / min(r^{2s-N}, δ(x)^s δ(y)^s r^{-N}). The residual counts
/// gradient violations plus one if the spread reaches 1e3; tolerance 0.
IdentityReport checkGreenBounds(const FracParams& p, const Domain& d, int sampleCount,
                                const IdentityOptions& opt = {});

/// ∫_{Ω_ε} |∂_z G(x,z)| dz with the ε-neighbourhoods of x and ∂Ω removed,
/// ε = 10^-2 · 2^-k. For s > 1/2 the last relative change must be < 5%;
/// otherwise every level must grow by at least 20%. Intervals only.
IdentityReport checkGradGreenL1(const FracParams& p, const Domain& d, double x, int levels = 8,
                                const IdentityOptions& opt = {});

}  // namespace fraclap
