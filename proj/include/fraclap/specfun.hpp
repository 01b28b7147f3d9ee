#pragma once

#include <optional>
#include <string>

namespace fraclap {

enum class Regime {
    subcritical,        // N > 2s: Riesz kernel r^{2s-N}
    logCritical,        // N = 2s (only N = 1, s = 1/2): logarithmic kernel
    superharmonicLine,  // N < 2s (only N = 1, s > 1/2): kernel grows like r^{2s-1}
};

std::string toString(Regime r);

/// Dimension N and order s of (-Δ)^s. Immutable; validated on construction.
class FracParams {
public:
    FracParams(int dim, double s);

    int dim() const { return dim_; }
    double s() const { return s_; }
    Regime regime() const { return regime_; }

private:
    int dim_;
    double s_;
    Regime regime_;
};

/// Constants attached to an admissible (N, s).
struct ConstantSet {
    double cNs;                 // normalization of the singular integral
    std::optional<double> bNs;  // Riesz constant; only defined for N > 2s
    double gammaSq;             // Γ(1+s)^2
    double torsionScale;        // γ with (-Δ)^s γ(1-|x|^2)_+^s = 1 on the unit ball
};

/// Γ(x) for x > 0, Lanczos approximation (g = 7, 9 terms), ~15 digits.
double gammaFn(double x);

/// Γ on the whole real line minus the poles, via reflection. Internal use
/// (the N < 2s fundamental solution needs Γ at negative arguments).
double gammaReal(double x);

/// B(a, b) = Γ(a)Γ(b)/Γ(a+b), a, b > 0.
double betaFn(double a, double b);

/// Lower incomplete beta ∫_0^x t^{a-1}(1-t)^{b-1} dt (unregularized) for
/// a, b > 0. `xc` must equal 1 - x; passing it separately keeps full
/// relative accuracy when x is close to 1.
double incompleteBeta(double a, double b, double x, double xc);

/// c_{N,s} = s 4^s Γ((N+2s)/2) / (π^{N/2} Γ(1-s)), the Fourier-consistent
/// normalization: (-Δ)^s has symbol |ξ|^{2s}.
double cConst(const FracParams& p);

/// b_{N,s} = π^{-N/2} 4^{-s} Γ((N-2s)/2) / Γ(s). Throws RegimeError if N <= 2s.
double bConst(const FracParams& p);

/// Fundamental solution F_s as a function of the distance r > 0.
///   N > 2s : b_{N,s} r^{2s-N}
///   N = 2s : -(1/π) log r
///   N < 2s : r^{2s-1} / (2 cos(πs) Γ(2s))   (negative constant)
double fundamental(const FracParams& p, double r);

/// Γ(N/2) / (4^s Γ((N+2s)/2) Γ(1+s)).
double torsionScale(const FracParams& p);

/// κ_{N,s} = Γ(N/2) / (4^s π^{N/2} Γ(s)^2), prefactor of the ball Green function.
double ballGreenScale(const FracParams& p);

ConstantSet constants(const FracParams& p);

}  // namespace fraclap
