#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "fraclap/point.hpp"

namespace fraclap {

enum class DomainKind { interval, ball };

/// Interval (a, b) or open ball B(center, radius) in dimension 1..3.
class Domain {
public:
    static Domain interval(double a, double b);
    static Domain ball(const Point& center, double radius);
    static Domain unitInterval() { return interval(-1.0, 1.0); }
    static Domain unitBall(int dim) { return ball(Point(dim), 1.0); }

    DomainKind kind() const { return kind_; }
    int dim() const { return center_.dim(); }
    const Point& center() const { return center_; }
    double radius() const { return radius_; }

    /// Positive inside, negative outside, |value| = distance to the boundary.
    double signedDistance(const Point& x) const;
    bool contains(const Point& x) const { return signedDistance(x) > 0.0; }

    /// R^2 - |x - c|^2; a smooth defining function, comparable to 2R·δ near ∂Ω.
    double boundaryWeight(const Point& x) const;

    /// Unit outward normal at σ; GeometryError when σ is not on ∂Ω.
    Point outwardNormal(const Point& sigma) const;

    /// Distance from an interior point x to ∂Ω along the unit direction dir.
    double exitDistance(const Point& x, const Point& dir) const;

    /// |∂Ω| (2 for an interval: the counting measure of the endpoints).
    double boundaryMeasure() const;

    /// Symmetric across every coordinate hyperplane through `at`.
    bool symmetricAbout(const Point& at) const;

    std::string describe() const;

private:
    Domain(DomainKind kind, const Point& center, double radius) : kind_(kind), center_(center), radius_(radius) {}

    DomainKind kind_;
    Point center_;
    double radius_;
};

struct BoundaryRule {
    std::vector<Point> nodes;
    std::vector<double> weights;
    std::vector<Point> normals;

    std::size_t size() const { return nodes.size(); }
    double totalWeight() const;
};

/// Quadrature for dσ. Interval: the two endpoints with unit weight.
/// Circle: `order`-node trapezoid rule. Sphere: Gauss–Legendre in cos θ
/// (`order` nodes) times a 2·order-node trapezoid rule in φ.
BoundaryRule boundaryRule(const Domain& d, int order);

/// Cell-centered grid of mesh h; for balls a tensor grid clipped to the ball.
std::vector<Point> interiorGrid(const Domain& d, double h);

nlohmann::json toJson(const Domain& d);
Domain domainFromJson(const nlohmann::json& j);

nlohmann::json toJson(const Point& p);

}  // namespace fraclap
