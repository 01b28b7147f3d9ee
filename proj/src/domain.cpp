#include "fraclap/domain.hpp"

#include <cmath>
#include <numbers>

#include "fraclap/errors.hpp"
#include "fraclap/quadrature.hpp"

namespace fraclap {

namespace {
constexpr double kPi = std::numbers::pi;
}

Domain Domain::interval(double a, double b) {
    if (!(std::isfinite(a) && std::isfinite(b) && a < b)) throw ParameterError("interval: need finite a < b");
    return Domain(DomainKind::interval, Point{0.5 * (a + b)}, 0.5 * (b - a));
}

Domain Domain::ball(const Point& center, double radius) {
    if (!(std::isfinite(radius) && radius > 0.0)) throw ParameterError("ball: radius must be positive");
    for (int i = 0; i < center.dim(); ++i)
        if (!std::isfinite(center[i])) throw ParameterError("ball: center must be finite");
    return Domain(DomainKind::ball, center, radius);
}

double Domain::signedDistance(const Point& x) const {
    if (x.dim() != dim()) throw ParameterError("signedDistance: point dimension mismatch");
    return radius_ - distance(x, center_);
}

double Domain::boundaryWeight(const Point& x) const {
    if (dim() == 1) {
        const double t = x[0] - center_[0];
        return (radius_ - t) * (radius_ + t);
    }
    return radius_ * radius_ - (x - center_).norm2();
}

Point Domain::outwardNormal(const Point& sigma) const {
    if (std::abs(signedDistance(sigma)) > 1e-12 * std::max(1.0, radius_))
        throw GeometryError("outwardNormal: point " + sigma.str() + " is not on the boundary");
    Point n = sigma - center_;
    return (1.0 / n.norm()) * n;
}

double Domain::exitDistance(const Point& x, const Point& dir) const {
    // |x - c + t dir|^2 = R^2, positive root
    const Point rel = x - center_;
    const double b = rel.dot(dir);
    const double c = rel.norm2() - radius_ * radius_;
    const double disc = std::sqrt(std::max(0.0, b * b - c));
    // numerically stable positive root of t^2 + 2bt + c = 0
    if (b >= 0.0) return -c / (b + disc);
    return disc - b;
}

double Domain::boundaryMeasure() const {
    switch (dim()) {
        case 1: return 2.0;
        case 2: return 2.0 * kPi * radius_;
        case 3: return 4.0 * kPi * radius_ * radius_;
        default: throw CapabilityError("boundaryMeasure: dimension > 3");
    }
}

bool Domain::symmetricAbout(const Point& at) const {
    return distance(at, center_) <= 1e-14 * std::max(1.0, radius_);
}

std::string Domain::describe() const {
    if (kind_ == DomainKind::interval)
        return "interval(" + std::to_string(center_[0] - radius_) + ", " + std::to_string(center_[0] + radius_) + ")";
    return "ball(center=" + center_.str() + ", radius=" + std::to_string(radius_) + ", N=" + std::to_string(dim()) +
           ")";
}

double BoundaryRule::totalWeight() const {
    quad::CompensatedSum acc;
    for (double w : weights) acc += w;
    return acc.value();
}

BoundaryRule boundaryRule(const Domain& d, int order) {
    if (order < 1) throw ParameterError("boundaryRule: order must be >= 1");
    BoundaryRule rule;
    const Point& c = d.center();
    const double r = d.radius();
    switch (d.dim()) {
        case 1:
            rule.nodes = {Point{c[0] - r}, Point{c[0] + r}};
            rule.weights = {1.0, 1.0};
            rule.normals = {Point{-1.0}, Point{1.0}};
            break;
        case 2:
            for (int k = 0; k < order; ++k) {
                const double th = 2.0 * kPi * k / order;
                const Point n{std::cos(th), std::sin(th)};
                rule.nodes.push_back(c + r * n);
                rule.normals.push_back(n);
                rule.weights.push_back(2.0 * kPi * r / order);
            }
            break;
        case 3: {
            const auto& gl = quad::gaussLegendre(order);
            const int nphi = 2 * order;
            for (int i = 0; i < order; ++i) {
                const double ct = gl.nodes[i];
                const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
                for (int k = 0; k < nphi; ++k) {
                    const double ph = 2.0 * kPi * k / nphi;
                    const Point n{st * std::cos(ph), st * std::sin(ph), ct};
                    rule.nodes.push_back(c + r * n);
                    rule.normals.push_back(n);
                    rule.weights.push_back(r * r * gl.weights[i] * 2.0 * kPi / nphi);
                }
            }
            break;
        }
        default: throw CapabilityError("boundaryRule: only dimensions 1, 2, 3 are supported");
    }
    return rule;
}

std::vector<Point> interiorGrid(const Domain& d, double h) {
    if (!(std::isfinite(h) && h > 0.0)) throw ParameterError("interiorGrid: mesh must be positive");
    const double width = 2.0 * d.radius();
    std::vector<Point> out;
    if (d.dim() == 1) {
        const double cells = width / h;
        const double n = std::round(cells);
        if (n < 2.0 || std::abs(cells - n) > 1e-9 * n)
            throw ParameterError("interiorGrid: mesh must divide the interval into at least 2 cells");
        const double a = d.center()[0] - d.radius();
        const int count = static_cast<int>(n);
        out.reserve(count);
        for (int k = 0; k < count; ++k) out.push_back(Point{a + (k + 0.5) * h});
        return out;
    }
    const int m = static_cast<int>(std::ceil(width / h - 1e-9));
    std::vector<double> offsets(m);
    for (int k = 0; k < m; ++k) offsets[k] = (k - 0.5 * (m - 1)) * h;
    const int dim = d.dim();
    std::vector<int> idx(dim, 0);
    while (true) {
        Point p(dim);
        for (int i = 0; i < dim; ++i) p[i] = d.center()[i] + offsets[idx[i]];
        if (d.contains(p)) out.push_back(p);
        int i = 0;
        while (i < dim && ++idx[i] == m) idx[i++] = 0;
        if (i == dim) break;
    }
    if (out.size() < 2) throw ParameterError("interiorGrid: mesh too coarse for the ball");
    return out;
}

nlohmann::json toJson(const Point& p) {
    auto arr = nlohmann::json::array();
    for (int i = 0; i < p.dim(); ++i) arr.push_back(p[i]);
    return arr;
}

nlohmann::json toJson(const Domain& d) {
    if (d.kind() == DomainKind::interval)
        return {{"kind", "interval"},
                {"params", {{"a", d.center()[0] - d.radius()}, {"b", d.center()[0] + d.radius()}}}};
    return {{"kind", "ball"}, {"params", {{"center", toJson(d.center())}, {"radius", d.radius()}}}};
}

Domain domainFromJson(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const auto& params = j.at("params");
    if (kind == "interval") return Domain::interval(params.at("a").get<double>(), params.at("b").get<double>());
    if (kind == "ball") {
        const auto coords = params.at("center").get<std::vector<double>>();
        if (coords.empty() || coords.size() > static_cast<std::size_t>(Point::kMaxDim))
            throw ParameterError("ball: center must have 1..3 coordinates");
        Point c(static_cast<int>(coords.size()));
        for (std::size_t i = 0; i < coords.size(); ++i) c[static_cast<int>(i)] = coords[i];
        return Domain::ball(c, params.at("radius").get<double>());
    }
    throw ParameterError("unknown domain kind '" + kind + "'");
}

}  // namespace fraclap
