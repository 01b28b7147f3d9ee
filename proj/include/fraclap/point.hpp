#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>
#include <string>

namespace fraclap {

/// Small fixed-capacity Euclidean vector (dimension 1..3).
class Point {
public:
    static constexpr int kMaxDim = 3;

    Point() = default;
    explicit Point(int dim) : dim_(dim) { assert(dim >= 1 && dim <= kMaxDim); }
    Point(std::initializer_list<double> coords) : dim_(static_cast<int>(coords.size())) {
        assert(dim_ >= 1 && dim_ <= kMaxDim);
        int i = 0;
        for (double c : coords) v_[i++] = c;
    }

    static Point scalar(double x) { return Point{x}; }
    static Point axis(int dim, int i, double length = 1.0) {
        Point p(dim);
        p[i] = length;
        return p;
    }

    int dim() const { return dim_; }
    double& operator[](int i) { return v_[i]; }
    double operator[](int i) const { return v_[i]; }

    double dot(const Point& o) const {
        double acc = 0.0;
        for (int i = 0; i < dim_; ++i) acc += v_[i] * o.v_[i];
        return acc;
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }

    Point& operator+=(const Point& o) {
        for (int i = 0; i < dim_; ++i) v_[i] += o.v_[i];
        return *this;
    }
    Point& operator-=(const Point& o) {
        for (int i = 0; i < dim_; ++i) v_[i] -= o.v_[i];
        return *this;
    }
    Point& operator*=(double a) {
        for (int i = 0; i < dim_; ++i) v_[i] *= a;
        return *this;
    }
    friend Point operator+(Point a, const Point& b) { return a += b; }
    friend Point operator-(Point a, const Point& b) { return a -= b; }
    friend Point operator*(double a, Point b) { return b *= a; }
    friend Point operator*(Point b, double a) { return b *= a; }
    friend Point operator-(Point a) { return a *= -1.0; }
    friend bool operator==(const Point& a, const Point& b) {
        if (a.dim_ != b.dim_) return false;
        for (int i = 0; i < a.dim_; ++i)
            if (a.v_[i] != b.v_[i]) return false;
        return true;
    }

    std::string str() const {
        std::string out = "(";
        for (int i = 0; i < dim_; ++i) {
            if (i) out += ", ";
            out += std::to_string(v_[i]);
        }
        return out + ")";
    }

private:
    std::array<double, kMaxDim> v_{};
    int dim_ = 1;
};

inline double distance(const Point& a, const Point& b) { return (a - b).norm(); }

}  // namespace fraclap
