#pragma once

#include <array>
#include <string>
#include <vector>

namespace sobex {

/// Volume of the unit ball in R^n, omega_n = pi^{n/2} / Gamma(n/2 + 1).
double unit_ball_volume(int n);

/// Radius rho with omega_n rho^n = volume.
double volume_radius(double volume, int n);

/// Throws subcriticality-violation unless 1 < p (< 2n/(n-2) when n >= 3).
void validate_exponents(int n, double p);
bool exponents_valid(int n, double p);

enum class DomainKind { ball, rectangle, ellipse, polygon };

const char* domain_kind_name(DomainKind k);

/// Bounded domain: a ball in any dimension, or a planar rectangle /
/// ellipse / simple polygon. Lengths are dimensionless.
struct Domain {
    DomainKind kind = DomainKind::ball;
    int n = 2;
    double radius = 1.0;              // ball
    double width = 0.0, height = 0.0; // rectangle, corner at origin
    double a = 0.0, b = 0.0;          // ellipse semi-axes, centered at origin
    std::vector<std::array<double, 2>> vertices; // polygon, CCW

    static Domain ball(int n, double radius);
    static Domain rectangle(double width, double height);
    static Domain ellipse(double a, double b);
    static Domain polygon(std::vector<std::array<double, 2>> vertices);

    double volume() const;
    std::array<double, 4> bounding_box() const; // {x0, y0, x1, y1}; 2-D kinds only
    bool contains(double x, double y) const;    // strict interior test; 2-D kinds only
    std::string id() const;
};

double domain_volume(const Domain& d);

} // namespace sobex
