#include "sobex/geometry.hpp"

#include "sobex/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sobex {

const char* errc_name(errc c) {
    switch (c) {
    case errc::invalid_dimension: return "invalid-dimension";
    case errc::invalid_measure: return "invalid-measure";
    case errc::invalid_geometry: return "invalid-geometry";
    case errc::subcriticality_violation: return "subcriticality-violation";
    case errc::no_zero_found: return "no-zero-found";
    case errc::resolution_too_coarse: return "resolution-too-coarse";
    case errc::flow_stalled: return "flow-stalled";
    case errc::undefined_quotient: return "undefined-quotient";
    case errc::no_solution: return "no-solution";
    case errc::unsupported_source: return "unsupported-source";
    case errc::inconsistent_inputs: return "inconsistent-inputs";
    case errc::nonconvergence: return "nonconvergence";
    case errc::config_error: return "config-error";
    }
    return "unknown";
}

double unit_ball_volume(int n) {
    if (n < 1)
        throw Error(errc::invalid_dimension, "dimension must be >= 1, got " + std::to_string(n));
    // omega_1 = 2, omega_2 = pi, omega_n = omega_{n-2} * 2 pi / n.
    // Exact half-integer Gamma recurrence, no Gamma evaluation needed.
    double w = (n % 2 == 1) ? 2.0 : std::numbers::pi;
    for (int k = (n % 2 == 1) ? 3 : 4; k <= n; k += 2)
        w *= 2.0 * std::numbers::pi / k;
    return w;
}

double volume_radius(double volume, int n) {
    if (volume <= 0.0)
        throw Error(errc::invalid_measure, "volume must be positive");
    if (n < 1)
        throw Error(errc::invalid_dimension, "dimension must be >= 1, got " + std::to_string(n));
    return std::pow(volume / unit_ball_volume(n), 1.0 / n);
}

bool exponents_valid(int n, double p) {
    if (n < 2 || p <= 1.0)
        return false;
    if (n >= 3 && p >= 2.0 * n / (n - 2))
        return false;
    return true;
}

void validate_exponents(int n, double p) {
    if (n < 2)
        throw Error(errc::invalid_dimension, "dimension must be >= 2, got " + std::to_string(n));
    if (exponents_valid(n, p))
        return;
    std::ostringstream msg;
    msg << "p = " << p << " outside admissible range (1, ";
    if (n >= 3)
        msg << 2.0 * n / (n - 2);
    else
        msg << "inf";
    msg << ") for n = " << n;
    throw Error(errc::subcriticality_violation, msg.str());
}

const char* domain_kind_name(DomainKind k) {
    switch (k) {
    case DomainKind::ball: return "ball";
    case DomainKind::rectangle: return "rectangle";
    case DomainKind::ellipse: return "ellipse";
    case DomainKind::polygon: return "polygon";
    }
    return "unknown";
}

Domain Domain::ball(int n, double radius) {
    if (n < 2)
        throw Error(errc::invalid_dimension, "ball dimension must be >= 2");
    if (radius <= 0.0)
        throw Error(errc::invalid_geometry, "ball radius must be positive");
    Domain d;
    d.kind = DomainKind::ball;
    d.n = n;
    d.radius = radius;
    return d;
}

Domain Domain::rectangle(double width, double height) {
    if (width <= 0.0 || height <= 0.0)
        throw Error(errc::invalid_geometry, "rectangle sides must be positive");
    Domain d;
    d.kind = DomainKind::rectangle;
    d.n = 2;
    d.width = width;
    d.height = height;
    return d;
}

Domain Domain::ellipse(double a, double b) {
    if (a <= 0.0 || b <= 0.0)
        throw Error(errc::invalid_geometry, "ellipse semi-axes must be positive");
    Domain d;
    d.kind = DomainKind::ellipse;
    d.n = 2;
    d.a = a;
    d.b = b;
    return d;
}

namespace {

double shoelace_signed_area(const std::vector<std::array<double, 2>>& v) {
    double s = 0.0;
    const size_t m = v.size();
    for (size_t i = 0; i < m; ++i) {
        const auto& p = v[i];
        const auto& q = v[(i + 1) % m];
        s += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * s;
}

bool segments_intersect(const std::array<double, 2>& a, const std::array<double, 2>& b,
                        const std::array<double, 2>& c, const std::array<double, 2>& d) {
    auto cross = [](double ox, double oy, double ax, double ay, double bx, double by) {
        return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
    };
    const double d1 = cross(a[0], a[1], b[0], b[1], c[0], c[1]);
    const double d2 = cross(a[0], a[1], b[0], b[1], d[0], d[1]);
    const double d3 = cross(c[0], c[1], d[0], d[1], a[0], a[1]);
    const double d4 = cross(c[0], c[1], d[0], d[1], b[0], b[1]);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

} // namespace

Domain Domain::polygon(std::vector<std::array<double, 2>> vertices) {
    if (vertices.size() < 3)
        throw Error(errc::invalid_geometry, "polygon needs at least 3 vertices");
    const size_t m = vertices.size();
    // non-adjacent edge pairs must not cross
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = i + 2; j < m; ++j) {
            if (i == 0 && j == m - 1)
                continue;
            if (segments_intersect(vertices[i], vertices[(i + 1) % m], vertices[j],
                                   vertices[(j + 1) % m]))
                throw Error(errc::invalid_geometry, "polygon is self-intersecting");
        }
    }
    const double area = shoelace_signed_area(vertices);
    if (std::abs(area) <= 0.0)
        throw Error(errc::invalid_geometry, "polygon has zero area");
    if (area < 0.0)
        std::reverse(vertices.begin(), vertices.end()); // normalize to CCW
    Domain d;
    d.kind = DomainKind::polygon;
    d.n = 2;
    d.vertices = std::move(vertices);
    return d;
}

double Domain::volume() const {
    switch (kind) {
    case DomainKind::ball: return unit_ball_volume(n) * std::pow(radius, n);
    case DomainKind::rectangle: return width * height;
    case DomainKind::ellipse: return std::numbers::pi * a * b;
    case DomainKind::polygon: return shoelace_signed_area(vertices);
    }
    return 0.0;
}

double domain_volume(const Domain& d) { return d.volume(); }

std::array<double, 4> Domain::bounding_box() const {
    switch (kind) {
    case DomainKind::ball: return {-radius, -radius, radius, radius};
    case DomainKind::rectangle: return {0.0, 0.0, width, height};
    case DomainKind::ellipse: return {-a, -b, a, b};
    case DomainKind::polygon: {
        double x0 = vertices[0][0], x1 = x0, y0 = vertices[0][1], y1 = y0;
        for (const auto& v : vertices) {
            x0 = std::min(x0, v[0]);
            x1 = std::max(x1, v[0]);
            y0 = std::min(y0, v[1]);
            y1 = std::max(y1, v[1]);
        }
        return {x0, y0, x1, y1};
    }
    }
    return {0, 0, 0, 0};
}

bool Domain::contains(double x, double y) const {
    switch (kind) {
    case DomainKind::ball: return x * x + y * y < radius * radius;
    case DomainKind::rectangle: return x > 0.0 && x < width && y > 0.0 && y < height;
    case DomainKind::ellipse: {
        const double u = x / a, v = y / b;
        return u * u + v * v < 1.0;
    }
    case DomainKind::polygon: {
        // crossing-number test
        bool inside = false;
        const size_t m = vertices.size();
        for (size_t i = 0, j = m - 1; i < m; j = i++) {
            const double xi = vertices[i][0], yi = vertices[i][1];
            const double xj = vertices[j][0], yj = vertices[j][1];
            if ((yi > y) != (yj > y)) {
                const double xc = xj + (y - yj) / (yi - yj) * (xi - xj);
                if (x < xc)
                    inside = !inside;
            }
        }
        return inside;
    }
    }
    return false;
}

std::string Domain::id() const {
    std::ostringstream s;
    switch (kind) {
    case DomainKind::ball: s << "ball" << n << "(r=" << radius << ")"; break;
    case DomainKind::rectangle: s << "rectangle(" << width << "x" << height << ")"; break;
    case DomainKind::ellipse: s << "ellipse(" << a << "," << b << ")"; break;
    case DomainKind::polygon: s << "polygon(" << vertices.size() << " vertices)"; break;
    }
    return s.str();
}

} // namespace sobex
