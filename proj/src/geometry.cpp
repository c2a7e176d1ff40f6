#include "nrange/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nrange/error.hpp"

namespace nrange {

namespace {

bool lex_less(Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

// Kuhn's augmenting-path matching on the bipartite graph of pairs within t.
bool perfect_matching(std::span<const Complex> a, std::span<const Complex> b, double t) {
    const std::size_t n = a.size();
    std::vector<long> owner(n, -1);
    std::vector<char> seen(n);
    auto augment = [&](auto&& self, std::size_t u) -> bool {
        for (std::size_t v = 0; v < n; ++v) {
            if (seen[v] || std::abs(a[u] - b[v]) > t) continue;
            seen[v] = 1;
            if (owner[v] < 0 || self(self, static_cast<std::size_t>(owner[v]))) {
                owner[v] = static_cast<long>(u);
                return true;
            }
        }
        return false;
    };
    for (std::size_t u = 0; u < n; ++u) {
        std::fill(seen.begin(), seen.end(), 0);
        if (!augment(augment, u)) return false;
    }
    return true;
}

}  // namespace

double cross(Complex a, Complex b, Complex c) noexcept {
    const Complex u = b - a;
    const Complex v = c - a;
    return u.real() * v.imag() - u.imag() * v.real();
}

double collinearity_tolerance(std::span<const Complex> points) {
    if (points.empty()) return 0.0;
    double xmin = points[0].real(), xmax = xmin, ymin = points[0].imag(), ymax = ymin;
    for (const auto& p : points) {
        xmin = std::min(xmin, p.real());
        xmax = std::max(xmax, p.real());
        ymin = std::min(ymin, p.imag());
        ymax = std::max(ymax, p.imag());
    }
    const double scale = std::max(xmax - xmin, ymax - ymin);
    return 1e-12 * scale;
}

ConvexPolygon convex_hull(std::span<const Complex> points) {
    if (points.empty()) throw Error(ErrorKind::EmptySet, "convex hull of an empty set");
    std::vector<Complex> p(points.begin(), points.end());
    std::sort(p.begin(), p.end(), lex_less);
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() == 1) return {ConvexPolygon::Kind::Point, p};

    const double tol = collinearity_tolerance(p);
    std::vector<Complex> h(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= tol * std::abs(p[i] - h[k - 2])) --k;
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(h[k - 2], h[k - 1], p[i]) <= tol * std::abs(p[i] - h[k - 2])) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    if (h.size() <= 2) {
        // All points within the threshold of one line: the segment between the
        // extreme points.
        return {ConvexPolygon::Kind::Segment, {p.front(), p.back()}};
    }
    return {ConvexPolygon::Kind::Polygon, std::move(h)};
}

double segment_distance(Complex z, Complex a, Complex b) noexcept {
    const Complex d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(z - a);
    const double t = std::clamp(((z - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(z - (a + t * d));
}

double hull_distance(const ConvexPolygon& hull, Complex z) {
    const auto& v = hull.vertices;
    switch (hull.kind) {
        case ConvexPolygon::Kind::Point:
            return std::abs(z - v[0]);
        case ConvexPolygon::Kind::Segment:
            return segment_distance(z, v[0], v[1]);
        case ConvexPolygon::Kind::Polygon:
            break;
    }
    const std::size_t m = v.size();
    bool inside = true;
    for (std::size_t i = 0; i < m && inside; ++i) inside = cross(v[i], v[(i + 1) % m], z) >= 0.0;
    if (inside) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) best = std::min(best, segment_distance(z, v[i], v[(i + 1) % m]));
    return best;
}

double depth(const ConvexPolygon& hull, Complex z) {
    if (hull.kind != ConvexPolygon::Kind::Polygon || hull_distance(hull, z) > 0.0) return 0.0;
    const auto& v = hull.vertices;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) best = std::min(best, segment_distance(z, v[i], v[(i + 1) % v.size()]));
    return best;
}

bool hull_contains(const ConvexPolygon& hull, Complex z, double eps) { return hull_distance(hull, z) <= eps; }

double hausdorff(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.empty() || b.empty()) throw Error(ErrorKind::EmptySet, "Hausdorff distance needs nonempty sets");
    auto directed = [](std::span<const Complex> x, std::span<const Complex> y) {
        double worst = 0.0;
        for (const auto& p : x) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : y) best = std::min(best, std::abs(p - q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

double hull_hausdorff(const ConvexPolygon& a, const ConvexPolygon& b) {
    double worst = 0.0;
    for (const auto& v : a.vertices) worst = std::max(worst, hull_distance(b, v));
    for (const auto& v : b.vertices) worst = std::max(worst, hull_distance(a, v));
    return worst;
}

double matching_distance(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorKind::DimensionMismatch, "multisets of sizes " + std::to_string(a.size()) + " and " +
                                                      std::to_string(b.size()) + " cannot be matched");
    }
    if (a.empty()) return 0.0;
    std::vector<double> cand;
    cand.reserve(a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b) cand.push_back(std::abs(x - y));
    std::sort(cand.begin(), cand.end());
    std::size_t lo = 0, hi = cand.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (perfect_matching(a, b, cand[mid])) hi = mid;
        else lo = mid + 1;
    }
    return cand[lo];
}

}  // namespace nrange
