#pragma once

#include <span>
#include <vector>

#include "nrange/matrix.hpp"

namespace nrange {

/// Convex hull of a finite planar set. Polygon vertices are counterclockwise,
/// starting at the lexicographically smallest (re, im) point, with no three
/// collinear (up to the construction threshold).
struct ConvexPolygon {
    enum class Kind { Point, Segment, Polygon };
    Kind kind = Kind::Point;
    std::vector<Complex> vertices;

    bool degenerate() const noexcept { return kind != Kind::Polygon; }
};

/// Cross product (b - a) x (c - a).
double cross(Complex a, Complex b, Complex c) noexcept;

/// Collinearity tolerance used by convex_hull, as a length: 1e-12 * scale,
/// where scale is the largest coordinate extent of the input. A middle point b
/// of a, b, c is dropped when cross(a, b, c) <= tol * |c - a|, i.e. when it is
/// within tol of the line through a and c; since |c - a| <= 2 scale the cross
/// product cut never exceeds 2e-12 * scale^2.
double collinearity_tolerance(std::span<const Complex> points);

/// Andrew's monotone chain. Throws EmptySet for no points.
ConvexPolygon convex_hull(std::span<const Complex> points);

/// Euclidean distance from z to the segment [a, b].
double segment_distance(Complex z, Complex a, Complex b) noexcept;

/// Distance from z to the hull (0 inside).
double hull_distance(const ConvexPolygon& hull, Complex z);

/// Distance from an interior z to the hull boundary (0 outside or on it; for
/// degenerate hulls always 0).
double depth(const ConvexPolygon& hull, Complex z);

bool hull_contains(const ConvexPolygon& hull, Complex z, double eps);

/// Hausdorff distance between finite sets. Throws EmptySet.
double hausdorff(std::span<const Complex> a, std::span<const Complex> b);

/// Hausdorff distance between the convex regions (attained at vertices).
double hull_hausdorff(const ConvexPolygon& a, const ConvexPolygon& b);

/// Bottleneck distance between equally sized multisets: the smallest t such
/// that a perfect matching pairs every element with one at distance <= t.
/// Throws DimensionMismatch on size mismatch.
double matching_distance(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace nrange
