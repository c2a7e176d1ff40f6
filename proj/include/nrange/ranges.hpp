#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nrange/matrix.hpp"
#include "nrange/projections.hpp"

namespace nrange {

/// Where a point came from: the draw (sample index, projection index or traced
/// angle index) and the position inside that draw's spectrum.
struct Provenance {
    std::size_t draw = 0;
    std::size_t index = 0;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct RangePoint {
    Complex value;
    Provenance source;
};

struct PointSet {
    std::vector<RangePoint> points;

    std::size_t size() const noexcept { return points.size(); }
    bool empty() const noexcept { return points.empty(); }
    std::vector<Complex> values() const;
};

/// Support-function trace of the numerical range.
///
/// For each angle theta the rotated Hermitian part
/// H(theta) = (e^{i theta} A + e^{-i theta} A*) / 2 gives the support value
/// lambda_max(theta) = max Re(e^{i theta} z) over W(A), attained at the touch
/// point <A x, x> of a top eigenvector x. When lambda_max is degenerate the
/// support line meets W(A) in a segment and both of its ends are stored.
struct BoundaryPolyline {
    struct Sample {
        double angle;
        double support;
        Complex touch;
        std::optional<Complex> segment_end;
    };
    std::vector<Sample> samples;  // strictly increasing angles in [0, 2 pi)

    /// All touch points in traversal order (segment ends included).
    std::vector<Complex> touch_points() const;

    /// max over traced angles of Re(e^{i theta} z) - support(theta). Values
    /// <= 0 mean z lies in the outer polygon cut out by the support lines,
    /// which contains W(A) exactly.
    double outer_excess(Complex z) const;
};

struct BoundaryOptions {
    std::size_t angles = 720;
    bool refine = true;
    std::size_t max_angles = 4096;
    double chord_factor = 1e-2;      // bisect when adjacent touch points are > factor * ||A|| apart
    double bulge_factor = 1e-9;      // ... and the support-line corner sits > factor * max(1, ||A||) off the chord
    double degeneracy_factor = 1e-10; // top-eigenvalue gap below factor * ||A|| marks a flat segment
};

/// e^{i theta} A + e^{-i theta} A* over 2, exactly Hermitian by construction.
Matrix rotated_hermitian_part(const Matrix& a, double theta);

/// <A x_i, x_i> for `count` Haar unit vectors; draw i uses Rng(seed, i).
PointSet nr_sample(const Matrix& a, std::size_t count, std::uint64_t seed);

BoundaryPolyline nr_boundary(const Matrix& a, const BoundaryOptions& options = {});

/// One evaluated member of a projection family.
struct CompressionDraw {
    std::size_t draw;
    const Projection& projection;
    const Matrix& compression;               // V* A V
    const std::vector<Complex>& eigenvalues; // sorted (re, im)
};

/// Enumerates (Commuting), or samples per family.law (RankK, Block), the
/// family's members and hands each compression to the visitor in draw order.
/// RankK with k = n is the single projection Id.
void for_each_compression(const Matrix& a, const FamilySpec& family,
                          const std::function<void(const CompressionDraw&)>& visit);

/// Union of the compression spectra over the (sampled) family.
PointSet pnr_sample(const Matrix& a, const FamilySpec& family);

/// k x k matrix with entries <A_ij f_j, f_i> for one unit vector per block.
Matrix block_matrix(const Matrix& a, const BlockPartition& partition, std::span<const std::vector<Complex>> unit_vectors);

/// The 2 x 2 matrix [[<A f1,f1>, <B f2,f1>], [<C f1,f2>, <D f2,f2>]] of a
/// 2-block operator [[A, B], [C, D]].
Matrix qnr_matrix(const Matrix& a, const BlockPartition& partition, std::span<const Complex> f1,
                  std::span<const Complex> f2);

/// Block numerical range sample: eigenvalues of block_matrix for per-block
/// unit vectors. With the Haar law draw i uses Rng(seed, i) exactly as the
/// Block family of pnr_sample does.
PointSet bnr_sample(const Matrix& a, const BlockPartition& partition, std::size_t count, std::uint64_t seed,
                    SamplingLaw law = SamplingLaw::Haar);

}  // namespace nrange
