#include "nrange/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "nrange/error.hpp"
#include "nrange/geometry.hpp"
#include "nrange/linalg.hpp"
#include "nrange/ranges.hpp"

namespace nrange {

namespace {

double scale_of(const Matrix& a) { return std::max(1.0, operator_norm(a)); }

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

const char* law_name(SamplingLaw law) {
    switch (law) {
        case SamplingLaw::Haar: return "haar";
        case SamplingLaw::Directed: return "directed";
        case SamplingLaw::Mixed: return "mixed";
    }
    return "?";
}

double max_outer_excess(const BoundaryPolyline& b, std::span<const Complex> points) {
    double worst = 0.0;
    for (const auto& z : points) worst = std::max(worst, b.outer_excess(z));
    return worst;
}

CheckReport start(std::string name, const CheckOptions& o) {
    CheckReport r;
    r.name = std::move(name);
    r.seed = o.seed;
    return r;
}

// Shared body of the P1 and Pk (k < n) checks: sampled compression spectra
// must be Rayleigh quotients, lie inside the traced range, and fill its hull.
std::vector<Complex> sampled_family(CheckReport& r, const Matrix& a, std::size_t k, const CheckOptions& o) {
    const double s = scale_of(a);
    std::vector<Complex> points;
    double rayleigh = 0.0;
    for_each_compression(a, FamilySpec::rank_k(k, o.samples, o.seed, o.law), [&](const CompressionDraw& d) {
        const EigenDecomposition e = general_eigs(d.compression, {.vectors = true});
        for (std::size_t j = 0; j < e.values.size(); ++j) {
            const auto y = matvec(d.projection.basis(), e.vectors->col(j));
            rayleigh = std::max(rayleigh, std::abs(quadratic_form(a, y) - d.eigenvalues[j]));
            points.push_back(d.eigenvalues[j]);
        }
    });
    const BoundaryPolyline boundary = nr_boundary(a, {.angles = o.angles});
    const std::vector<Complex> touch = boundary.touch_points();
    r.add("rayleigh", rayleigh, o.rayleigh_tol);
    r.add("containment", max_outer_excess(boundary, points), o.containment * s);
    r.add("closeness", hull_hausdorff(convex_hull(points), convex_hull(touch)), o.closeness * s);
    r.budgets["samples"] = o.samples;
    r.budgets["angles"] = o.angles;
    r.budgets["boundary_angles"] = boundary.samples.size();
    return points;
}

bool is_hermitian(const Matrix& a) { return max_abs_diff(a, a.adjoint()) <= 1e-12 * std::max(1.0, a.frobenius_norm()); }

}  // namespace

void CheckReport::add(std::string part, double dev, double tol) {
    auto ratio = [](double d, double t) {
        if (d <= t) return t > 0.0 ? d / t : 0.0;
        return t > 0.0 ? d / t : std::numeric_limits<double>::infinity();
    };
    const bool first = parts.empty();
    parts.push_back({std::move(part), dev, tol});
    if (first || ratio(dev, tol) > ratio(deviation, tolerance)) {
        deviation = dev;
        tolerance = tol;
    }
    pass = pass && dev <= tol;
}

CheckReport check_spectral_inclusion(const Matrix& a, const CheckOptions& o) {
    CheckReport r = start("spectral_inclusion", o);
    const std::vector<Complex> eig = general_eigs(a).values;
    const BoundaryPolyline boundary = nr_boundary(a, {.angles = o.angles});
    r.add("eigenvalues_in_range", max_outer_excess(boundary, eig), o.containment * scale_of(a));
    r.budgets["angles"] = o.angles;
    r.budgets["boundary_angles"] = boundary.samples.size();
    r.detail = std::to_string(eig.size()) + " eigenvalues against the support-line polygon";
    return r;
}

CheckReport check_p1_equals_nr(const Matrix& a, const CheckOptions& o) {
    if (o.samples < 1000) throw Error(ErrorKind::InvalidArgument, "p1_equals_nr needs at least 1000 samples");
    CheckReport r = start("p1_equals_nr", o);
    const std::vector<Complex> points = sampled_family(r, a, 1, o);
    // The Haar part of the family stream is the nr_sample stream.
    std::size_t haar = 0;
    if (o.law == SamplingLaw::Haar) haar = o.samples;
    if (o.law == SamplingLaw::Mixed) haar = (o.samples + 1) / 2;
    if (haar > 0) {
        const PointSet nr = nr_sample(a, haar, o.seed);
        double worst = 0.0;
        for (std::size_t i = 0; i < haar; ++i) worst = std::max(worst, std::abs(nr.points[i].value - points[i]));
        r.add("nr_law", worst, o.rayleigh_tol);
    }
    r.detail = "law=" + std::string(law_name(o.law)) + " points=" + std::to_string(points.size());
    return r;
}

CheckReport check_pk_lemma(const Matrix& a, std::size_t k, const CheckOptions& o) {
    const std::size_t n = a.rows();
    if (!a.is_square() || n == 0) throw Error(ErrorKind::DimensionMismatch, "pk_lemma needs a square matrix");
    if (k < 1 || k > n) throw Error(ErrorKind::InvalidArgument, "pk_lemma needs 1 <= k <= n");
    CheckReport r = start("pk_lemma", o);
    if (k < n) {
        const std::vector<Complex> points = sampled_family(r, a, k, o);
        r.detail = "k=" + std::to_string(k) + " < n: law=" + law_name(o.law) + " points=" + std::to_string(points.size());
        return r;
    }
    const std::vector<Complex> sigma = general_eigs(a).values;
    std::vector<Complex> identity;
    for_each_compression(a, FamilySpec::rank_k(n, 1, o.seed), [&](const CompressionDraw& d) {
        identity.insert(identity.end(), d.eigenvalues.begin(), d.eigenvalues.end());
    });
    r.add("identity", matching_distance(identity, sigma), o.exact_tol);
    // Other orthonormal bases of ran(Id) = C^n must give the same spectrum.
    constexpr std::size_t kFrames = 32;
    double worst = 0.0;
    for (std::size_t i = 0; i < kFrames; ++i) {
        Rng rng(o.seed, i);
        const Projection p(haar_frame(n, n, rng));
        worst = std::max(worst, matching_distance(general_eigs(compress(a, p)).values, sigma));
    }
    r.add("unitary_frames", worst, o.exact_tol);
    r.budgets["frames"] = kFrames;
    r.detail = "k=n: family is {Id}";
    return r;
}

CheckReport check_commuting_subset(const Matrix& a, const CheckOptions& o, std::span<const Projection> supplied) {
    CheckReport r = start("commuting_subset", o);
    const double s = scale_of(a);
    FamilySpec fam = FamilySpec::commuting_family();
    fam.commuting.seed = o.seed;
    fam.supplied.assign(supplied.begin(), supplied.end());
    std::vector<Complex> points;
    std::size_t count = 0;
    for_each_compression(a, fam, [&](const CompressionDraw& d) {
        ++count;
        points.insert(points.end(), d.eigenvalues.begin(), d.eigenvalues.end());
    });
    const std::vector<Complex> sigma = general_eigs(a).values;
    auto nearest = [](Complex z, std::span<const Complex> set) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& w : set) best = std::min(best, std::abs(z - w));
        return best;
    };
    double subset = 0.0;
    for (const auto& z : points) subset = std::max(subset, nearest(z, sigma));
    r.add("subset_of_spectrum", subset, o.commuting * s);
    const bool hermitian = is_hermitian(a);
    if (hermitian && supplied.empty()) {
        double attained = 0.0;
        for (const auto& l : sigma) attained = std::max(attained, nearest(l, points));
        r.add("spectrum_attained", attained, o.commuting * s);
    }
    r.budgets["projections"] = count;
    r.detail = std::string(supplied.empty() ? "spectral projections" : "supplied projections") +
               (hermitian ? ", hermitian" : "");
    return r;
}

CheckReport check_qnr_equivalence(const Matrix& a, const BlockPartition& partition, const CheckOptions& o) {
    if (!a.is_square()) throw Error(ErrorKind::DimensionMismatch, "qnr_equivalence needs a square matrix");
    partition.require_total(a.rows());
    if (partition.count() < 2) throw Error(ErrorKind::InvalidArgument, "qnr_equivalence needs at least 2 blocks");
    CheckReport r = start("qnr_equivalence", o);
    const double s = scale_of(a);
    double transpose = 0.0;
    double spectra = 0.0;
    for (std::size_t i = 0; i < o.samples; ++i) {
        Rng rng(o.seed, i);
        const auto fs = sample_block_vectors(partition, rng);
        const Matrix q = partition.count() == 2 ? qnr_matrix(a, partition, fs[0], fs[1]) : block_matrix(a, partition, fs);
        const Matrix c = compression_coefficients(a, block_projection(partition, fs));
        transpose = std::max(transpose, max_abs_diff(c, q.transpose()));
        spectra = std::max(spectra, matching_distance(general_eigs(c).values, general_eigs(q).values));
    }
    r.add("transpose", transpose, o.qnr * s);
    r.add("spectra", spectra, o.qnr * s);
    r.budgets["draws"] = o.samples;
    r.detail = std::to_string(partition.count()) + " blocks";
    return r;
}

CheckReport check_inclusion_chain(const Matrix& a, const BlockPartition& coarse, const BlockPartition& refined,
                                  const CheckOptions& o) {
    if (!a.is_square()) throw Error(ErrorKind::DimensionMismatch, "inclusion_chain needs a square matrix");
    coarse.require_total(a.rows());
    refined.require_total(a.rows());
    if (!refined.refines(coarse)) throw Error(ErrorKind::NotARefinement, "refined partition does not refine coarse");
    CheckReport r = start("inclusion_chain", o);
    const double s = scale_of(a);
    const std::vector<Complex> c = pnr_sample(a, FamilySpec::block(coarse, o.samples, o.seed, o.law)).values();
    const std::vector<Complex> f = pnr_sample(a, FamilySpec::block(refined, o.samples, o.seed, o.law)).values();
    const ConvexPolygon coarse_hull = convex_hull(c);
    double refined_in_coarse = 0.0;
    for (const auto& z : f) refined_in_coarse = std::max(refined_in_coarse, hull_distance(coarse_hull, z));
    const BoundaryPolyline boundary = nr_boundary(a, {.angles = o.angles});
    r.add("refined_in_coarse", refined_in_coarse, o.closeness * s);
    r.add("coarse_in_range", max_outer_excess(boundary, c), o.containment * s);
    r.add("refined_in_range", max_outer_excess(boundary, f), o.containment * s);
    r.budgets["draws_per_level"] = o.samples;
    r.budgets["angles"] = o.angles;
    r.detail = std::to_string(refined.count()) + " -> " + std::to_string(coarse.count()) + " blocks, law=" +
               law_name(o.law);
    return r;
}

CheckReport check_two_dim_ellipse(const Matrix& a, const CheckOptions& o) {
    if (a.rows() != 2 || a.cols() != 2) throw Error(ErrorKind::DimensionMismatch, "two_dim_ellipse needs a 2x2 matrix");
    CheckReport r = start("two_dim_ellipse", o);
    const double norm = operator_norm(a);
    const std::vector<Complex> foci = general_eigs(a).values;
    const BoundaryPolyline boundary = nr_boundary(a, {.angles = o.angles});
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& z : boundary.touch_points()) {
        const double sum = std::abs(z - foci[0]) + std::abs(z - foci[1]);
        lo = std::min(lo, sum);
        hi = std::max(hi, sum);
    }
    // Minor axis = smallest width of the range over the traced directions.
    double width = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < o.angles; ++j) {
        const double theta = std::numbers::pi * static_cast<double>(j) / static_cast<double>(o.angles);
        const auto ev = hermitian_eigs(rotated_hermitian_part(a, theta)).values;
        width = std::min(width, ev.back() - ev.front());
    }
    r.add("focal_sum", hi - lo, o.ellipse * norm);
    const PointSet cloud = nr_sample(a, o.samples, o.seed);
    r.add("containment", max_outer_excess(boundary, cloud.values()), o.containment * scale_of(a));
    r.budgets["samples"] = o.samples;
    r.budgets["angles"] = o.angles;
    const double semi_major = 0.5 * hi;
    const double semi_minor = 0.5 * std::max(0.0, width);
    r.detail = "foci " + num(foci[0].real()) + (foci[0].imag() < 0 ? "" : "+") + num(foci[0].imag()) + "i, " +
               num(foci[1].real()) + (foci[1].imag() < 0 ? "" : "+") + num(foci[1].imag()) + "i; semi-axes " +
               num(semi_major) + ", " + num(semi_minor);
    return r;
}

CheckReport check_convexity(const Matrix& a, const CheckOptions& o) {
    if (o.samples < 10000) throw Error(ErrorKind::InvalidArgument, "convexity needs at least 10000 samples");
    CheckReport r = start("convexity", o);
    const double norm = operator_norm(a);
    const BoundaryPolyline boundary = nr_boundary(a, {.angles = o.angles});
    const ConvexPolygon hull = convex_hull(boundary.touch_points());
    const double margin = o.margin * norm;
    const std::size_t g = std::max<std::size_t>(o.grid, 1);

    std::vector<Complex> grid;
    if (hull.kind == ConvexPolygon::Kind::Polygon) {
        double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
        for (const auto& v : hull.vertices) {
            xmin = std::min(xmin, v.real());
            xmax = std::max(xmax, v.real());
            ymin = std::min(ymin, v.imag());
            ymax = std::max(ymax, v.imag());
        }
        for (std::size_t i = 0; i < g; ++i)
            for (std::size_t j = 0; j < g; ++j) {
                const Complex z(xmin + (i + 0.5) / g * (xmax - xmin), ymin + (j + 0.5) / g * (ymax - ymin));
                if (depth(hull, z) >= margin) grid.push_back(z);
            }
    } else if (hull.kind == ConvexPolygon::Kind::Segment) {
        const Complex p = hull.vertices[0], q = hull.vertices[1];
        for (std::size_t i = 0; i < g; ++i) {
            const Complex z = p + ((i + 0.5) / g) * (q - p);
            if (std::min(std::abs(z - p), std::abs(z - q)) >= margin) grid.push_back(z);
        }
    }

    double worst = 0.0;
    if (!grid.empty()) {
        const std::vector<Complex> cloud = nr_sample(a, o.samples, o.seed).values();
        for (const auto& z : grid) {
            double best = INFINITY;
            for (const auto& w : cloud) best = std::min(best, std::norm(z - w));
            worst = std::max(worst, std::sqrt(best));
        }
    }
    r.add("fill", worst, o.fill * norm);
    r.budgets["samples"] = o.samples;
    r.budgets["grid_points"] = grid.size();
    r.budgets["angles"] = o.angles;
    r.detail = grid.empty() ? "degenerate range, no interior grid points" :
                              std::to_string(grid.size()) + " grid points at margin " + num(margin);
    return r;
}

}  // namespace nrange
