#include "nrange/ranges.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "directed_search.hpp"
#include "nrange/error.hpp"
#include "nrange/linalg.hpp"
#include "nrange/rng.hpp"

namespace nrange {

namespace {

void require_square(const Matrix& a, const char* who) {
    if (!a.is_square() || a.rows() == 0) {
        throw Error(ErrorKind::DimensionMismatch, std::string(who) + ": need a nonempty square matrix, got " +
                                                      std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

BoundaryPolyline::Sample trace_angle(const Matrix& a, double theta, double degeneracy) {
    const HermitianEigen he = hermitian_eigs(rotated_hermitian_part(a, theta));
    const std::size_t n = he.values.size();
    const double top = he.values.back();
    std::size_t mult = 1;
    while (mult < n && top - he.values[n - 1 - mult] <= degeneracy) ++mult;

    BoundaryPolyline::Sample s{theta, top, {}, std::nullopt};
    if (mult == 1) {
        s.touch = quadratic_form(a, he.vectors.col(n - 1));
        return s;
    }
    // Flat piece: W(B) for the compression B to the top eigenspace is the
    // segment; its ends extremize Im(e^{i theta} z) along the support line.
    const Matrix e = he.vectors.block(0, n - mult, n, mult);
    const Matrix b = e.adjoint() * (a * e);
    const Complex w = std::polar(1.0, theta);
    Matrix k(mult, mult);
    for (std::size_t i = 0; i < mult; ++i) {
        for (std::size_t j = i; j < mult; ++j) {
            const Complex v = 0.5 * (Complex(0, -1) * w * b(i, j) + Complex(0, 1) * std::conj(w) * std::conj(b(j, i)));
            k(i, j) = v;
            k(j, i) = std::conj(v);
        }
        k(i, i) = k(i, i).real();
    }
    const HermitianEigen ke = hermitian_eigs(k);
    s.touch = quadratic_form(b, ke.vectors.col(mult - 1));
    const Complex other = quadratic_form(b, ke.vectors.col(0));
    if (std::abs(other - s.touch) > 0.0) s.segment_end = other;
    return s;
}

// Distance from the corner where the two support lines meet to the chord
// joining the touch points; zero when the lines are (nearly) parallel.
double bulge(const BoundaryPolyline::Sample& s1, const BoundaryPolyline::Sample& s2, Complex p1, Complex p2) {
    const double c1 = std::cos(s1.angle), n1 = std::sin(s1.angle);
    const double c2 = std::cos(s2.angle), n2 = std::sin(s2.angle);
    // Re(e^{i t} z) = cos t * x - sin t * y.
    const double det = -c1 * n2 + n1 * c2;
    if (std::abs(det) < 1e-15) return 0.0;
    const double x = (-s1.support * n2 + n1 * s2.support) / det;
    const double y = (c1 * s2.support - c2 * s1.support) / det;
    const Complex corner(x, y);
    const Complex d = p2 - p1;
    const double len = std::abs(d);
    if (len == 0.0) return std::abs(corner - p1);
    return std::abs((std::conj(d) * (corner - p1)).imag()) / len;
}

std::vector<std::vector<Complex>> block_vectors_of(const BlockPartition& part, const Matrix& v) {
    std::vector<std::vector<Complex>> fs(part.count());
    for (std::size_t i = 0; i < part.count(); ++i) {
        fs[i].resize(part.size(i));
        for (std::size_t r = 0; r < part.size(i); ++r) fs[i][r] = v(part.offset(i) + r, i);
    }
    return fs;
}

}  // namespace

std::vector<Complex> PointSet::values() const {
    std::vector<Complex> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.value);
    return out;
}

std::vector<Complex> BoundaryPolyline::touch_points() const {
    std::vector<Complex> out;
    out.reserve(2 * samples.size());
    for (const auto& s : samples) {
        out.push_back(s.touch);
        if (s.segment_end) out.push_back(*s.segment_end);
    }
    return out;
}

double BoundaryPolyline::outer_excess(Complex z) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& s : samples) worst = std::max(worst, (std::polar(1.0, s.angle) * z).real() - s.support);
    return worst;
}

Matrix rotated_hermitian_part(const Matrix& a, double theta) {
    require_square(a, "rotated_hermitian_part");
    const std::size_t n = a.rows();
    const Complex w = std::polar(1.0, theta);
    Matrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = (w * a(i, i)).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex v = 0.5 * (w * a(i, j) + std::conj(w * a(j, i)));
            h(i, j) = v;
            h(j, i) = std::conj(v);
        }
    }
    return h;
}

PointSet nr_sample(const Matrix& a, std::size_t count, std::uint64_t seed) {
    require_square(a, "nr_sample");
    if (count < 1) throw Error(ErrorKind::InvalidArgument, "nr_sample needs count >= 1");
    PointSet out;
    out.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng(seed, i);
        const auto x = haar_unit_vector(a.rows(), rng);
        out.points.push_back({quadratic_form(a, x), {i, 0}});
    }
    return out;
}

BoundaryPolyline nr_boundary(const Matrix& a, const BoundaryOptions& options) {
    require_square(a, "nr_boundary");
    if (options.angles < 8) throw Error(ErrorKind::InvalidArgument, "nr_boundary needs at least 8 angles");
    if (options.max_angles < options.angles) {
        throw Error(ErrorKind::InvalidArgument, "max_angles must be >= angles");
    }
    const double norm = operator_norm(a);
    const double scale = std::max(1.0, norm);
    const double degeneracy = options.degeneracy_factor * scale;

    BoundaryPolyline out;
    out.samples.reserve(options.angles);
    for (std::size_t j = 0; j < options.angles; ++j) {
        const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(options.angles);
        out.samples.push_back(trace_angle(a, theta, degeneracy));
    }
    if (!options.refine) return out;

    const double chord_min = options.chord_factor * norm;
    const double bulge_min = options.bulge_factor * scale;
    bool changed = true;
    while (changed && out.samples.size() < options.max_angles) {
        changed = false;
        std::vector<BoundaryPolyline::Sample> next;
        next.reserve(2 * out.samples.size());
        const std::size_t m = out.samples.size();
        for (std::size_t j = 0; j < m; ++j) {
            const auto& s1 = out.samples[j];
            next.push_back(s1);
            const auto& s2 = out.samples[(j + 1) % m];
            const double t2 = j + 1 < m ? s2.angle : s2.angle + kTwoPi;
            if (t2 - s1.angle < 1e-12) continue;
            if (next.size() + (m - j - 1) >= options.max_angles) continue;
            const Complex p1 = s1.segment_end.value_or(s1.touch);
            const Complex p2 = s2.touch;
            if (std::abs(p2 - p1) <= chord_min) continue;
            if (bulge(s1, s2, p1, p2) <= bulge_min) continue;
            double mid = 0.5 * (s1.angle + t2);
            if (mid >= kTwoPi) mid -= kTwoPi;
            next.push_back(trace_angle(a, mid, degeneracy));
            changed = true;
        }
        std::sort(next.begin(), next.end(), [](const auto& x, const auto& y) { return x.angle < y.angle; });
        out.samples = std::move(next);
    }
    return out;
}

void for_each_compression(const Matrix& a, const FamilySpec& family,
                          const std::function<void(const CompressionDraw&)>& visit) {
    require_square(a, "for_each_compression");
    const std::size_t n = a.rows();
    family.validate(n);

    auto emit = [&](std::size_t draw, const Projection& p, const Matrix& m) {
        const std::vector<Complex> eig = general_eigs(m).values;
        visit(CompressionDraw{draw, p, m, eig});
    };

    if (family.kind == FamilyKind::Commuting) {
        std::vector<Projection> ps;
        if (!family.supplied.empty()) {
            validate_commuting(a, family.supplied, family.commuting.commute_tol);
            ps = family.supplied;
        } else {
            ps = commuting_projections(a, family.commuting);
        }
        for (std::size_t i = 0; i < ps.size(); ++i) emit(i, ps[i], compress(a, ps[i]));
        return;
    }

    if (family.kind == FamilyKind::RankK && family.rank == n) {
        const Projection id(Frame::from_orthonormal(Matrix::identity(n)));
        emit(0, id, compress(a, id));
        return;
    }

    const std::size_t budget = family.budget;
    std::size_t haar_count = budget;
    if (family.law == SamplingLaw::Directed) haar_count = 0;
    if (family.law == SamplingLaw::Mixed) haar_count = (budget + 1) / 2;

    detail::SearchSetup setup;
    setup.seed = family.seed;
    setup.first_draw = haar_count;
    setup.evaluations = budget - haar_count;

    if (family.kind == FamilyKind::RankK) {
        for (std::size_t i = 0; i < haar_count; ++i) {
            const Projection p = sample_rank_k_draw(n, family.rank, family.seed, i);
            emit(i, p, compress(a, p));
        }
        setup.structure = detail::Structure::Frame;
        setup.rank = family.rank;
        detail::directed_search(
            a, setup, [&](const Matrix& v) { return v.adjoint() * (a * v); },
            [&](std::size_t draw, const Matrix& v, const Matrix& m, const std::vector<Complex>& eig) {
                const Projection p(Frame::from_orthonormal(v));
                visit(CompressionDraw{draw, p, m, eig});
            });
        return;
    }

    const BlockPartition& part = *family.partition;
    for (std::size_t i = 0; i < haar_count; ++i) {
        Rng rng(family.seed, i);
        const auto fs = sample_block_vectors(part, rng);
        emit(i, block_projection(part, fs), block_matrix(a, part, fs));
    }
    setup.structure = detail::Structure::Block;
    setup.partition = &part;
    detail::directed_search(
        a, setup, [&](const Matrix& v) { return block_matrix(a, part, block_vectors_of(part, v)); },
        [&](std::size_t draw, const Matrix& v, const Matrix& m, const std::vector<Complex>& eig) {
            const Projection p(Frame::from_orthonormal(v));
            visit(CompressionDraw{draw, p, m, eig});
        });
}

PointSet pnr_sample(const Matrix& a, const FamilySpec& family) {
    PointSet out;
    for_each_compression(a, family, [&](const CompressionDraw& d) {
        for (std::size_t j = 0; j < d.eigenvalues.size(); ++j) out.points.push_back({d.eigenvalues[j], {d.draw, j}});
    });
    return out;
}

Matrix block_matrix(const Matrix& a, const BlockPartition& partition, std::span<const std::vector<Complex>> unit_vectors) {
    require_square(a, "block_matrix");
    partition.require_total(a.rows());
    const std::size_t k = partition.count();
    if (unit_vectors.size() != k) {
        throw Error(ErrorKind::DimensionMismatch,
                    "need one unit vector per block (" + std::to_string(k) + "), got " + std::to_string(unit_vectors.size()));
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (unit_vectors[i].size() != partition.size(i)) {
            throw Error(ErrorKind::DimensionMismatch,
                        "block " + std::to_string(i) + " expects length " + std::to_string(partition.size(i)));
        }
        const double nf = norm2(unit_vectors[i]);
        if (!(std::abs(nf - 1.0) <= 1e-10)) {
            throw Error(ErrorKind::NotUnit, "block vector " + std::to_string(i) + " has norm " + std::to_string(nf));
        }
    }
    Matrix m(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& fi = unit_vectors[i];
        for (std::size_t j = 0; j < k; ++j) {
            const auto& fj = unit_vectors[j];
            Complex sum = 0.0;
            for (std::size_t r = 0; r < fi.size(); ++r) {
                Complex row = 0.0;
                for (std::size_t s = 0; s < fj.size(); ++s) row += a(partition.offset(i) + r, partition.offset(j) + s) * fj[s];
                sum += std::conj(fi[r]) * row;
            }
            m(i, j) = sum;
        }
    }
    return m;
}

Matrix qnr_matrix(const Matrix& a, const BlockPartition& partition, std::span<const Complex> f1,
                  std::span<const Complex> f2) {
    if (partition.count() != 2) {
        throw Error(ErrorKind::InvalidArgument,
                    "quadratic numerical range needs 2 blocks, got " + std::to_string(partition.count()));
    }
    const std::vector<std::vector<Complex>> fs{{f1.begin(), f1.end()}, {f2.begin(), f2.end()}};
    return block_matrix(a, partition, fs);
}

PointSet bnr_sample(const Matrix& a, const BlockPartition& partition, std::size_t count, std::uint64_t seed,
                    SamplingLaw law) {
    if (count < 1) throw Error(ErrorKind::InvalidArgument, "bnr_sample needs count >= 1");
    return pnr_sample(a, FamilySpec::block(partition, count, seed, law));
}

}  // namespace nrange
