#include "nrange/projections.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace nrange {

Matrix Projection::as_operator() const { return basis() * basis().adjoint(); }

BlockPartition::BlockPartition(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw Error(ErrorKind::InvalidArgument, "partition needs at least one block");
    offsets_.reserve(sizes_.size() + 1);
    offsets_.push_back(0);
    for (std::size_t s : sizes_) {
        if (s == 0) throw Error(ErrorKind::InvalidArgument, "partition blocks must be positive");
        offsets_.push_back(offsets_.back() + s);
    }
}

void BlockPartition::require_total(std::size_t n) const {
    if (total() != n) {
        throw Error(ErrorKind::DimensionMismatch,
                    "partition sums to " + std::to_string(total()) + ", matrix dimension is " + std::to_string(n));
    }
}

bool BlockPartition::refines(const BlockPartition& coarse) const {
    if (coarse.total() != total()) return false;
    // Every coarse boundary must also be a boundary here.
    for (std::size_t off : coarse.offsets_) {
        if (!std::binary_search(offsets_.begin(), offsets_.end(), off)) return false;
    }
    return true;
}

FamilySpec FamilySpec::rank_k(std::size_t k, std::size_t budget, std::uint64_t seed, SamplingLaw law) {
    FamilySpec f;
    f.kind = FamilyKind::RankK;
    f.rank = k;
    f.budget = budget;
    f.seed = seed;
    f.law = law;
    return f;
}

FamilySpec FamilySpec::block(BlockPartition partition, std::size_t budget, std::uint64_t seed, SamplingLaw law) {
    FamilySpec f;
    f.kind = FamilyKind::Block;
    f.partition = std::move(partition);
    f.budget = budget;
    f.seed = seed;
    f.law = law;
    return f;
}

FamilySpec FamilySpec::commuting_family(CommutingOptions options) {
    FamilySpec f;
    f.kind = FamilyKind::Commuting;
    f.budget = options.budget;
    f.seed = options.seed;
    f.commuting = options;
    return f;
}

void FamilySpec::validate(std::size_t n) const {
    switch (kind) {
        case FamilyKind::RankK:
            if (rank < 1 || rank > n) {
                throw Error(ErrorKind::InvalidArgument,
                            "rank " + std::to_string(rank) + " outside [1, " + std::to_string(n) + "]");
            }
            if (budget < 1) throw Error(ErrorKind::InvalidArgument, "sampling budget must be >= 1");
            break;
        case FamilyKind::Block:
            if (!partition) throw Error(ErrorKind::InvalidArgument, "block family needs a partition");
            partition->require_total(n);
            if (budget < 1) throw Error(ErrorKind::InvalidArgument, "sampling budget must be >= 1");
            break;
        case FamilyKind::Commuting:
            for (const auto& p : supplied) {
                if (p.dim() != n) throw Error(ErrorKind::DimensionMismatch, "supplied projection dimension");
            }
            break;
    }
}

Projection projection_from_span(const Matrix& vectors, double tol) { return Projection(qr_orthonormalize(vectors, tol)); }

Matrix compress(const Matrix& a, const Projection& p) {
    if (!a.is_square() || a.rows() != p.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "compress: matrix is " + std::to_string(a.rows()) + "x" +
                                                      std::to_string(a.cols()) + ", projection acts on C^" +
                                                      std::to_string(p.dim()));
    }
    return p.basis().adjoint() * (a * p.basis());
}

Matrix compression_coefficients(const Matrix& a, const Projection& p) { return compress(a, p).transpose(); }

Projection sample_rank_k_draw(std::size_t n, std::size_t k, std::uint64_t seed, std::size_t draw) {
    Rng rng(seed, draw);
    return Projection(haar_frame(n, k, rng));
}

std::vector<Projection> sample_rank_k(std::size_t n, std::size_t k, std::size_t count, std::uint64_t seed) {
    if (k < 1 || k > n) throw Error(ErrorKind::InvalidArgument, "sample_rank_k needs 1 <= k <= n");
    if (count < 1) throw Error(ErrorKind::InvalidArgument, "sample_rank_k needs count >= 1");
    std::vector<Projection> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(sample_rank_k_draw(n, k, seed, i));
    return out;
}

Projection block_projection(const BlockPartition& partition, std::span<const std::vector<Complex>> unit_vectors) {
    if (unit_vectors.size() != partition.count()) {
        throw Error(ErrorKind::DimensionMismatch, "need one unit vector per block (" +
                                                      std::to_string(partition.count()) + "), got " +
                                                      std::to_string(unit_vectors.size()));
    }
    const std::size_t n = partition.total();
    Matrix v(n, partition.count());
    for (std::size_t i = 0; i < partition.count(); ++i) {
        const auto& f = unit_vectors[i];
        if (f.size() != partition.size(i)) {
            throw Error(ErrorKind::DimensionMismatch, "block " + std::to_string(i) + " expects length " +
                                                          std::to_string(partition.size(i)));
        }
        const double nf = norm2(f);
        if (!(std::abs(nf - 1.0) <= 1e-10)) {
            throw Error(ErrorKind::NotUnit, "block vector " + std::to_string(i) + " has norm " + std::to_string(nf));
        }
        // Vectors normalized in double precision are copied bitwise; only
        // visibly off-unit inputs are rescaled to keep the frame invariant.
        const double scale = std::abs(nf - 1.0) <= 1e-13 ? 1.0 : nf;
        for (std::size_t r = 0; r < f.size(); ++r) v(partition.offset(i) + r, i) = scale == 1.0 ? f[r] : f[r] / scale;
    }
    return Projection(Frame::from_orthonormal(std::move(v)));
}

std::vector<std::vector<Complex>> sample_block_vectors(const BlockPartition& partition, Rng& rng) {
    std::vector<std::vector<Complex>> out;
    out.reserve(partition.count());
    for (std::size_t i = 0; i < partition.count(); ++i) out.push_back(haar_unit_vector(partition.size(i), rng));
    return out;
}

bool is_normal(const Matrix& a, double tol) {
    if (!a.is_square()) return false;
    const Matrix ah = a.adjoint();
    const double fro = a.frobenius_norm();
    return (ah * a - a * ah).frobenius_norm() <= tol * fro * fro;
}

double commutator_norm(const Matrix& a, const Projection& p) {
    const Matrix& v = p.basis();
    const Matrix pa = v * (v.adjoint() * a);
    const Matrix ap = (a * v) * v.adjoint();
    return (pa - ap).frobenius_norm();
}

namespace {

struct Eigenbasis {
    std::vector<Complex> values;
    Matrix vectors;  // orthonormal columns
};

Eigenbasis orthonormal_eigenbasis(const Matrix& a) {
    const std::size_t n = a.rows();
    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) asym = std::max(asym, std::abs(a(i, j) - std::conj(a(j, i))));
    if (asym <= 1e-12 * a.frobenius_norm()) {
        HermitianEigen e = hermitian_eigs(a);
        return {std::vector<Complex>(e.values.begin(), e.values.end()), std::move(e.vectors)};
    }
    // The Schur form of a normal matrix is diagonal, so the Schur vectors are
    // an orthonormal eigenbasis.
    SchurForm s = schur(a);
    std::vector<Complex> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = s.t(i, i);
    return {std::move(values), std::move(s.z)};
}

// Single-linkage clusters of eigenvalues, each a list of column indices.
// Clusters are ordered by their smallest eigenvalue in (re, im) order.
std::vector<std::vector<std::size_t>> cluster_eigenvalues(const std::vector<Complex>& values, double threshold) {
    const std::size_t n = values.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(values[i] - values[j]) <= threshold) parent[find(i)] = find(j);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return complex_less(values[x], values[y]); });
    std::vector<std::vector<std::size_t>> clusters;
    std::vector<long> slot(n, -1);
    for (std::size_t idx : order) {
        const std::size_t root = find(idx);
        if (slot[root] < 0) {
            slot[root] = static_cast<long>(clusters.size());
            clusters.emplace_back();
        }
        clusters[static_cast<std::size_t>(slot[root])].push_back(idx);
    }
    return clusters;
}

Projection subset_projection(const Eigenbasis& basis, const std::vector<std::vector<std::size_t>>& clusters,
                             const std::vector<bool>& chosen) {
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < clusters.size(); ++c)
        if (chosen[c]) cols.insert(cols.end(), clusters[c].begin(), clusters[c].end());
    std::sort(cols.begin(), cols.end());
    const std::size_t n = basis.vectors.rows();
    Matrix v(n, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) v(i, j) = basis.vectors(i, cols[j]);
    return Projection(Frame::from_orthonormal(std::move(v)));
}

}  // namespace

std::vector<Projection> commuting_projections(const Matrix& a, const CommutingOptions& options) {
    if (!a.is_square() || a.rows() == 0) throw Error(ErrorKind::DimensionMismatch, "commuting_projections needs a square matrix");
    if (!is_normal(a, options.normal_tol)) {
        throw Error(ErrorKind::NotNormal, "automatic commuting projections need a normal matrix");
    }
    const Eigenbasis basis = orthonormal_eigenbasis(a);
    const double norm = operator_norm(a);
    const auto clusters = cluster_eigenvalues(basis.values, options.cluster_tol * norm);
    const std::size_t m = clusters.size();

    std::vector<Projection> out;
    if (m == 1) {
        out.push_back(subset_projection(basis, clusters, {true}));
    } else if (m <= options.exhaustive_limit) {
        // Singletons first (in cluster order), then the remaining proper subsets by mask.
        std::vector<bool> chosen(m);
        for (std::size_t c = 0; c < m; ++c) {
            std::fill(chosen.begin(), chosen.end(), false);
            chosen[c] = true;
            out.push_back(subset_projection(basis, clusters, chosen));
        }
        const std::uint64_t full = (std::uint64_t{1} << m) - 1;
        for (std::uint64_t mask = 1; mask < full; ++mask) {
            if ((mask & (mask - 1)) == 0) continue;  // singleton, already emitted
            for (std::size_t c = 0; c < m; ++c) chosen[c] = (mask >> c) & 1U;
            out.push_back(subset_projection(basis, clusters, chosen));
        }
    } else {
        std::vector<bool> chosen(m);
        for (std::size_t c = 0; c < m; ++c) {
            std::fill(chosen.begin(), chosen.end(), false);
            chosen[c] = true;
            out.push_back(subset_projection(basis, clusters, chosen));
        }
        for (std::size_t draw = 0; draw < options.budget; ++draw) {
            Rng rng(options.seed, draw);
            std::size_t picked = 0;
            for (int attempt = 0; attempt < 64 && (picked == 0 || picked == m); ++attempt) {
                picked = 0;
                for (std::size_t c = 0; c < m; ++c) {
                    chosen[c] = (rng.next_u64() >> 63) != 0;
                    picked += chosen[c];
                }
            }
            if (picked == 0 || picked == m) continue;
            out.push_back(subset_projection(basis, clusters, chosen));
        }
    }
    validate_commuting(a, out, options.commute_tol);
    return out;
}

void validate_commuting(const Matrix& a, std::span<const Projection> projections, double tol) {
    const double bound = tol * a.frobenius_norm();
    for (std::size_t i = 0; i < projections.size(); ++i) {
        if (projections[i].dim() != a.rows()) {
            throw Error(ErrorKind::DimensionMismatch, "projection " + std::to_string(i) + " has wrong dimension");
        }
        const double c = commutator_norm(a, projections[i]);
        if (c > bound) {
            throw Error(ErrorKind::ValidationFailed, "projection " + std::to_string(i) +
                                                         " does not commute: ||PA - AP||_F = " + std::to_string(c));
        }
    }
}

}  // namespace nrange
