#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nrange/linalg.hpp"
#include "nrange/matrix.hpp"

namespace nrange {

/// Orthogonal projection P = V V*, stored only through its frame V. The n x n
/// idempotent is never materialized except on request (as_operator), so range
/// computations work with k x k compressions.
class Projection {
public:
    explicit Projection(Frame frame) : frame_(std::move(frame)) {}

    const Frame& frame() const noexcept { return frame_; }
    const Matrix& basis() const noexcept { return frame_.basis(); }
    std::size_t dim() const noexcept { return frame_.dim(); }
    std::size_t rank() const noexcept { return frame_.rank(); }

    /// V V* as an n x n matrix.
    Matrix as_operator() const;

private:
    Frame frame_;
};

/// Ordered block sizes (n_1, ..., n_k) describing C^n = C^{n_1} (+) ... (+) C^{n_k}.
class BlockPartition {
public:
    explicit BlockPartition(std::vector<std::size_t> sizes);

    static BlockPartition single(std::size_t n) { return BlockPartition({n}); }
    static BlockPartition ones(std::size_t n) { return BlockPartition(std::vector<std::size_t>(n, 1)); }

    std::size_t count() const noexcept { return sizes_.size(); }
    std::size_t total() const noexcept { return offsets_.back(); }
    std::size_t size(std::size_t i) const { return sizes_.at(i); }
    std::size_t offset(std::size_t i) const { return offsets_.at(i); }
    const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }

    /// Throws DimensionMismatch unless the sizes sum to n.
    void require_total(std::size_t n) const;

    /// True when every block of `coarse` is a concatenation of consecutive
    /// blocks of this partition.
    bool refines(const BlockPartition& coarse) const;

    friend bool operator==(const BlockPartition& a, const BlockPartition& b) { return a.sizes_ == b.sizes_; }

private:
    std::vector<std::size_t> sizes_;
    std::vector<std::size_t> offsets_;
};

enum class FamilyKind { RankK, Block, Commuting };

/// How uncountable families are explored.
///  Haar     - independent Haar draws (frames or per-block unit vectors).
///  Directed - projected gradient ascent of Re(e^{i theta} lambda) over the
///             family's parameters for stratified directions theta; every
///             evaluated member is emitted.
///  Mixed    - first half of the budget Haar, second half Directed.
enum class SamplingLaw { Haar, Directed, Mixed };

struct CommutingOptions {
    double normal_tol = 1e-10;    // ||A*A - AA*||_F <= tol ||A||_F^2
    double commute_tol = 1e-9;    // ||PA - AP||_F <= tol ||A||_F
    double cluster_tol = 1e-8;    // eigenvalues closer than tol ||A|| share a projection
    std::size_t exhaustive_limit = 12;  // enumerate all cluster subsets up to this many clusters
    std::size_t budget = 256;     // random subsets beyond the limit
    std::uint64_t seed = 0;
};

struct FamilySpec {
    FamilyKind kind = FamilyKind::RankK;
    std::size_t rank = 1;
    std::optional<BlockPartition> partition;
    std::size_t budget = 10000;
    std::uint64_t seed = 0;
    SamplingLaw law = SamplingLaw::Haar;
    CommutingOptions commuting{};
    std::vector<Projection> supplied;  // Commuting only: validated instead of auto-generated

    static FamilySpec rank_k(std::size_t k, std::size_t budget, std::uint64_t seed,
                             SamplingLaw law = SamplingLaw::Haar);
    static FamilySpec block(BlockPartition partition, std::size_t budget, std::uint64_t seed,
                            SamplingLaw law = SamplingLaw::Haar);
    static FamilySpec commuting_family(CommutingOptions options = {});

    /// Throws InvalidArgument / DimensionMismatch when unusable for dimension n.
    void validate(std::size_t n) const;
};

/// Projection onto span(vectors). Throws RankDeficient.
Projection projection_from_span(const Matrix& vectors, double tol = 1e-10);

/// V* A V: the compression A_P in the frame basis of ran(P).
Matrix compress(const Matrix& a, const Projection& p);

/// Row-convention representation of A_P: entry (i, j) = <A F_i, F_j>, i.e. row
/// i lists the coordinates of A F_i. Equals compress(a, p) transposed.
Matrix compression_coefficients(const Matrix& a, const Projection& p);

/// Draw i of a Haar rank-k stream: uses Rng(seed, i), so any subset of draws
/// can be regenerated independently and in any order.
Projection sample_rank_k_draw(std::size_t n, std::size_t k, std::uint64_t seed, std::size_t draw);
std::vector<Projection> sample_rank_k(std::size_t n, std::size_t k, std::size_t count, std::uint64_t seed);

/// Projection onto span{f_1 (+) 0, ..., 0 (+) f_k}. Frame column i carries f_i
/// bitwise inside block i. Throws NotUnit when | ||f_i|| - 1 | > 1e-10.
Projection block_projection(const BlockPartition& partition, std::span<const std::vector<Complex>> unit_vectors);

/// One Haar unit vector per block, drawn in block order from rng.
std::vector<std::vector<Complex>> sample_block_vectors(const BlockPartition& partition, Rng& rng);

bool is_normal(const Matrix& a, double tol);

/// ||PA - AP||_F.
double commutator_norm(const Matrix& a, const Projection& p);

/// Spectral projections of a normal matrix onto unions of eigenvalue clusters.
/// Throws NotNormal for non-normal input.
std::vector<Projection> commuting_projections(const Matrix& a, const CommutingOptions& options = {});

/// Throws ValidationFailed if some projection fails ||PA - AP||_F <= tol ||A||_F.
void validate_commuting(const Matrix& a, std::span<const Projection> projections, double tol);

}  // namespace nrange
