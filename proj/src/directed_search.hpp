#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "nrange/matrix.hpp"
#include "nrange/projections.hpp"

namespace nrange::detail {

// Parameter shape of the family being explored: a general n x k frame
// (RankK) or one unit vector per block embedded block-diagonally (Block).
enum class Structure { Frame, Block };

struct SearchSetup {
    Structure structure = Structure::Frame;
    std::size_t rank = 1;                      // Frame
    const BlockPartition* partition = nullptr; // Block
    std::uint64_t seed = 0;
    std::size_t first_draw = 0;
    std::size_t evaluations = 0;
};

// Maps the parameter matrix V (n x k) to the k x k matrix whose spectrum is
// the family member's contribution.
using Evaluate = std::function<Matrix(const Matrix& v)>;
using Emit = std::function<void(std::size_t draw, const Matrix& v, const Matrix& m, const std::vector<Complex>& eigenvalues)>;

// Streams used by directed chains start here so they never collide with the
// per-draw Haar streams 0, 1, 2, ...
inline constexpr std::uint64_t kDirectedStreamBase = std::uint64_t{1} << 40;

void directed_search(const Matrix& a, const SearchSetup& setup, const Evaluate& evaluate, const Emit& emit);

}  // namespace nrange::detail
