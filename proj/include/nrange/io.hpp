#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nrange/matrix.hpp"
#include "nrange/projections.hpp"
#include "nrange/ranges.hpp"

namespace nrange {

struct MatrixFile {
    Matrix matrix;
    std::optional<BlockPartition> partition;
    std::string name;
};

/// JSON matrix file: {"n": 2, "partition": [1, 1], "entries": [[re, im], ...],
/// "name": "..."} with row-major entries. Syntax errors are Malformed with the
/// line and column; wrong counts are DimensionMismatch; overflowing numbers
/// are NonFinite.
MatrixFile parse_matrix_text(std::string_view text);
MatrixFile parse_matrix(const std::filesystem::path& path);

/// n x k matrix of column vectors: {"rows": n, "cols": k, "entries": [[re, im], ...]}.
Matrix parse_vectors_text(std::string_view text);

/// "1,2,3" -> BlockPartition({1, 2, 3}). Throws Malformed.
BlockPartition parse_partition(std::string_view text);

/// Shortest round-trip form with 17 significant digits (%.17g semantics,
/// locale independent).
std::string format_double(double x);

/// Header "re,im,provenance", one "re,im,draw:index" line per point.
std::string points_csv(const PointSet& points);
PointSet parse_points_csv(std::string_view text);

/// Fixed 600 x 600 canvas: closed outline polyline plus one dot per point.
std::string render_svg(const std::vector<Complex>& outline, const std::vector<Complex>& points);

/// FNV-1a 64-bit.
std::uint64_t fnv1a64(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

struct RunManifest {
    std::string command;
    std::vector<std::string> argv;
    std::uint64_t seed = 0;
    std::map<std::string, std::uint64_t> budgets;
    std::map<std::string, double> tolerances;
    std::string input;
    std::string input_digest;
    std::map<std::string, std::string> outputs;
    std::string version;

    friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

std::string to_json(const RunManifest& manifest);
RunManifest manifest_from_json(std::string_view text);

}  // namespace nrange
