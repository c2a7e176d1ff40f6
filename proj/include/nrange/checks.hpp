#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nrange/matrix.hpp"
#include "nrange/projections.hpp"

namespace nrange {

/// One measured quantity of a check.
struct CheckPart {
    std::string name;
    double deviation = 0.0;
    double tolerance = 0.0;

    bool pass() const noexcept { return deviation <= tolerance; }
    friend bool operator==(const CheckPart&, const CheckPart&) = default;
};

/// Outcome of one checker. The top-level deviation and tolerance are those of
/// the worst part (largest deviation / tolerance), so pass holds exactly when
/// deviation <= tolerance, i.e. when every part passes.
struct CheckReport {
    std::string name;
    bool pass = true;
    double deviation = 0.0;
    double tolerance = 0.0;
    std::vector<CheckPart> parts;
    std::map<std::string, std::uint64_t> budgets;
    std::uint64_t seed = 0;
    std::string detail;

    void add(std::string part, double deviation, double tolerance);

    friend bool operator==(const CheckReport&, const CheckReport&) = default;
};

std::string to_json(const CheckReport& report);
CheckReport report_from_json(const std::string& text);
std::string to_json(std::span<const CheckReport> reports);

/// Fixed-width text table, one row per report.
std::string format_table(std::span<const CheckReport> reports);

/// Budgets, seed and tolerance factors shared by the checkers. Tolerances that
/// scale with the matrix multiply max(1, ||A||) unless noted.
struct CheckOptions {
    std::uint64_t seed = 0;
    std::size_t samples = 100000;   // family draws / nr_sample points
    std::size_t angles = 720;       // boundary trace
    SamplingLaw law = SamplingLaw::Mixed;
    double rayleigh_tol = 1e-9;     // absolute
    double exact_tol = 1e-9;        // absolute, k = n multiset check
    double containment = 1e-8;
    double closeness = 0.05;
    double commuting = 1e-8;
    double qnr = 1e-10;
    double ellipse = 1e-6;          // times ||A||
    double margin = 0.02;           // times ||A||
    double fill = 0.05;             // times ||A||
    std::size_t grid = 20;
};

CheckReport check_spectral_inclusion(const Matrix& a, const CheckOptions& options = {});
CheckReport check_p1_equals_nr(const Matrix& a, const CheckOptions& options = {});
CheckReport check_pk_lemma(const Matrix& a, std::size_t k, const CheckOptions& options = {});

/// Auto mode (no supplied projections) requires a normal matrix and throws
/// NotNormal otherwise.
CheckReport check_commuting_subset(const Matrix& a, const CheckOptions& options = {},
                                   std::span<const Projection> supplied = {});

CheckReport check_qnr_equivalence(const Matrix& a, const BlockPartition& partition, const CheckOptions& options = {});

/// Throws NotARefinement unless `refined` refines `coarse`.
CheckReport check_inclusion_chain(const Matrix& a, const BlockPartition& coarse, const BlockPartition& refined,
                                  const CheckOptions& options = {});

CheckReport check_two_dim_ellipse(const Matrix& a, const CheckOptions& options = {});
CheckReport check_convexity(const Matrix& a, const CheckOptions& options = {});

}  // namespace nrange
