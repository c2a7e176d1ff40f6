// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nrange/checks.hpp"
#include "nrange/cli.hpp"
#include "nrange/geometry.hpp"
#include "nrange/io.hpp"
#include "nrange/linalg.hpp"
#include "nrange/ranges.hpp"
#include "test_support.hpp"

using namespace nrange;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string summary;
};

// Tracks the worst deviation / tolerance ratio seen for one quantity.
struct Worst {
    double ratio = 0.0;
    double deviation = 0.0;
    double tolerance = 0.0;

    void see(double dev, double tol) {
        const double r = tol > 0.0 ? dev / tol : (dev > 0.0 ? INFINITY : 0.0);
        if (r >= ratio) {
            ratio = r;
            deviation = dev;
            tolerance = tol;
        }
    }
    bool ok() const { return ratio <= 1.0; }
    std::string str() const {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3g/%.3g", deviation, tolerance);
        return buf;
    }
};

Matrix gaussian(std::size_t n, std::uint64_t seed, std::uint64_t stream = 0) {
    Rng rng(seed, stream);
    return complex_gaussian_matrix(n, n, rng);
}

Matrix hermitian(std::size_t n, std::uint64_t seed) {
    Matrix g = gaussian(n, seed, 1);
    Matrix h = g + g.adjoint();
    h *= 0.5;
    return h;
}

Matrix normal(std::size_t n, std::uint64_t seed) {
    Rng rng(seed, 2);
    const Matrix u = haar_frame(n, n, rng).basis();
    std::vector<Complex> d(n);
    for (auto& z : d) z = rng.complex_normal();
    return u * Matrix::diagonal(d) * u.adjoint();
}

double scale(const Matrix& a) { return std::max(1.0, operator_norm(a)); }

// Every matrix used by criteria 1-5 also feeds the classical-property sweep.
std::vector<Matrix> g_seen;

double part_of(const CheckReport& r, const std::string& name) {
    for (const auto& p : r.parts)
        if (p.name == name) return p.deviation;
    return NAN;
}

Outcome criterion1() {
    Outcome o;
    Worst closeness, containment;
    CheckOptions opts;
    opts.samples = 100000;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Matrix a = gaussian(2 + seed % 7, seed);
        g_seen.push_back(a);
        opts.seed = seed;
        const CheckReport r = check_p1_equals_nr(a, opts);
        const double s = scale(a);
        closeness.see(part_of(r, "closeness"), 0.05 * s);
        containment.see(part_of(r, "containment"), 1e-8 * s);
        o.pass = o.pass && r.pass;
    }
    o.pass = o.pass && closeness.ok() && containment.ok();
    o.summary = "20 matrices n=2..8, 1e5 samples; worst closeness " + closeness.str() + ", containment " +
                containment.str();
    return o;
}

Outcome criterion2() {
    Outcome o;
    Worst exact, containment, closeness;
    for (std::size_t n = 2; n <= 6; ++n) {
        const Matrix a = gaussian(n, 100 + n);
        g_seen.push_back(a);
        const CheckReport r = check_pk_lemma(a, n);
        exact.see(r.deviation, 1e-9);
        o.pass = o.pass && r.pass;
    }
    CheckOptions opts;
    opts.samples = 10000;
    for (std::size_t n = 3; n <= 6; ++n) {
        const Matrix a = gaussian(n, 200 + n);
        g_seen.push_back(a);
        for (std::size_t k = 1; k < n; ++k) {
            opts.seed = 10 * n + k;
            const CheckReport r = check_pk_lemma(a, k, opts);
            containment.see(part_of(r, "containment"), 1e-8 * scale(a));
            closeness.see(part_of(r, "closeness"), 0.05 * scale(a));
            o.pass = o.pass && r.pass;
        }
    }
    o.summary = "k=n: worst multiset distance " + exact.str() + "; k<n (n=3..6, 1e4 draws): containment " +
                containment.str() + ", closeness " + closeness.str();
    return o;
}

Outcome criterion3() {
    Outcome o;
    Worst subset, attained;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (const bool herm : {true, false}) {
            const std::size_t n = 2 + seed % 7;
            const Matrix a = herm ? hermitian(n, 300 + seed) : normal(n, 300 + seed);
            g_seen.push_back(a);
            const CheckReport r = check_commuting_subset(a);
            subset.see(part_of(r, "subset_of_spectrum"), 1e-8 * scale(a));
            if (herm) {
                const double att = part_of(r, "spectrum_attained");
                attained.see(std::isnan(att) ? INFINITY : att, 1e-8 * scale(a));
            }
            o.pass = o.pass && r.pass;
        }
    }
    const Matrix blocky{{0.0, 1.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 5.0}};
    const std::vector<Projection> user{projection_from_span(Matrix{{1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}})};
    const CheckReport b = check_commuting_subset(blocky, {}, user);
    o.pass = o.pass && b.pass && b.deviation == 0.0 && subset.ok() && attained.ok();
    o.summary = "20 Hermitian + 20 normal: subset " + subset.str() + ", attained " + attained.str() +
                "; non-normal block example deviation " + std::to_string(b.deviation);
    return o;
}

Outcome criterion4() {
    Outcome o;
    Worst dev;
    CheckOptions opts;
    opts.samples = 1000;
    const std::vector<std::pair<std::size_t, BlockPartition>> cases{
        {4, BlockPartition({2, 2})}, {6, BlockPartition({3, 3})}, {8, BlockPartition({2, 3, 3})}};
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        for (const auto& [n, part] : cases) {
            const Matrix a = gaussian(n, 400 + seed);
            g_seen.push_back(a);
            opts.seed = seed;
            const CheckReport r = check_qnr_equivalence(a, part, opts);
            dev.see(r.deviation, 1e-10 * scale(a));
            o.pass = o.pass && r.pass;
        }
    }
    o.summary = "partitions (2,2),(3,3),(2,3,3), 3 matrices each, 1e3 draws; worst " + dev.str();
    return o;
}

Outcome criterion5() {
    Outcome o;
    Worst refined, range;
    CheckOptions opts;
    opts.samples = 10000;
    const BlockPartition halves({4, 4}), quarters({2, 2, 2, 2}), ones = BlockPartition::ones(8);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const Matrix a = gaussian(8, 500 + seed);
        g_seen.push_back(a);
        opts.seed = seed;
        for (const auto& [coarse, fine] : {std::pair{halves, quarters}, std::pair{quarters, ones}}) {
            const CheckReport r = check_inclusion_chain(a, coarse, fine, opts);
            refined.see(part_of(r, "refined_in_coarse"), 0.05 * scale(a));
            range.see(std::max(part_of(r, "coarse_in_range"), part_of(r, "refined_in_range")), 1e-8 * scale(a));
            o.pass = o.pass && r.pass;
        }
    }
    o.summary = "3 random 8x8, (1^8) -> (2,2,2,2) -> (4,4), 1e4 draws per level; refined-in-coarse " + refined.str() +
                ", in W(A) " + range.str();
    return o;
}

Outcome criterion6() {
    Outcome o;
    Worst inclusion, invariance, norm_bound, adjoint;
    std::size_t points = 0;
    std::uint64_t idx = 0;
    for (const Matrix& a : g_seen) {
        ++idx;
        const double s = scale(a);
        const CheckReport inc = check_spectral_inclusion(a);
        inclusion.see(inc.deviation, 1e-8 * s);

        Rng rng(600, idx);
        const Matrix u = haar_frame(a.rows(), a.rows(), rng).basis();
        const ConvexPolygon h1 = convex_hull(nr_boundary(a).touch_points());
        const ConvexPolygon h2 = convex_hull(nr_boundary(u.adjoint() * a * u).touch_points());
        invariance.see(hull_hausdorff(h1, h2), 1e-8 * s);

        const double norm = operator_norm(a);
        const std::size_t n = a.rows();
        std::vector<PointSet> emitted{nr_sample(a, 500, idx), pnr_sample(a, FamilySpec::rank_k(1 + idx % n, 200, idx)),
                                      pnr_sample(a, FamilySpec::rank_k(1 + idx % n, 200, idx, SamplingLaw::Directed))};
        if (n >= 2) {
            const BlockPartition part({n / 2, n - n / 2});
            emitted.push_back(bnr_sample(a, part, 200, idx));
            emitted.push_back(bnr_sample(a, part, 200, idx, SamplingLaw::Mixed));
        }
        for (const auto& set : emitted)
            for (const auto& p : set.points) {
                norm_bound.see(std::max(0.0, std::abs(p.value) - norm), 1e-8);
                ++points;
            }

        for (const FamilySpec& fam : {FamilySpec::rank_k(1 + idx % n, 100, idx),
                                      FamilySpec::block(BlockPartition::ones(n), 100, idx)}) {
            std::map<std::size_t, std::vector<Complex>> fwd, adj;
            for (const auto& p : pnr_sample(a, fam).points) fwd[p.source.draw].push_back(std::conj(p.value));
            for (const auto& p : pnr_sample(a.adjoint(), fam).points) adj[p.source.draw].push_back(p.value);
            for (const auto& [draw, values] : fwd) adjoint.see(matching_distance(values, adj[draw]), 1e-9);
        }
    }
    o.pass = inclusion.ok() && invariance.ok() && norm_bound.ok() && adjoint.ok();
    o.summary = std::to_string(g_seen.size()) + " matrices: spectral inclusion " + inclusion.str() +
                ", unitary invariance " + invariance.str() + ", norm bound over " + std::to_string(points) +
                " points " + norm_bound.str() + ", adjoint " + adjoint.str();
    return o;
}

Outcome criterion7() {
    Outcome o;
    const Matrix jordan{{0.0, 1.0}, {0.0, 0.0}};
    Worst circle, focal, segment;
    for (const auto& s : nr_boundary(jordan).samples) {
        circle.see(std::abs(std::abs(s.touch) - 0.5), 1e-10);
        circle.see(std::abs(s.support - 0.5), 1e-10);
    }
    CheckOptions opts;
    opts.samples = 2000;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Matrix a = gaussian(2, 700 + seed);
        opts.seed = seed;
        const CheckReport r = check_two_dim_ellipse(a, opts);
        focal.see(part_of(r, "focal_sum"), 1e-6 * operator_norm(a));
        o.pass = o.pass && r.pass;
    }
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Matrix a = normal(2, 720 + seed);
        const auto ev = general_eigs(a).values;
        const std::vector<Complex> ends(ev.begin(), ev.end());
        const ConvexPolygon expected = convex_hull(ends);
        const auto touch = nr_boundary(a).touch_points();
        for (const auto& z : touch) segment.see(segment_distance(z, ev[0], ev[1]), 1e-10);
        segment.see(hull_hausdorff(convex_hull(touch), expected), 1e-10);
        if (convex_hull(touch).kind != ConvexPolygon::Kind::Segment) segment.see(INFINITY, 1e-10);
    }
    o.pass = o.pass && circle.ok() && focal.ok() && segment.ok();
    o.summary = "circle radius " + circle.str() + ", focal-sum spread " + focal.str() + ", normal 2x2 segment " +
                segment.str();
    return o;
}

Outcome criterion8() {
    Outcome o;
    Worst dev;
    for (std::size_t n = 2; n <= 8; ++n)
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const Matrix h = hermitian(n, 800 + 10 * n + seed);
            const auto ev = hermitian_eigs(h).values;
            const std::vector<Complex> ends{ev.front(), ev.back()};
            const ConvexPolygon hull = convex_hull(nr_boundary(h).touch_points());
            if (hull.kind != ConvexPolygon::Kind::Segment) dev.see(INFINITY, 1e-10);
            dev.see(hull_hausdorff(hull, convex_hull(ends)), 1e-10);
        }
    o.pass = dev.ok();
    o.summary = "21 Hermitian matrices n=2..8; hull vs [lambda_min, lambda_max] " + dev.str();
    return o;
}

Outcome criterion9() {
    Outcome o;
    std::size_t hull_mismatch = 0, hausdorff_mismatch = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(900, seed);
        std::vector<Complex> pts(200);
        for (auto& z : pts) z = rng.complex_normal();
        const ConvexPolygon h = convex_hull(pts);
        std::vector<Complex> got = h.vertices;
        std::sort(got.begin(), got.end(), [](Complex a, Complex b) {
            return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
        });
        if (got != nrange::testing::brute_hull_vertices(pts, collinearity_tolerance(pts))) ++hull_mismatch;

        std::vector<Complex> other(100);
        for (auto& z : other) z = rng.complex_normal();
        double brute = 0.0;
        for (const auto* pair : {&pts, &other}) {
            const auto& x = *pair;
            const auto& y = pair == &pts ? other : pts;
            for (const auto& p : x) {
                double best = INFINITY;
                for (const auto& q : y) best = std::min(best, std::abs(p - q));
                brute = std::max(brute, best);
            }
        }
        if (hausdorff(pts, other) != brute) ++hausdorff_mismatch;
    }
    o.pass = hull_mismatch == 0 && hausdorff_mismatch == 0;
    o.summary = "100 clouds of 200 points: hull mismatches " + std::to_string(hull_mismatch) +
                ", Hausdorff mismatches " + std::to_string(hausdorff_mismatch);
    return o;
}

Outcome criterion10() {
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / "nrange-acceptance";
    fs::create_directories(dir);
    const std::string in = (dir / "m.json").string();
    write_file(in, R"({"n": 4, "partition": [2, 2], "name": "acceptance",
  "entries": [[1,0],[0.5,-1],[0,0],[2,1],[0,1],[-1,0],[3,0.25],[0,0],
              [1,1],[0,0],[0.5,0.5],[-2,0],[0,-1],[1,0],[0,0],[0,2]]})");
    const std::string vec = (dir / "v.json").string();
    write_file(vec, R"({"rows": 4, "cols": 2, "entries": [[1,0],[0,0],[1,0],[1,0],[0,1],[0,0],[0,0],[1,-1]]})");

    const std::vector<std::vector<std::string>> commands{
        {"range", in, "--samples", "2000", "--seed", "7"},
        {"boundary", in, "--angles", "360"},
        {"pnr", in, "--family", "rank:2", "--samples", "500", "--seed", "3"},
        {"pnr", in, "--family", "block", "--samples", "500", "--law", "mixed"},
        {"pnr", in, "--family", "rank:4"},
        {"qnr", in, "--samples", "500", "--seed", "11"},
        {"bnr", in, "--partition", "1,1,2", "--samples", "500"},
        {"compress", in, "--vectors", vec},
        {"eig", in},
        {"check", in, "--check", "spectral_inclusion", "--check", "qnr_equivalence", "--samples", "200"},
    };
    std::size_t identical = 0;
    std::vector<std::string> failures;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        const std::string out1 = (dir / ("out" + std::to_string(i) + ".csv")).string();
        const std::string out2 = (dir / ("again" + std::to_string(i) + ".csv")).string();
        const std::string out3 = (dir / ("replay" + std::to_string(i) + ".csv")).string();
        std::ostringstream sink, err;
        auto first = commands[i];
        first.insert(first.end(), {"--out", out1});
        auto second = commands[i];
        second.insert(second.end(), {"--out", out2});
        const int c1 = run_command(first, sink, err);
        const int c2 = run_command(second, sink, err);
        const int c3 = run_command({"replay", out1 + ".manifest.json", "--out", out3}, sink, err);
        const int c4 = run_command({"replay", out1 + ".manifest.json", "--verify"}, sink, err);
        const std::string a = read_file(out1);
        if (c1 == 0 && c2 == 0 && c3 == 0 && c4 == 0 && !a.empty() && a == read_file(out2) && a == read_file(out3))
            ++identical;
        else
            failures.push_back(commands[i][0]);
    }
    o.pass = failures.empty();
    o.summary = std::to_string(identical) + "/" + std::to_string(commands.size()) +
                " commands byte-identical on re-run and manifest replay";
    for (const auto& f : failures) o.summary += " [differs: " + f + "]";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"P1 numerical range equals W(A)", criterion1},
        {"Pk dichotomy", criterion2},
        {"commuting family inside the point spectrum", criterion3},
        {"QNR/BNR transpose equivalence", criterion4},
        {"block inclusion chain", criterion5},
        {"classical properties", criterion6},
        {"2x2 elliptical range", criterion7},
        {"self-adjoint hull", criterion8},
        {"geometry oracle equivalence", criterion9},
        {"CLI determinism", criterion10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.summary = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2zu %-4s %s: %s (%.1fs)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                    o.summary.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
