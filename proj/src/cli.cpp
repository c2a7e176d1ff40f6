#include "nrange/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cstdio>
#include <ostream>

#include "nrange/checks.hpp"
#include "nrange/error.hpp"
#include "nrange/geometry.hpp"
#include "nrange/io.hpp"
#include "nrange/linalg.hpp"
#include "nrange/ranges.hpp"

namespace nrange {

namespace {

struct Options {
    std::string command;
    std::string input;
    std::uint64_t seed = 0;
    std::size_t samples = 10000;
    std::size_t angles = 720;
    bool no_refine = false;
    std::string family = "rank:1";
    std::string partition;
    std::string law;
    std::string out;
    std::string svg;
    std::string vectors;
    std::vector<std::string> checks;
    bool all = false;
    std::size_t k = 0;
    std::string coarse;
    std::string refined;
    CheckOptions tol;
    // replay
    std::string manifest;
    bool verify = false;
};

struct Artifacts {
    std::string primary;  // CSV, or the JSON report for `check`
    std::string svg;
    std::string text;     // printed to stdout
    bool failed = false;
    std::map<std::string, std::uint64_t> budgets;
    std::map<std::string, double> tolerances;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

SamplingLaw parse_law(const std::string& s) {
    if (s == "haar") return SamplingLaw::Haar;
    if (s == "directed") return SamplingLaw::Directed;
    if (s == "mixed") return SamplingLaw::Mixed;
    throw UsageError("--law must be haar, directed or mixed");
}

void add_input(CLI::App* sub, Options& o) {
    sub->add_option("input", o.input, "Matrix file (JSON)")->required();
    sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
}

void add_outputs(CLI::App* sub, Options& o) {
    sub->add_option("--out", o.out, "CSV output path (stdout when omitted); a manifest is written next to it");
    sub->add_option("--svg", o.svg, "SVG plot path");
}

void add_samples(CLI::App* sub, Options& o) {
    sub->add_option("--samples", o.samples, "Number of draws")->capture_default_str()->check(CLI::PositiveNumber);
}

void add_angles(CLI::App* sub, Options& o) {
    sub->add_option("--angles", o.angles, "Boundary angles")->capture_default_str()->check(CLI::Range(8, 1 << 20));
}

void build_app(CLI::App& app, Options& o) {
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    auto* range = app.add_subcommand("range", "Sample the numerical range with Haar unit vectors");
    add_input(range, o);
    add_samples(range, o);
    add_angles(range, o);
    add_outputs(range, o);

    auto* boundary = app.add_subcommand("boundary", "Trace the numerical range boundary");
    add_input(boundary, o);
    add_angles(boundary, o);
    boundary->add_flag("--no-refine", o.no_refine, "Keep the uniform angle grid");
    add_outputs(boundary, o);

    auto* pnr = app.add_subcommand("pnr", "Sample a projection numerical range");
    add_input(pnr, o);
    add_samples(pnr, o);
    add_angles(pnr, o);
    pnr->add_option("--family", o.family, "rank:k | block | commuting")->capture_default_str();
    pnr->add_option("--partition", o.partition, "Block sizes, e.g. 2,2 (overrides the file)");
    pnr->add_option("--law", o.law, "haar | directed | mixed (default haar)");
    add_outputs(pnr, o);

    for (const char* name : {"qnr", "bnr"}) {
        auto* sub = app.add_subcommand(name, std::string(name) == "qnr" ? "Sample the quadratic numerical range"
                                                                          : "Sample the block numerical range");
        add_input(sub, o);
        add_samples(sub, o);
        add_angles(sub, o);
        sub->add_option("--partition", o.partition, "Block sizes (overrides the file)");
        sub->add_option("--law", o.law, "haar | directed | mixed (default haar)");
        add_outputs(sub, o);
    }

    auto* comp = app.add_subcommand("compress", "Spectrum of the compression onto span(vectors)");
    add_input(comp, o);
    comp->add_option("--vectors", o.vectors, "Vectors file {rows, cols, entries}")->required();
    add_angles(comp, o);
    add_outputs(comp, o);

    auto* eig = app.add_subcommand("eig", "Eigenvalues");
    add_input(eig, o);
    add_angles(eig, o);
    add_outputs(eig, o);

    auto* check = app.add_subcommand("check", "Run property checkers");
    add_input(check, o);
    add_samples(check, o);
    add_angles(check, o);
    check->add_flag("--all", o.all, "Run every applicable checker");
    check->add_option("--check", o.checks, "Checker name (repeatable)");
    check->add_option("--k", o.k, "Rank for pk_lemma (default n)");
    check->add_option("--partition", o.partition, "Block sizes (overrides the file)");
    check->add_option("--coarse", o.coarse, "Coarse partition for inclusion_chain (default: file partition)");
    check->add_option("--refined", o.refined, "Refined partition for inclusion_chain (default: 1,...,1)");
    check->add_option("--law", o.law, "haar | directed | mixed (default mixed)");
    check->add_option("--out", o.out, "JSON report path; a manifest is written next to it");
    check->add_option("--tol-rayleigh", o.tol.rayleigh_tol)->capture_default_str();
    check->add_option("--tol-exact", o.tol.exact_tol)->capture_default_str();
    check->add_option("--tol-containment", o.tol.containment)->capture_default_str();
    check->add_option("--tol-closeness", o.tol.closeness)->capture_default_str();
    check->add_option("--tol-commuting", o.tol.commuting)->capture_default_str();
    check->add_option("--tol-qnr", o.tol.qnr)->capture_default_str();
    check->add_option("--tol-ellipse", o.tol.ellipse)->capture_default_str();
    check->add_option("--tol-margin", o.tol.margin)->capture_default_str();
    check->add_option("--tol-fill", o.tol.fill)->capture_default_str();
    check->add_option("--grid", o.tol.grid)->capture_default_str();

    auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    replay->add_option("manifest", o.manifest, "Manifest file")->required();
    replay->add_option("--out", o.out, "Write the regenerated output here (stdout when omitted)");
    replay->add_flag("--verify", o.verify, "Compare against the recorded output; exit 1 on any byte difference");

    for (auto* sub : app.get_subcommands({})) sub->callback([&o, sub] { o.command = sub->get_name(); });
}

// Throws CLI::ParseError on bad usage.
Options parse(const std::vector<std::string>& args) {
    Options o;
    CLI::App app("Numerical ranges, compressions and projection numerical ranges", "nrange");
    build_app(app, o);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    return o;
}

std::optional<BlockPartition> partition_for(const Options& o, const MatrixFile& f) {
    if (!o.partition.empty()) return parse_partition(o.partition);
    return f.partition;
}

std::vector<Complex> outline(const Matrix& a, std::size_t angles) {
    return convex_hull(nr_boundary(a, {.angles = angles}).touch_points()).vertices;
}

PointSet indexed(const std::vector<Complex>& values) {
    PointSet s;
    for (std::size_t j = 0; j < values.size(); ++j) s.points.push_back({values[j], {0, j}});
    return s;
}

void finish_points(Artifacts& art, const Options& o, const Matrix& a, const PointSet& s) {
    art.primary = points_csv(s);
    if (!o.svg.empty()) art.svg = render_svg(outline(a, o.angles), s.values());
}

FamilySpec family_for(const Options& o, const MatrixFile& f) {
    const std::size_t n = f.matrix.rows();
    const SamplingLaw law = parse_law(o.law.empty() ? "haar" : o.law);
    if (o.family.rfind("rank:", 0) == 0) {
        std::size_t k = 0;
        const std::string digits = o.family.substr(5);
        const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), k);
        if (digits.empty() || res.ec != std::errc() || res.ptr != digits.data() + digits.size())
            throw UsageError("--family rank:k needs an integer k");
        if (k < 1 || k > n) throw UsageError("--family rank:k needs 1 <= k <= " + std::to_string(n));
        return FamilySpec::rank_k(k, o.samples, o.seed, law);
    }
    if (o.family == "block") {
        auto part = partition_for(o, f);
        if (!part) throw UsageError("--family block needs a partition (file field or --partition)");
        return FamilySpec::block(*part, o.samples, o.seed, law);
    }
    if (o.family == "commuting") {
        CommutingOptions c;
        c.seed = o.seed;
        return FamilySpec::commuting_family(c);
    }
    throw UsageError("--family must be rank:k, block or commuting");
}

bool is_normal_matrix(const Matrix& a) { return is_normal(a, CommutingOptions{}.normal_tol); }

Artifacts run_check(const Options& o, const MatrixFile& f) {
    const Matrix& a = f.matrix;
    const std::size_t n = a.rows();
    CheckOptions opts = o.tol;
    opts.seed = o.seed;
    opts.samples = o.samples;
    opts.angles = o.angles;
    opts.law = parse_law(o.law.empty() ? "mixed" : o.law);
    const auto part = partition_for(o, f);

    std::vector<std::string> names = o.checks;
    if (o.all) {
        names = {"spectral_inclusion", "p1_equals_nr", "pk_lemma", "commuting_subset", "qnr_equivalence",
                 "inclusion_chain", "two_dim_ellipse", "convexity"};
    }
    if (names.empty()) throw UsageError("check needs --all or at least one --check NAME");

    Artifacts art;
    std::vector<CheckReport> reports;
    std::string notes;
    auto skip = [&](const std::string& name, const std::string& why) {
        if (!o.all) throw UsageError(name + ": " + why);
        notes += "skipped " + name + ": " + why + "\n";
    };
    for (const auto& name : names) {
        if (name == "spectral_inclusion") {
            reports.push_back(check_spectral_inclusion(a, opts));
        } else if (name == "p1_equals_nr") {
            reports.push_back(check_p1_equals_nr(a, opts));
        } else if (name == "pk_lemma") {
            if (o.k != 0) {
                reports.push_back(check_pk_lemma(a, o.k, opts));
            } else {
                reports.push_back(check_pk_lemma(a, n, opts));
                if (o.all && n > 1) reports.push_back(check_pk_lemma(a, n - 1, opts));
            }
        } else if (name == "commuting_subset") {
            if (!is_normal_matrix(a)) skip(name, "matrix is not normal");
            else reports.push_back(check_commuting_subset(a, opts));
        } else if (name == "qnr_equivalence") {
            if (!part || part->count() < 2) skip(name, "needs a partition with at least 2 blocks");
            else reports.push_back(check_qnr_equivalence(a, *part, opts));
        } else if (name == "inclusion_chain") {
            const std::optional<BlockPartition> coarse =
                o.coarse.empty() ? part : std::optional<BlockPartition>(parse_partition(o.coarse));
            const BlockPartition refined = o.refined.empty() ? BlockPartition::ones(n) : parse_partition(o.refined);
            if (!coarse) skip(name, "needs a coarse partition");
            else if (o.all && *coarse == refined) skip(name, "coarse partition is already 1,...,1");
            else reports.push_back(check_inclusion_chain(a, *coarse, refined, opts));
        } else if (name == "two_dim_ellipse") {
            if (n != 2) skip(name, "matrix is not 2x2");
            else reports.push_back(check_two_dim_ellipse(a, opts));
        } else if (name == "convexity") {
            reports.push_back(check_convexity(a, opts));
        } else {
            throw UsageError("unknown check '" + name + "'");
        }
    }
    art.text = format_table(reports) + notes;
    art.primary = to_json(reports) + "\n";
    for (const auto& r : reports) art.failed = art.failed || !r.pass;
    art.tolerances = {{"rayleigh", opts.rayleigh_tol}, {"exact", opts.exact_tol},   {"containment", opts.containment},
                      {"closeness", opts.closeness},   {"commuting", opts.commuting}, {"qnr", opts.qnr},
                      {"ellipse", opts.ellipse},       {"margin", opts.margin},     {"fill", opts.fill}};
    art.budgets["grid"] = opts.grid;
    return art;
}

Artifacts execute(const Options& o, const MatrixFile& f) {
    const Matrix& a = f.matrix;
    Artifacts art;
    art.budgets["angles"] = o.angles;
    if (o.command == "range") {
        art.budgets["samples"] = o.samples;
        finish_points(art, o, a, nr_sample(a, o.samples, o.seed));
    } else if (o.command == "boundary") {
        const BoundaryPolyline b = nr_boundary(a, {.angles = o.angles, .refine = !o.no_refine});
        PointSet s;
        for (std::size_t j = 0; j < b.samples.size(); ++j) {
            s.points.push_back({b.samples[j].touch, {j, 0}});
            if (b.samples[j].segment_end) s.points.push_back({*b.samples[j].segment_end, {j, 1}});
        }
        art.primary = points_csv(s);
        art.budgets["boundary_angles"] = b.samples.size();
        if (!o.svg.empty()) art.svg = render_svg(convex_hull(b.touch_points()).vertices, {});
    } else if (o.command == "pnr") {
        art.budgets["samples"] = o.samples;
        finish_points(art, o, a, pnr_sample(a, family_for(o, f)));
    } else if (o.command == "qnr" || o.command == "bnr") {
        const auto part = partition_for(o, f);
        if (!part) throw UsageError(o.command + " needs a partition (file field or --partition)");
        if (o.command == "qnr" && part->count() != 2) throw UsageError("qnr needs a partition with exactly 2 blocks");
        art.budgets["samples"] = o.samples;
        finish_points(art, o, a, bnr_sample(a, *part, o.samples, o.seed, parse_law(o.law.empty() ? "haar" : o.law)));
    } else if (o.command == "compress") {
        const Matrix v = parse_vectors_text(read_file(o.vectors));
        const Projection p = projection_from_span(v);
        finish_points(art, o, a, indexed(general_eigs(compress(a, p)).values));
    } else if (o.command == "eig") {
        finish_points(art, o, a, indexed(general_eigs(a).values));
    } else if (o.command == "check") {
        Artifacts c = run_check(o, f);
        c.budgets.insert(art.budgets.begin(), art.budgets.end());
        c.budgets["samples"] = o.samples;
        return c;
    }
    return art;
}

std::string digest_of(const std::string& bytes) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

int run_recorded(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const Options o = parse(args);
    if (o.command == "replay") {
        const RunManifest m = manifest_from_json(read_file(o.manifest));
        Options recorded = parse(m.argv);
        if (recorded.command == "replay") throw UsageError("manifest records a replay");
        const std::string bytes = read_file(recorded.input);
        if (digest_of(bytes) != m.input_digest) {
            throw Error(ErrorKind::ValidationFailed, "input " + recorded.input + " changed since the manifest was written");
        }
        recorded.svg.clear();
        const Artifacts art = execute(recorded, parse_matrix_text(bytes));
        if (o.verify) {
            const auto it = m.outputs.find(recorded.command == "check" ? "report" : "csv");
            if (it == m.outputs.end()) throw UsageError("manifest lists no output to verify");
            const bool same = read_file(it->second) == art.primary;
            out << (same ? "identical: " : "DIFFERS: ") << it->second << "\n";
            if (!same) return 1;
        }
        if (!o.out.empty()) write_file(o.out, art.primary);
        else if (!o.verify) out << art.primary;
        return art.failed ? 1 : 0;
    }

    const std::string bytes = read_file(o.input);
    const MatrixFile f = parse_matrix_text(bytes);
    const Artifacts art = execute(o, f);
    out << art.text;
    if (o.out.empty()) {
        if (o.command != "check") out << art.primary;
    } else {
        write_file(o.out, art.primary);
        RunManifest m;
        m.command = o.command;
        m.argv = args;
        m.seed = o.seed;
        m.budgets = art.budgets;
        m.tolerances = art.tolerances;
        m.input = o.input;
        m.input_digest = digest_of(bytes);
        m.outputs[o.command == "check" ? "report" : "csv"] = o.out;
        if (!o.svg.empty()) m.outputs["svg"] = o.svg;
        m.version = kVersion;
        write_file(o.out + ".manifest.json", to_json(m));
    }
    if (!o.svg.empty()) write_file(o.svg, art.svg);
    (void)err;
    return art.failed ? 1 : 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return run_recorded(args, out, err);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help / --version: CLI11 reports these as parse "errors".
            Options o;
            CLI::App app("Numerical ranges, compressions and projection numerical ranges", "nrange");
            build_app(app, o);
            return app.exit(e, out, err);
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace nrange
