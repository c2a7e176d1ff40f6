#include "nrange/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "nrange/error.hpp"

namespace nrange {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorKind::Malformed, what); }

json parse_json(std::string_view text, const char* what) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        malformed(std::string(what) + ": line " + std::to_string(line) + ", column " + std::to_string(column) +
                  ": invalid JSON");
    } catch (const json::out_of_range& e) {
        // 406: a number literal overflows double.
        if (e.id == 406) throw Error(ErrorKind::NonFinite, std::string(what) + ": number out of double range");
        malformed(std::string(what) + ": " + e.what());
    }
}

std::size_t positive_integer(const json& j, const std::string& field) {
    if (!j.is_number_integer() || j.get<long long>() < 1) malformed("field '" + field + "': expected a positive integer");
    return static_cast<std::size_t>(j.get<long long>());
}

std::vector<Complex> parse_entries(const json& doc, std::size_t expected) {
    if (!doc.contains("entries")) malformed("field 'entries': missing");
    const json& e = doc["entries"];
    if (!e.is_array()) malformed("field 'entries': expected an array of [re, im] pairs");
    std::vector<Complex> out;
    out.reserve(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        const std::string field = "entries[" + std::to_string(i) + "]";
        const json& pair = e[i];
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
            malformed("field '" + field + "': expected [re, im]");
        const double re = pair[0].get<double>();
        const double im = pair[1].get<double>();
        if (!std::isfinite(re) || !std::isfinite(im)) throw Error(ErrorKind::NonFinite, field + " is not finite");
        out.emplace_back(re, im);
    }
    if (out.size() != expected) {
        throw Error(ErrorKind::DimensionMismatch,
                    "expected " + std::to_string(expected) + " entries, got " + std::to_string(out.size()));
    }
    return out;
}

std::string fixed3(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 3);
    return std::string(buf, res.ptr);
}

}  // namespace

MatrixFile parse_matrix_text(std::string_view text) {
    const json doc = parse_json(text, "matrix file");
    if (!doc.is_object()) malformed("matrix file: expected a JSON object");
    if (!doc.contains("n")) malformed("field 'n': missing");
    const std::size_t n = positive_integer(doc["n"], "n");
    MatrixFile out;
    out.matrix = Matrix(n, n, parse_entries(doc, n * n));
    if (doc.contains("partition")) {
        const json& p = doc["partition"];
        if (!p.is_array() || p.empty()) malformed("field 'partition': expected an array of block sizes");
        std::vector<std::size_t> sizes;
        for (std::size_t i = 0; i < p.size(); ++i) sizes.push_back(positive_integer(p[i], "partition[" + std::to_string(i) + "]"));
        BlockPartition part(std::move(sizes));
        part.require_total(n);
        out.partition = std::move(part);
    }
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) malformed("field 'name': expected a string");
        out.name = doc["name"].get<std::string>();
    }
    return out;
}

MatrixFile parse_matrix(const std::filesystem::path& path) { return parse_matrix_text(read_file(path)); }

Matrix parse_vectors_text(std::string_view text) {
    const json doc = parse_json(text, "vectors file");
    if (!doc.is_object()) malformed("vectors file: expected a JSON object");
    if (!doc.contains("rows") || !doc.contains("cols")) malformed("vectors file: fields 'rows' and 'cols' are required");
    const std::size_t rows = positive_integer(doc["rows"], "rows");
    const std::size_t cols = positive_integer(doc["cols"], "cols");
    return Matrix(rows, cols, parse_entries(doc, rows * cols));
}

BlockPartition parse_partition(std::string_view text) {
    std::vector<std::size_t> sizes;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        const std::string_view item = text.substr(start, comma - start);
        std::size_t v = 0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size() || v == 0)
            malformed("partition '" + std::string(text) + "': expected positive integers separated by commas");
        sizes.push_back(v);
        start = comma + 1;
    }
    return BlockPartition(std::move(sizes));
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string points_csv(const PointSet& points) {
    std::string out = "re,im,provenance\n";
    for (const auto& p : points.points) {
        out += format_double(p.value.real());
        out += ',';
        out += format_double(p.value.imag());
        out += ',';
        out += std::to_string(p.source.draw);
        out += ':';
        out += std::to_string(p.source.index);
        out += '\n';
    }
    return out;
}

PointSet parse_points_csv(std::string_view text) {
    PointSet out;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line_no == 1) {
            if (line != "re,im,provenance") malformed("points csv: line 1: expected header re,im,provenance");
            continue;
        }
        if (line.empty()) continue;
        const char* p = line.data();
        const char* stop = line.data() + line.size();
        double re = 0, im = 0;
        std::size_t draw = 0, index = 0;
        auto fail = [&] { malformed("points csv: line " + std::to_string(line_no) + ": expected re,im,draw:index"); };
        auto r1 = std::from_chars(p, stop, re);
        if (r1.ec != std::errc() || r1.ptr == stop || *r1.ptr != ',') fail();
        auto r2 = std::from_chars(r1.ptr + 1, stop, im);
        if (r2.ec != std::errc() || r2.ptr == stop || *r2.ptr != ',') fail();
        auto r3 = std::from_chars(r2.ptr + 1, stop, draw);
        if (r3.ec != std::errc() || r3.ptr == stop || *r3.ptr != ':') fail();
        auto r4 = std::from_chars(r3.ptr + 1, stop, index);
        if (r4.ec != std::errc() || r4.ptr != stop) fail();
        out.points.push_back({Complex(re, im), {draw, index}});
    }
    if (line_no == 0) malformed("points csv: empty file");
    return out;
}

std::string render_svg(const std::vector<Complex>& outline, const std::vector<Complex>& points) {
    constexpr double kSize = 600.0;
    constexpr double kMargin = 40.0;
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto* set : {&outline, &points})
        for (const auto& z : *set) {
            xmin = std::min(xmin, z.real());
            xmax = std::max(xmax, z.real());
            ymin = std::min(ymin, z.imag());
            ymax = std::max(ymax, z.imag());
        }
    if (!std::isfinite(xmin)) xmin = xmax = ymin = ymax = 0.0;
    const double extent = std::max({xmax - xmin, ymax - ymin, 1e-12});
    const double unit = (kSize - 2 * kMargin) / extent;
    const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
    auto sx = [&](Complex z) { return fixed3(kSize / 2 + (z.real() - cx) * unit); };
    auto sy = [&](Complex z) { return fixed3(kSize / 2 - (z.imag() - cy) * unit); };

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" viewBox=\"0 0 600 600\">\n";
    out += "<rect width=\"600\" height=\"600\" fill=\"white\"/>\n";
    if (!outline.empty()) {
        out += "<polygon fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < outline.size(); ++i) {
            if (i) out += ' ';
            out += sx(outline[i]) + ',' + sy(outline[i]);
        }
        out += "\"/>\n";
    }
    out += "<g fill=\"steelblue\" fill-opacity=\"0.5\">\n";
    for (const auto& z : points) out += "<circle cx=\"" + sx(z) + "\" cy=\"" + sy(z) + "\" r=\"1.5\"/>\n";
    out += "</g>\n</svg>\n";
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string to_json(const RunManifest& m) {
    const json j = {{"command", m.command}, {"argv", m.argv},           {"seed", m.seed},
                    {"budgets", m.budgets}, {"tolerances", m.tolerances}, {"input", m.input},
                    {"input_digest", m.input_digest}, {"outputs", m.outputs}, {"version", m.version}};
    return j.dump(2) + "\n";
}

RunManifest manifest_from_json(std::string_view text) {
    const json j = parse_json(text, "manifest");
    try {
        RunManifest m;
        m.command = j.at("command").get<std::string>();
        m.argv = j.at("argv").get<std::vector<std::string>>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.budgets = j.at("budgets").get<std::map<std::string, std::uint64_t>>();
        m.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
        m.input = j.at("input").get<std::string>();
        m.input_digest = j.at("input_digest").get<std::string>();
        m.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
        m.version = j.at("version").get<std::string>();
        return m;
    } catch (const json::exception& e) {
        malformed(std::string("manifest: ") + e.what());
    }
}

}  // namespace nrange
