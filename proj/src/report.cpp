#include <cstdio>
#include <json.hpp>

#include "nrange/checks.hpp"
#include "nrange/error.hpp"

namespace nrange {

namespace {

using nlohmann::json;

json to_value(const CheckReport& r) {
    json parts = json::array();
    for (const auto& p : r.parts)
        parts.push_back({{"name", p.name}, {"deviation", p.deviation}, {"tolerance", p.tolerance}, {"pass", p.pass()}});
    return {{"name", r.name},         {"pass", r.pass},       {"deviation", r.deviation},
            {"tolerance", r.tolerance}, {"parts", parts},    {"budgets", r.budgets},
            {"seed", r.seed},         {"detail", r.detail}};
}

}  // namespace

std::string to_json(const CheckReport& report) { return to_value(report).dump(2); }

std::string to_json(std::span<const CheckReport> reports) {
    json all = json::array();
    for (const auto& r : reports) all.push_back(to_value(r));
    return all.dump(2);
}

CheckReport report_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        CheckReport r;
        r.name = j.at("name").get<std::string>();
        r.pass = j.at("pass").get<bool>();
        r.deviation = j.at("deviation").get<double>();
        r.tolerance = j.at("tolerance").get<double>();
        for (const auto& p : j.at("parts"))
            r.parts.push_back({p.at("name").get<std::string>(), p.at("deviation").get<double>(),
                               p.at("tolerance").get<double>()});
        r.budgets = j.at("budgets").get<std::map<std::string, std::uint64_t>>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.detail = j.at("detail").get<std::string>();
        return r;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Malformed, std::string("check report: ") + e.what());
    }
}

std::string format_table(std::span<const CheckReport> reports) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-20s %-6s %-12s %-12s %-22s %s\n", "check", "result", "deviation",
                  "tolerance", "worst part", "detail");
    out += line;
    for (const auto& r : reports) {
        std::string worst;
        for (const auto& p : r.parts)
            if (p.deviation == r.deviation && p.tolerance == r.tolerance) {
                worst = p.name;
                break;
            }
        std::snprintf(line, sizeof line, "%-20s %-6s %-12.4e %-12.4e %-22s ", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                      r.deviation, r.tolerance, worst.c_str());
        out += line;
        out += r.detail;
        out += '\n';
    }
    return out;
}

}  // namespace nrange
