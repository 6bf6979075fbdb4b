#include "evgof/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "evgof/errors.hpp"

namespace evgof {

using nlohmann::json;

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

json row_to_json(const ReportRow& row) {
    json j{{"family", row.family},
           {"method", row.method},
           {"statistic_kind", row.statistic_kind},
           {"statistic", row.statistic},
           {"pvalue", row.pvalue},
           {"N", row.bootstrap_n},
           {"theta_hat", row.theta_hat},
           {"flags", row.flags}};
    if (row.asym) {
        j["asym"] = {{"lambda", row.asym->lambda}, {"kappa", row.asym->kappa}};
    }
    return j;
}

ReportRow row_from_json(const json& j) {
    ReportRow row;
    row.family = j.at("family").get<std::string>();
    row.method = j.at("method").get<std::string>();
    row.statistic_kind = j.at("statistic_kind").get<std::string>();
    row.statistic = j.at("statistic").get<double>();
    row.pvalue = j.at("pvalue").get<double>();
    row.bootstrap_n = j.at("N").get<int>();
    row.theta_hat = j.at("theta_hat").get<std::vector<double>>();
    row.flags = j.at("flags").get<std::vector<std::string>>();
    if (j.contains("asym")) {
        row.asym = Asymmetry{j["asym"].at("lambda").get<double>(),
                             j["asym"].at("kappa").get<double>()};
    }
    return row;
}

}  // namespace

std::string report_to_json(const ReportDocument& doc) {
    json j{{"version", doc.version},
           {"seed", doc.seed},
           {"n", doc.n},
           {"ties", doc.ties},
           {"results", json::array()}};
    for (const ReportRow& row : doc.results) j["results"].push_back(row_to_json(row));
    return j.dump(2);
}

ReportDocument report_from_json(const std::string& text) {
    const json j = json::parse(text);
    ReportDocument doc;
    doc.version = j.at("version").get<std::string>();
    doc.seed = j.at("seed").get<std::uint64_t>();
    doc.n = j.at("n").get<std::size_t>();
    doc.ties = j.at("ties").get<std::string>();
    for (const json& row : j.at("results")) doc.results.push_back(row_from_json(row));
    return doc;
}

bool operator==(const ReportRow& a, const ReportRow& b) {
    const bool asym_equal =
        (!a.asym && !b.asym) ||
        (a.asym && b.asym && a.asym->lambda == b.asym->lambda && a.asym->kappa == b.asym->kappa);
    return asym_equal && a.family == b.family && a.method == b.method &&
           a.statistic_kind == b.statistic_kind && a.statistic == b.statistic &&
           a.pvalue == b.pvalue && a.bootstrap_n == b.bootstrap_n &&
           a.theta_hat == b.theta_hat && a.flags == b.flags;
}

bool operator==(const ReportDocument& a, const ReportDocument& b) {
    return a.version == b.version && a.seed == b.seed && a.n == b.n && a.ties == b.ties &&
           a.results == b.results;
}

namespace {

bool parse_double(std::string_view cell, double& out) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (end[-1] == ' ' || end[-1] == '\r' || end[-1] == '\t')) --end;
    if (begin == end) return false;
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

std::vector<std::string> split_row(const std::string& line) {
    const char delim = line.find('\t') != std::string::npos ? '\t' : ',';
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, delim)) cells.push_back(cell);
    return cells;
}

}  // namespace

RawSample read_xy_csv(std::istream& in) {
    RawSample sample;
    std::string line;
    std::size_t lineno = 0;
    bool first_data_line = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> cells = split_row(line);
        if (cells.size() > 2) {
            throw ConfigError("row " + std::to_string(lineno) +
                              ": expected two columns (x,y); extra columns such as censoring "
                              "indicators are not supported");
        }
        if (cells.size() < 2) {
            throw ConfigError("row " + std::to_string(lineno) + ": expected two columns (x,y)");
        }
        double x, y;
        const bool ok = parse_double(cells[0], x) && parse_double(cells[1], y);
        if (!ok) {
            if (first_data_line) {
                first_data_line = false;  // header row
                continue;
            }
            throw ConfigError("row " + std::to_string(lineno) + ": non-numeric cell");
        }
        first_data_line = false;
        sample.pairs.emplace_back(x, y);
    }
    if (sample.pairs.size() < 2) {
        throw ConfigError("input needs at least two complete (x,y) rows");
    }
    return sample;
}

RawSample read_xy_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open input file '" + path + "'");
    return read_xy_csv(in);
}

std::string power_rows_to_csv(const std::vector<PowerRow>& rows) {
    std::string out = "scenario,reps,rejection_rate,mc_stderr\n";
    for (const PowerRow& row : rows) {
        out += row.scenario + "," + std::to_string(row.reps) + "," +
               format_g17(row.rejection_rate) + "," + format_g17(row.mc_stderr) + "\n";
    }
    return out;
}

std::string power_row_to_json(const PowerRow& row) {
    const json j{{"scenario", row.scenario},
                 {"reps", row.reps},
                 {"rejection_rate", row.rejection_rate},
                 {"mc_stderr", row.mc_stderr}};
    return j.dump(2);
}

PowerRow power_row_from_json(const std::string& text) {
    const json j = json::parse(text);
    PowerRow row;
    row.scenario = j.at("scenario").get<std::string>();
    row.reps = j.at("reps").get<int>();
    row.rejection_rate = j.at("rejection_rate").get<double>();
    row.mc_stderr = j.at("mc_stderr").get<double>();
    return row;
}

std::string power_rows_to_json(const std::vector<PowerRow>& rows) {
    json arr = json::array();
    for (const PowerRow& row : rows) {
        arr.push_back(json{{"scenario", row.scenario},
                           {"reps", row.reps},
                           {"rejection_rate", row.rejection_rate},
                           {"mc_stderr", row.mc_stderr}});
    }
    return json{{"version", kToolVersion}, {"rows", arr}}.dump(2);
}

}  // namespace evgof
