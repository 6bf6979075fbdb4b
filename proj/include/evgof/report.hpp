#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "evgof/copula.hpp"
#include "evgof/empirical.hpp"
#include "evgof/power.hpp"

namespace evgof {

inline constexpr const char* kToolVersion = "0.1.0";

/// One tested null family in a goodness-of-fit report.
struct ReportRow {
    std::string family;
    std::optional<Asymmetry> asym;
    std::string method;
    std::string statistic_kind;  // SnP, SnCFG or Tn
    double statistic = 0.0;
    double pvalue = 0.0;
    int bootstrap_n = 0;
    std::vector<double> theta_hat;
    std::vector<std::string> flags;
};

struct ReportDocument {
    std::string version = kToolVersion;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::string ties = "reject";
    std::vector<ReportRow> results;
};

std::string report_to_json(const ReportDocument& doc);
ReportDocument report_from_json(const std::string& text);
bool operator==(const ReportRow& a, const ReportRow& b);
bool operator==(const ReportDocument& a, const ReportDocument& b);

/// Two-column numeric CSV (optionally tab-separated, optional header row);
/// non-numeric cells and short rows produce ConfigError with the row number.
RawSample read_xy_csv(std::istream& in);
RawSample read_xy_csv_file(const std::string& path);

/// Decimal formatting used in every CSV we emit: round-trip exact.
std::string format_g17(double x);

/// Power-table serialization.  Runtime statistics are deliberately not
/// written here so identical seeds produce identical bytes.
std::string power_rows_to_csv(const std::vector<PowerRow>& rows);
std::string power_rows_to_json(const std::vector<PowerRow>& rows);
std::string power_row_to_json(const PowerRow& row);
PowerRow power_row_from_json(const std::string& text);

}  // namespace evgof
