#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace tcmfg {

/// One verification row: measured <= bound passes.
struct CheckRow {
    std::string check;
    std::string slice;
    double bound = 0.0;
    double measured = 0.0;
    double violation = 0.0;
    bool pass = true;
    std::string reference; // short description of the property checked
};

/// Row for measured <= bound (bound already includes any tolerance).
CheckRow upper_check(std::string check, std::string slice, double bound, double measured, std::string reference);
/// Row for |measured - target| <= tolerance, with bound = tolerance and measured = |deviation|.
CheckRow closeness_check(std::string check, std::string slice, double target, double value, double tolerance,
                         std::string reference);

struct Report {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<CheckRow> rows;
    std::vector<std::string> files;

    void add(CheckRow row) { rows.push_back(std::move(row)); }
    void append(const std::vector<CheckRow>& more) { rows.insert(rows.end(), more.begin(), more.end()); }
    bool all_pass() const;
    std::size_t failures() const;
};

enum class ReportFormat { csv, human };

/// Stable columns check,slice,bound,measured,violation,pass.
void write_csv(std::ostream& os, const std::vector<CheckRow>& rows);
void write_human(std::ostream& os, const Report& report);
void emit_report(std::ostream& os, const Report& report, ReportFormat format);

} // namespace tcmfg
