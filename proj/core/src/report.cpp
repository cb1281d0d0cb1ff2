#include "tcmfg/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

#include "tcmfg/grid_io.hpp"

namespace tcmfg {

CheckRow upper_check(std::string check, std::string slice, double bound, double measured, std::string reference) {
    CheckRow row{std::move(check), std::move(slice), bound, measured, 0.0, true, std::move(reference)};
    row.violation = std::isnan(measured) ? std::numeric_limits<double>::infinity() : std::max(0.0, measured - bound);
    row.pass = row.violation == 0.0;
    return row;
}

CheckRow closeness_check(std::string check, std::string slice, double target, double value, double tolerance,
                         std::string reference) {
    return upper_check(std::move(check), std::move(slice), tolerance, std::abs(value - target), std::move(reference));
}

bool Report::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

std::size_t Report::failures() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const CheckRow& r) { return !r.pass; }));
}

void write_csv(std::ostream& os, const std::vector<CheckRow>& rows) {
    os << "check,slice,bound,measured,violation,pass\n";
    for (const CheckRow& r : rows) {
        os << r.check << ',' << r.slice << ',' << format_double(r.bound) << ',' << format_double(r.measured) << ','
           << format_double(r.violation) << ',' << (r.pass ? "pass" : "fail") << '\n';
    }
}

void write_human(std::ostream& os, const Report& report) {
    for (const auto& [key, value] : report.metadata) os << key << ": " << value << '\n';
    for (const CheckRow& r : report.rows) {
        os << (r.pass ? "[PASS] " : "[FAIL] ") << r.check;
        if (!r.slice.empty()) os << " @ " << r.slice;
        os << "  measured " << std::setprecision(6) << r.measured << " <= bound " << r.bound;
        if (!r.pass) os << "  (violation " << r.violation << ')';
        if (!r.reference.empty()) os << "  [" << r.reference << ']';
        os << '\n';
    }
    os << report.rows.size() - report.failures() << '/' << report.rows.size() << " checks passed\n";
}

void emit_report(std::ostream& os, const Report& report, ReportFormat format) {
    if (format == ReportFormat::csv) write_csv(os, report.rows);
    else write_human(os, report);
}

} // namespace tcmfg
