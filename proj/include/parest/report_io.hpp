#pragma once

// Report serialization: versioned CSV (one row per report, params as a
// semicolon-separated k=v list) and a JSON summary document.  Output is
// byte-stable for identical inputs.

#include <iosfwd>
#include <string>
#include <vector>

#include "parest/verify.hpp"

namespace parest::report {

void write_reports_csv(const std::vector<verify::EstimateReport>& reports, std::ostream& os);
void write_reports_csv(const std::vector<verify::EstimateReport>& reports,
                       const std::string& path);

// Inverse of write_reports_csv; recovers every field including params.
std::vector<verify::EstimateReport> read_reports_csv(std::istream& is);
std::vector<verify::EstimateReport> read_reports_csv(const std::string& path);

std::string summary_json(const std::vector<verify::EstimateReport>& reports,
                         const std::string& command, std::uint64_t seed);
void write_summary_json(const std::vector<verify::EstimateReport>& reports,
                        const std::string& command, std::uint64_t seed,
                        const std::string& path);

// Two-column series file for sweeps.
void write_series_csv(const std::string& x_name, const std::string& y_name,
                      const std::vector<std::pair<double, double>>& series,
                      const std::string& path);

}  // namespace parest::report
