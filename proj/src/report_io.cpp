#include "parest/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace parest::report {

namespace {

constexpr const char* kCsvHeader = "# estimate-report v1";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_reports_csv(const std::vector<verify::EstimateReport>& reports, std::ostream& os) {
  os << kCsvHeader << "\n";
  os << "name,lhs,rhs,margin,pass,tol,informational,params\n";
  for (const auto& r : reports) {
    std::string params;
    for (size_t i = 0; i < r.params.size(); ++i) {
      if (i) params += ';';
      params += r.params[i].first + "=" + r.params[i].second;
    }
    os << r.name << ',' << fmt(r.lhs) << ',' << fmt(r.rhs) << ',' << fmt(r.margin) << ','
       << (r.pass ? 1 : 0) << ',' << fmt(r.tol) << ',' << (r.informational ? 1 : 0) << ','
       << params << "\n";
  }
}

void write_reports_csv(const std::vector<verify::EstimateReport>& reports,
                       const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw parameter_error("write_reports_csv: cannot open " + path);
  write_reports_csv(reports, os);
}

std::vector<verify::EstimateReport> read_reports_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader)
    throw parse_error("report csv: missing version header");
  if (!std::getline(is, line)) throw parse_error("report csv: missing column header");

  std::vector<verify::EstimateReport> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    size_t pos = 0;
    for (int c = 0; c < 7; ++c) {
      const size_t comma = line.find(',', pos);
      if (comma == std::string::npos) throw parse_error("report csv: malformed row");
      cols.push_back(line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    cols.push_back(line.substr(pos));  // params (may contain '=' and ';')

    verify::EstimateReport r;
    r.name = cols[0];
    r.lhs = std::stod(cols[1]);
    r.rhs = std::stod(cols[2]);
    r.margin = std::stod(cols[3]);
    r.pass = cols[4] == "1";
    r.tol = std::stod(cols[5]);
    r.informational = cols[6] == "1";
    const std::string& params = cols[7];
    size_t p = 0;
    while (p < params.size()) {
      size_t semi = params.find(';', p);
      if (semi == std::string::npos) semi = params.size();
      const std::string item = params.substr(p, semi - p);
      const size_t eq = item.find('=');
      if (eq != std::string::npos) r.params.emplace_back(item.substr(0, eq), item.substr(eq + 1));
      p = semi + 1;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<verify::EstimateReport> read_reports_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw parameter_error("read_reports_csv: cannot open " + path);
  return read_reports_csv(is);
}

std::string summary_json(const std::vector<verify::EstimateReport>& reports,
                         const std::string& command, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["schema"] = "verify-summary v1";
  j["command"] = command;
  j["seed"] = seed;

  int passed = 0, failed = 0, informational = 0;
  std::map<std::string, nlohmann::ordered_json> groups;
  for (const auto& r : reports) {
    const std::string group = r.name.substr(0, r.name.find('.'));
    auto& g = groups[group];
    if (g.is_null()) {
      g["count"] = 0;
      g["passed"] = 0;
      g["informational"] = 0;
      g["max_margin"] = 0.0;
    }
    g["count"] = g["count"].get<int>() + 1;
    if (r.informational) {
      ++informational;
      g["informational"] = g["informational"].get<int>() + 1;
    } else if (r.pass) {
      ++passed;
      g["passed"] = g["passed"].get<int>() + 1;
    } else {
      ++failed;
    }
    if (!r.informational && std::isfinite(r.margin))
      g["max_margin"] = std::max(g["max_margin"].get<double>(), r.margin);
  }
  j["total"] = static_cast<int>(reports.size());
  j["passed"] = passed;
  j["failed"] = failed;
  j["informational"] = informational;
  nlohmann::ordered_json by;
  for (const auto& [k, v] : groups) by[k] = v;
  j["by_check"] = by;
  return j.dump(2) + "\n";
}

void write_summary_json(const std::vector<verify::EstimateReport>& reports,
                        const std::string& command, std::uint64_t seed,
                        const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw parameter_error("write_summary_json: cannot open " + path);
  os << summary_json(reports, command, seed);
}

void write_series_csv(const std::string& x_name, const std::string& y_name,
                      const std::vector<std::pair<double, double>>& series,
                      const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw parameter_error("write_series_csv: cannot open " + path);
  os << "# sweep-series v1\n" << x_name << ',' << y_name << "\n";
  for (const auto& [x, y] : series) os << fmt(x) << ',' << fmt(y) << "\n";
}

}  // namespace parest::report
