#include "ergolab/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "ergolab/spec_text.hpp"

namespace ergolab {

std::string comment_block(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += "# " + l + "\n";
  return out;
}

namespace {

std::string complex_rows(std::span<const std::complex<double>> values, std::size_t offset) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += std::to_string(i + offset) + "," + format_real(values[i].real()) + "," + format_real(values[i].imag()) +
           "\n";
  }
  return out;
}

}  // namespace

std::string series_csv(const CorrelationSeries& series, const std::vector<std::string>& header) {
  auto lines = header;
  lines.push_back("provenance: " + series.provenance);
  return comment_block(lines) + "n,re,im\n" + complex_rows(series.values, 1);
}

std::string empirical_csv(const EmpiricalFunction& g, const std::vector<std::string>& header) {
  auto lines = header;
  lines.push_back("sample_set: " + g.sample_set);
  return comment_block(lines) + "sample_id,re,im\n" + complex_rows(g.values, 0);
}

std::string scan_csv(const SpectrumScan& scan, const std::vector<std::string>& header) {
  auto lines = header;
  lines.push_back("N=" + std::to_string(scan.N) + " fft_size=" + std::to_string(scan.fft_size));
  std::string out = comment_block(lines) + "theta,magnitude\n";
  for (std::size_t j = 0; j < scan.magnitudes.size(); ++j)
    out += format_real(scan.theta(j)) + "," + format_real(scan.magnitudes[j]) + "\n";
  return out;
}

std::string convergence_csv(const ConvergenceReport& report, const std::vector<std::string>& header) {
  auto lines = header;
  lines.push_back("theorem: " + report.theorem);
  std::string out = comment_block(lines) + "N,distance\n";
  for (const auto& row : report.rows) out += std::to_string(row.N) + "," + format_real(row.distance) + "\n";
  return out;
}

std::string wtrick_csv(std::span<const WTrickRow> rows, const std::vector<std::string>& header) {
  std::string out = comment_block(header) + "w,W,max_b,value\n";
  for (const auto& r : rows)
    out += std::to_string(r.w) + "," + to_string(r.W) + "," + std::to_string(r.max_b) + "," + format_real(r.value) +
           "\n";
  return out;
}

nlohmann::json peaks_json(const PeakReport& peaks) {
  auto arr = nlohmann::json::array();
  for (const auto& p : peaks.peaks) arr.push_back({{"theta", p.theta}, {"magnitude", p.magnitude}, {"refined", p.refined}});
  return arr;
}

nlohmann::json containment_json(const ContainmentReport& report) {
  nlohmann::json j;
  j["pass"] = report.pass;
  j["violations"] = peaks_json(PeakReport{report.violations});
  return j;
}

nlohmann::json hypothesis_json(const HypothesisResult& h) {
  nlohmann::json j;
  j["pass"] = h.pass;
  j["group"] = h.group;
  if (h.witness) {
    j["witness"] = h.witness->to_string();
    j["witness_value"] = h.witness->value;
  }
  return j;
}

nlohmann::json report_json(const ConvergenceReport& report) {
  nlohmann::json j;
  j["theorem"] = report.theorem;
  j["system"] = report.system;
  j["observables"] = report.observables;
  j["sample_set"] = report.sample_set;
  j["hypothesis"] = hypothesis_json(report.hypothesis);
  j["ran"] = report.ran;
  auto rows = nlohmann::json::array();
  for (const auto& r : report.rows) rows.push_back({{"N", r.N}, {"distance", r.distance}});
  j["rows"] = rows;
  j["tol"] = report.tol;
  j["verdict"] = report.verdict ? "pass" : "fail";
  if (!report.extras.empty()) j["extras"] = report.extras;
  return j;
}

std::string report_text(const ConvergenceReport& report) {
  std::string out;
  char buf[160];
  out += "theorem     " + report.theorem + "\n";
  out += "system      " + report.system + "\n";
  out += "observables ";
  for (std::size_t i = 0; i < report.observables.size(); ++i) out += (i ? " " : "") + report.observables[i];
  out += "\nsamples     " + report.sample_set + "\n";
  out += "hypothesis  sigma(T) meets " + report.hypothesis.group + " only in 0: ";
  out += report.hypothesis.pass ? "pass" : "FAIL (witness " + report.hypothesis.witness->to_string() + ")";
  out += "\n";
  if (!report.ran) return out + "not run (hypothesis failed; use --force to run anyway)\n";
  std::snprintf(buf, sizeof buf, "%12s  %22s  %10s\n", "N", "distance", "seconds");
  out += buf;
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%12llu  %22.17g  %10.3f\n", static_cast<unsigned long long>(r.N), r.distance,
                  r.runtime_seconds);
    out += buf;
  }
  for (const auto& [k, v] : report.extras) out += k + " = " + format_real(v) + "\n";
  std::snprintf(buf, sizeof buf, "verdict     %s (tol %g)\n", report.verdict ? "pass" : "fail", report.tol);
  return out + buf;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace ergolab
