#pragma once

// CSV and JSON serialization. Floats use 17 significant digits; every file
// starts with `# ` comment lines carrying provenance.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ergolab/correlate.hpp"
#include "ergolab/gowers.hpp"
#include "ergolab/spectral.hpp"
#include "ergolab/verify.hpp"
#include "json.hpp"

namespace ergolab {

std::string comment_block(const std::vector<std::string>& lines);

std::string series_csv(const CorrelationSeries& series, const std::vector<std::string>& header);
std::string empirical_csv(const EmpiricalFunction& g, const std::vector<std::string>& header);
std::string scan_csv(const SpectrumScan& scan, const std::vector<std::string>& header);
std::string convergence_csv(const ConvergenceReport& report, const std::vector<std::string>& header);
std::string wtrick_csv(std::span<const WTrickRow> rows, const std::vector<std::string>& header);

nlohmann::json peaks_json(const PeakReport& peaks);
nlohmann::json containment_json(const ContainmentReport& report);
nlohmann::json hypothesis_json(const HypothesisResult& h);
/// Machine-readable report; runtimes are left out so that reruns compare equal.
nlohmann::json report_json(const ConvergenceReport& report);
/// Aligned table for humans, including runtimes.
std::string report_text(const ConvergenceReport& report);

/// Writes `content` to `path`; "-" or "" means stdout.
void write_output(const std::string& path, const std::string& content);

}  // namespace ergolab
