#pragma once

// Run configuration and report serialization. Configs and reports are JSON;
// plot data is CSV.

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ned/reducibility.hpp"

namespace ned {

enum class ReportFormat { Json, Csv };

struct RunConfig {
  MatrixSequence system;
  Window window{};
  std::optional<std::pair<double, double>> gamma_bracket;
  double bisect_tol = 1e-3;
  std::vector<double> alpha_grid = FitConfig::default_alpha_grid();
  std::vector<double> eps_grid = FitConfig::default_eps_grid();
  long horizon = 20;
  ExponentMode exponent = ExponentMode::Absolute;
  double k_cap = 1e12;
  /// Extra fibers on each side of the window for the reduction transform.
  long reduce_margin = 20;
  std::string output_dir = ".";
  ReportFormat report_format = ReportFormat::Json;
  /// Canonical dump of the parsed input, echoed into every report.
  std::string echo;

  FitConfig fit() const;
  SpectrumConfig spectrum() const;
};

/// Throws Error(ParseError) on malformed JSON or schema violations, and the
/// system_core errors for invalid system specs.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

/// {"projector": {"reference_index", "matrix"}, "K", "alpha", "epsilon", "flavor"}
std::string certificate_to_json(const DichotomyCertificate& cert);
/// The projector is re-propagated over `w` from its reference matrix.
DichotomyCertificate certificate_from_json(const std::string& text, const MatrixSequence& sys,
                                           const Window& w);

std::string to_string(Flavor f);

// Reports. `timestamp` is the only field that varies between identical runs.
/// `grid_fit` is the best grid certificate for the same projector, if any.
std::string verify_report(const RunConfig& cfg, const DichotomyCertificate& cert,
                          const ViolationReport& rep,
                          const std::optional<DichotomyCertificate>& grid_fit,
                          const std::string& timestamp);
std::string spectrum_report(const RunConfig& cfg, const SpectrumEstimate& est,
                            const std::optional<CandidateComparison>& cmp,
                            const std::string& timestamp);
std::string reduce_report(const RunConfig& cfg, const SpectrumEstimate& est, const CascadeResult& res,
                          const SimilarityReport& sim, const std::string& timestamp);
std::string bundles_report(const RunConfig& cfg, double gamma, long fiber,
                           const std::optional<BundleBasis>& stable,
                           const std::optional<BundleBasis>& unstable, bool complementary,
                           const std::string& error, const std::string& timestamp);

/// gamma,status,stable_dim
std::string scan_csv(const SpectrumEstimate& est);
/// side,k,l,log_norm,log_bound
std::string profile_csv(const DichotomyProfile& profile, const DichotomyCertificate& cert,
                        ExponentMode mode);
/// k,block,row,col,value for every B_k entry inside a block
std::string blocks_csv(const BlockSystem& blocks, const Window& w);
/// Flattens a JSON report into path,value rows.
std::string flatten_csv(const std::string& json_report);

/// UTC time in ISO 8601.
std::string utc_timestamp();

}  // namespace ned
