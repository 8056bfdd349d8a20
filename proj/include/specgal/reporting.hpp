#pragma once

#include <filesystem>
#include <string>

#include "specgal/config.hpp"

namespace specgal::reporting {

// 17 significant digits, enough that re-parsing is value-exact.
std::string g17(double x);

void write_spectrum(const std::filesystem::path& path, const galerkin::Spectrum& spectrum,
                    config::OutputFormat format);
void write_clusters(const std::filesystem::path& path, const dissipative::ClusterReport& report,
                    const galerkin::Spectrum& spectrum, config::OutputFormat format);
void write_pollution(const std::filesystem::path& path,
                     const std::vector<dissipative::PollutionVerdict>& verdicts,
                     config::OutputFormat format);

struct RatesTable {
  struct Row {
    double target = 0;
    double abscissa = 0;  // fine level
    int coarse_level = 0;
    int fine_level = 0;
    double stage_two_dist = 0;
    std::optional<double> stage_one_dist;
  };
  std::vector<Row> rows;
  // One fit per (target, series) with >= 4 points.
  struct Fit {
    double target = 0;
    std::string series;  // "stage_two" or "stage_one"
    analysis::RateFit fit;
  };
  std::vector<Fit> fits;
};

RatesTable build_rates(const std::vector<pipeline::RunPoint>& points);
void write_rates(const std::filesystem::path& dir, const RatesTable& table,
                 config::OutputFormat format);

// Re-read a rates table emitted by write_rates (csv variant) and refit; used to
// check that the emitted files carry no hidden state.
RatesTable read_rates_csv(const std::filesystem::path& path);

// Run a whole experiment: compute every level pair, write per-point artifacts,
// the rates table, and a manifest. Throws on failure after flushing a manifest
// with complete=false.
void run_experiment(const config::ExperimentConfig& cfg);

}  // namespace specgal::reporting
