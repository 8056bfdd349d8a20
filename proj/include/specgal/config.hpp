#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "specgal/galerkin.hpp"
#include "specgal/pipeline.hpp"

namespace specgal::config {

enum class OutputFormat { csv, json };

struct ExperimentConfig {
  problems::ProblemSpec problem;
  pipeline::Mode mode = pipeline::Mode::direct;
  galerkin::SpectralWindow window;
  std::vector<int> coarse_levels;
  std::vector<int> fine_levels;
  bool crossed = false;                   // "pairing": "paired" (zip) or "crossed"
  std::optional<double> cluster_radius;
  double im_threshold = 0.5;
  std::vector<double> targets;            // empty -> reference spectrum in window
  bool fine_stage_one = true;
  std::filesystem::path output = "out";
  OutputFormat format = OutputFormat::csv;
  int jobs = 1;
  std::string name = "experiment";

  // Expanded (coarse, fine) pairs in deterministic order.
  std::vector<std::pair<int, int>> level_pairs() const;
};

ExperimentConfig parse_file(const std::filesystem::path& path);
ExperimentConfig parse_string(const std::string& json_text);

std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);

}  // namespace specgal::config
