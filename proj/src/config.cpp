#include "specgal/config.hpp"

#include <fstream>

#include <json.hpp>

namespace specgal::config {

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

problems::ProblemSpec parse_problem(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "fourier_rank_one") return problems::ProblemSpec::fourier_rank_one();
  if (kind == "block_fem") return problems::ProblemSpec::block_fem();
  if (kind == "synthetic_dense") {
    if (!j.contains("eigenvalues"))
      throw Error(Errc::config_error, "synthetic_dense problem requires 'eigenvalues'");
    return problems::ProblemSpec::synthetic_dense(
        j.at("eigenvalues").get<std::vector<double>>(),
        j.value("seed", std::uint64_t{0}));
  }
  throw Error(Errc::config_error, "unknown problem kind '" + kind + "'");
}

ExperimentConfig parse_json(const json& j) {
  ExperimentConfig cfg;
  try {
    cfg.problem = parse_problem(j.at("problem"));
    cfg.name = j.value("name", std::string("experiment"));

    const std::string mode = j.value("mode", std::string("direct"));
    if (mode == "direct")
      cfg.mode = pipeline::Mode::direct;
    else if (mode == "inverse")
      cfg.mode = pipeline::Mode::inverse;
    else
      throw Error(Errc::config_error, "mode must be 'direct' or 'inverse'");

    const json& w = j.at("window");
    cfg.window.a = w.at("a").get<double>();
    cfg.window.b = w.at("b").get<double>();
    if (w.contains("gamma")) cfg.window.gamma = w.at("gamma").get<double>();
    if (!(cfg.window.a < cfg.window.b))
      throw Error(Errc::config_error, "window requires a < b");
    if (cfg.mode == pipeline::Mode::inverse && !cfg.window.gamma)
      throw Error(Errc::config_error, "inverse mode requires window.gamma");

    cfg.coarse_levels = j.at("coarse_levels").get<std::vector<int>>();
    cfg.fine_levels = j.at("fine_levels").get<std::vector<int>>();
    if (cfg.coarse_levels.empty() || cfg.fine_levels.empty())
      throw Error(Errc::config_error, "coarse_levels and fine_levels must be non-empty");

    const std::string pairing = j.value("pairing", std::string("paired"));
    if (pairing == "crossed")
      cfg.crossed = true;
    else if (pairing == "paired")
      cfg.crossed = false;
    else
      throw Error(Errc::config_error, "pairing must be 'paired' or 'crossed'");
    if (!cfg.crossed && cfg.coarse_levels.size() != cfg.fine_levels.size()) {
      if (cfg.coarse_levels.size() == 1) {
        cfg.coarse_levels.assign(cfg.fine_levels.size(), cfg.coarse_levels.front());
      } else {
        throw Error(Errc::config_error, "paired sweeps need equal-length level lists");
      }
    }

    if (j.contains("cluster")) {
      const json& c = j.at("cluster");
      if (c.contains("radius")) cfg.cluster_radius = c.at("radius").get<double>();
      cfg.im_threshold = c.value("im_threshold", 0.5);
    }
    if (j.contains("targets")) cfg.targets = j.at("targets").get<std::vector<double>>();
    cfg.fine_stage_one = j.value("fine_stage_one", true);
    cfg.output = j.value("output", std::string("out"));
    const std::string fmt = j.value("format", std::string("csv"));
    if (fmt == "csv")
      cfg.format = OutputFormat::csv;
    else if (fmt == "json")
      cfg.format = OutputFormat::json;
    else
      throw Error(Errc::config_error, "format must be 'csv' or 'json'");
    cfg.jobs = j.value("jobs", 1);
    if (cfg.jobs < 1) throw Error(Errc::config_error, "jobs must be >= 1");
  } catch (const json::exception& e) {
    throw Error(Errc::config_error, std::string("config: ") + e.what());
  }
  return cfg;
}

}  // namespace

std::vector<std::pair<int, int>> ExperimentConfig::level_pairs() const {
  std::vector<std::pair<int, int>> pairs;
  if (crossed) {
    for (int c : coarse_levels)
      for (int f : fine_levels) pairs.emplace_back(c, f);
  } else {
    for (size_t i = 0; i < coarse_levels.size(); ++i)
      pairs.emplace_back(coarse_levels[i], fine_levels[i]);
  }
  return pairs;
}

ExperimentConfig parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::config_error, "cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::config_error, "config is not valid JSON: " + std::string(e.what()));
  }
  return parse_json(j);
}

ExperimentConfig parse_string(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::config_error, "config is not valid JSON: " + std::string(e.what()));
  }
  return parse_json(j);
}

std::vector<std::string> preset_names() {
  return {"fourier-gap-scan", "fourier-rates", "fourier-rates-wide", "fem-resolvent-window",
          "fem-resolvent-rates"};
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig cfg;
  cfg.name = name;
  cfg.output = "out/" + name;

  if (name == "fourier-gap-scan") {
    // Coarse dim-51 window scan solved on fine dims 101, 401, 1601 with
    // Delta = (-pi, pi).
    cfg.problem = problems::ProblemSpec::fourier_rank_one();
    cfg.mode = pipeline::Mode::direct;
    cfg.window = {-kPi, kPi, std::nullopt};
    cfg.coarse_levels = {25};
    cfg.fine_levels = {50, 200, 800};
    cfg.crossed = true;
    return cfg;
  }
  if (name == "fourier-rates") {
    // Paired levels (2k+1, 4k+1), k = 50..500.
    cfg.problem = problems::ProblemSpec::fourier_rank_one();
    cfg.mode = pipeline::Mode::direct;
    cfg.window = {-kPi, kPi, std::nullopt};
    for (int k : {50, 100, 200, 300, 500}) {
      cfg.coarse_levels.push_back(2 * k + 1);
      cfg.fine_levels.push_back(4 * k + 1);
    }
    return cfg;
  }
  if (name == "fourier-rates-wide") {
    // Paired levels (2k+1, 20k+1), k = 4..40.
    cfg.problem = problems::ProblemSpec::fourier_rank_one();
    cfg.mode = pipeline::Mode::direct;
    cfg.window = {-kPi, kPi, std::nullopt};
    for (int k = 4; k <= 40; k += 4) {
      cfg.coarse_levels.push_back(2 * k + 1);
      cfg.fine_levels.push_back(20 * k + 1);
    }
    return cfg;
  }
  if (name == "fem-resolvent-window") {
    cfg.problem = problems::ProblemSpec::block_fem();
    cfg.mode = pipeline::Mode::inverse;
    cfg.window = {0.25, 0.9, 0.0};
    cfg.coarse_levels = {49};
    cfg.fine_levels = {576};
    cfg.cluster_radius = 0.3;  // the lifted pollution band passes within 0.36 of 1/2 + i
    return cfg;
  }
  if (name == "fem-resolvent-rates") {
    cfg.problem = problems::ProblemSpec::block_fem();
    cfg.mode = pipeline::Mode::inverse;
    cfg.window = {0.05, 0.2, 0.0};
    cfg.cluster_radius = 0.3;
    for (int n : {9, 19, 39, 79}) {
      cfg.coarse_levels.push_back(n);
      cfg.fine_levels.push_back(2 * n);
    }
    return cfg;
  }
  throw Error(Errc::config_error, "unknown preset '" + name + "'");
}

}  // namespace specgal::config
