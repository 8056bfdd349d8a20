#include "specgal/reporting.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace specgal::reporting {

namespace {

using nlohmann::ordered_json;

std::string point_tag(const pipeline::RunPoint& p) {
  return "c" + std::to_string(p.coarse_level) + "_f" + std::to_string(p.fine_level);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  return out;
}

ordered_json spectrum_json(const galerkin::Spectrum& s) {
  ordered_json rows = ordered_json::array();
  for (Index i = 0; i < s.pairs.size(); ++i) {
    rows.push_back({{"index", i},
                    {"re", s.pairs.values(i).real()},
                    {"im", s.pairs.values(i).imag()},
                    {"residual", s.pairs.residual_norms(i)}});
  }
  return {{"space_id", s.space_id}, {"hermitian", s.hermitian}, {"values", rows}};
}

ordered_json config_json(const config::ExperimentConfig& cfg) {
  ordered_json j;
  switch (cfg.problem.kind) {
    case problems::ProblemKind::fourier_rank_one:
      j["problem"] = {{"kind", "fourier_rank_one"}};
      break;
    case problems::ProblemKind::block_fem:
      j["problem"] = {{"kind", "block_fem"}};
      break;
    case problems::ProblemKind::synthetic_dense:
      j["problem"] = {{"kind", "synthetic_dense"},
                      {"eigenvalues", cfg.problem.synthetic_eigenvalues},
                      {"seed", cfg.problem.synthetic_seed}};
      break;
  }
  j["name"] = cfg.name;
  j["mode"] = cfg.mode == pipeline::Mode::direct ? "direct" : "inverse";
  j["window"] = {{"a", cfg.window.a}, {"b", cfg.window.b}};
  if (cfg.window.gamma) j["window"]["gamma"] = *cfg.window.gamma;
  j["coarse_levels"] = cfg.coarse_levels;
  j["fine_levels"] = cfg.fine_levels;
  j["pairing"] = cfg.crossed ? "crossed" : "paired";
  if (cfg.cluster_radius) j["cluster"]["radius"] = *cfg.cluster_radius;
  j["cluster"]["im_threshold"] = cfg.im_threshold;
  if (!cfg.targets.empty()) j["targets"] = cfg.targets;
  j["fine_stage_one"] = cfg.fine_stage_one;
  j["format"] = cfg.format == config::OutputFormat::csv ? "csv" : "json";
  return j;
}

}  // namespace

std::string g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_spectrum(const std::filesystem::path& path, const galerkin::Spectrum& s,
                    config::OutputFormat format) {
  auto out = open_out(path);
  if (format == config::OutputFormat::json) {
    out << spectrum_json(s).dump(1) << "\n";
    return;
  }
  out << "index,re,im,residual\n";
  for (Index i = 0; i < s.pairs.size(); ++i)
    out << i << "," << g17(s.pairs.values(i).real()) << "," << g17(s.pairs.values(i).imag())
        << "," << g17(s.pairs.residual_norms(i)) << "\n";
}

void write_clusters(const std::filesystem::path& path, const dissipative::ClusterReport& report,
                    const galerkin::Spectrum& spectrum, config::OutputFormat format) {
  (void)spectrum;
  if (format == config::OutputFormat::json) {
    ordered_json j;
    j["radius"] = report.radius;
    j["im_threshold"] = report.im_threshold;
    j["clusters"] = ordered_json::array();
    for (const auto& c : report.clusters) {
      ordered_json cj{{"target", c.target}, {"multiplicity", c.multiplicity},
                      {"members", c.members}};
      if (c.mean) cj["mean"] = {{"re", c.mean->real()}, {"im", c.mean->imag()}};
      if (c.localization)
        cj["localization"] = {{"lo", c.localization->lo}, {"hi", c.localization->hi}};
      j["clusters"].push_back(cj);
    }
    j["unassigned"] = report.unassigned;
    j["unexpected_nonreal"] = report.unexpected_nonreal;
    j["suspected_echoes"] = report.suspected_echoes;
    open_out(path) << j.dump(1) << "\n";
    return;
  }
  auto out = open_out(path);
  out << "target,multiplicity,mean_re,mean_im,loc_lo,loc_hi,members\n";
  for (const auto& c : report.clusters) {
    out << g17(c.target) << "," << c.multiplicity << ",";
    if (c.mean) out << g17(c.mean->real()) << "," << g17(c.mean->imag());
    else out << ",";
    out << ",";
    if (c.localization) out << g17(c.localization->lo) << "," << g17(c.localization->hi);
    else out << ",";
    out << ",";
    for (size_t i = 0; i < c.members.size(); ++i)
      out << c.members[i] << (i + 1 == c.members.size() ? "" : ";");
    out << "\n";
  }
}

void write_pollution(const std::filesystem::path& path,
                     const std::vector<dissipative::PollutionVerdict>& verdicts,
                     config::OutputFormat format) {
  if (format == config::OutputFormat::json) {
    ordered_json rows = ordered_json::array();
    for (const auto& v : verdicts) {
      ordered_json r{{"value", v.value}, {"verdict", v.genuine ? "genuine" : "polluted"}};
      if (v.estimate) r["estimate"] = *v.estimate;
      if (v.interval) r["interval"] = {{"lo", v.interval->lo}, {"hi", v.interval->hi}};
      rows.push_back(r);
    }
    open_out(path) << rows.dump(1) << "\n";
    return;
  }
  auto out = open_out(path);
  out << "value,verdict,estimate,interval_lo,interval_hi\n";
  for (const auto& v : verdicts) {
    out << g17(v.value) << "," << (v.genuine ? "genuine" : "polluted") << ",";
    if (v.estimate) out << g17(*v.estimate);
    out << ",";
    if (v.interval) out << g17(v.interval->lo) << "," << g17(v.interval->hi);
    else out << ",";
    out << "\n";
  }
}

RatesTable build_rates(const std::vector<pipeline::RunPoint>& points) {
  RatesTable table;
  if (points.empty()) return table;
  const auto& targets = points.front().targets;
  for (double target : targets) {
    for (const auto& p : points) {
      RatesTable::Row row;
      row.target = target;
      row.abscissa = double(p.fine_level);
      row.coarse_level = p.coarse_level;
      row.fine_level = p.fine_level;
      row.stage_two_dist = p.stage_two_distance(target);
      if (p.fine_stage_one) row.stage_one_dist = p.fine_stage_one_distance(target);
      table.rows.push_back(row);
    }
  }
  const auto fittable = [](const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 4) return false;
    std::vector<double> xs;
    for (const auto& [x, y] : pts) xs.push_back(x);
    std::sort(xs.begin(), xs.end());
    return std::unique(xs.begin(), xs.end()) - xs.begin() >= 4;
  };
  for (double target : targets) {
    std::vector<std::pair<double, double>> two, one;
    for (const auto& row : table.rows) {
      if (row.target != target) continue;
      if (row.stage_two_dist > 0) two.push_back({row.abscissa, row.stage_two_dist});
      if (row.stage_one_dist && *row.stage_one_dist > 0)
        one.push_back({row.abscissa, *row.stage_one_dist});
    }
    if (fittable(two)) table.fits.push_back({target, "stage_two", analysis::fit_rate(two)});
    if (fittable(one)) table.fits.push_back({target, "stage_one", analysis::fit_rate(one)});
  }
  return table;
}

void write_rates(const std::filesystem::path& dir, const RatesTable& table,
                 config::OutputFormat format) {
  if (format == config::OutputFormat::json) {
    ordered_json j;
    j["rows"] = ordered_json::array();
    for (const auto& r : table.rows) {
      ordered_json row{{"target", r.target},        {"abscissa", r.abscissa},
                       {"coarse_level", r.coarse_level}, {"fine_level", r.fine_level},
                       {"stage_two_dist", r.stage_two_dist}};
      if (r.stage_one_dist) row["stage_one_dist"] = *r.stage_one_dist;
      j["rows"].push_back(row);
    }
    j["fits"] = ordered_json::array();
    for (const auto& f : table.fits)
      j["fits"].push_back({{"target", f.target},
                           {"series", f.series},
                           {"slope", f.fit.slope},
                           {"intercept", f.fit.intercept},
                           {"r_squared", f.fit.r_squared}});
    open_out(dir / "rates.json") << j.dump(1) << "\n";
    return;
  }
  {
    auto out = open_out(dir / "rates.csv");
    out << "target,abscissa,coarse_level,fine_level,stage_two_dist,stage_one_dist\n";
    for (const auto& r : table.rows) {
      out << g17(r.target) << "," << g17(r.abscissa) << "," << r.coarse_level << ","
          << r.fine_level << "," << g17(r.stage_two_dist) << ",";
      if (r.stage_one_dist) out << g17(*r.stage_one_dist);
      out << "\n";
    }
  }
  auto out = open_out(dir / "fits.csv");
  out << "target,series,slope,intercept,r_squared,points\n";
  for (const auto& f : table.fits)
    out << g17(f.target) << "," << f.series << "," << g17(f.fit.slope) << ","
        << g17(f.fit.intercept) << "," << g17(f.fit.r_squared) << "," << f.fit.levels.size()
        << "\n";
}

RatesTable read_rates_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot read " + path.string());
  RatesTable table;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    RatesTable::Row row;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double stage_one = 0;
    if (!(ss >> row.target >> row.abscissa >> row.coarse_level >> row.fine_level >>
          row.stage_two_dist))
      throw Error(Errc::io_error, "malformed rates row: " + line);
    if (ss >> stage_one) row.stage_one_dist = stage_one;
    table.rows.push_back(row);
  }
  return table;
}

void run_experiment(const config::ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output / "points");

  const auto pairs = cfg.level_pairs();
  std::vector<pipeline::RunPoint> points(pairs.size());
  std::vector<char> done(pairs.size(), 0);

  pipeline::RunOptions options;
  options.cluster_radius = cfg.cluster_radius;
  options.im_threshold = cfg.im_threshold;
  options.targets = cfg.targets;
  options.fine_stage_one = cfg.fine_stage_one;

  const auto write_point = [&](const pipeline::RunPoint& p) {
    const fs::path dir = cfg.output / "points" / point_tag(p);
    fs::create_directories(dir);
    const char* ext = cfg.format == config::OutputFormat::csv ? ".csv" : ".json";
    write_spectrum(dir / (std::string("stage1") + ext), p.stage_one, cfg.format);
    write_spectrum(dir / (std::string("stage2") + ext), p.stage_two, cfg.format);
    if (p.fine_stage_one)
      write_spectrum(dir / (std::string("fine_stage1") + ext), *p.fine_stage_one, cfg.format);
    write_clusters(dir / (std::string("clusters") + ext), p.clusters, p.stage_two, cfg.format);
    write_pollution(dir / (std::string("pollution") + ext), p.pollution, cfg.format);
  };

  std::string failure;
  std::mutex mutex;
  std::atomic<size_t> next{0};
  const int workers = std::max(1, std::min<int>(cfg.jobs, int(pairs.size())));

  const auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= pairs.size()) return;
      {
        std::lock_guard<std::mutex> lock(mutex);
        if (!failure.empty()) return;
      }
      try {
        auto point = pipeline::run_two_stage(cfg.problem, cfg.window, pairs[i].first,
                                             pairs[i].second, cfg.mode, options);
        write_point(point);
        std::lock_guard<std::mutex> lock(mutex);
        points[i] = std::move(point);
        done[i] = 1;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mutex);
        if (failure.empty())
          failure = "point (" + std::to_string(pairs[i].first) + ", " +
                    std::to_string(pairs[i].second) + "): " + e.what();
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < workers; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  std::vector<pipeline::RunPoint> completed;
  for (size_t i = 0; i < pairs.size(); ++i)
    if (done[i]) completed.push_back(points[i]);

  RatesTable rates;
  if (failure.empty() && completed.size() >= 2) {
    rates = build_rates(completed);
    write_rates(cfg.output, rates, cfg.format);
  }

  ordered_json manifest;
  manifest["schema"] = "specgal-run v1";
  manifest["complete"] = failure.empty();
  if (!failure.empty()) manifest["error"] = failure;
  manifest["config"] = config_json(cfg);
  manifest["points"] = ordered_json::array();
  for (size_t i = 0; i < pairs.size(); ++i) {
    ordered_json pj;
    pj["coarse_level"] = pairs[i].first;
    pj["fine_level"] = pairs[i].second;
    pj["computed"] = bool(done[i]);
    if (done[i]) {
      const auto& p = points[i];
      pj["tag"] = point_tag(p);
      pj["coarse_dim"] = p.coarse_dim;
      pj["fine_dim"] = p.fine_dim;
      pj["q_rank"] = p.q_rank;
      pj["targets"] = p.targets;
      pj["selected"] = p.selected;
      pj["unassigned"] = p.clusters.unassigned;
      pj["unexpected_nonreal"] = p.clusters.unexpected_nonreal;
      pj["suspected_echoes"] = p.clusters.suspected_echoes;
    }
    manifest["points"].push_back(pj);
  }
  manifest["fits"] = ordered_json::array();
  for (const auto& f : rates.fits)
    manifest["fits"].push_back({{"target", f.target},
                                {"series", f.series},
                                {"slope", f.fit.slope},
                                {"intercept", f.fit.intercept},
                                {"r_squared", f.fit.r_squared}});
  open_out(cfg.output / "manifest.json") << manifest.dump(1) << "\n";

  if (!failure.empty()) throw Error(Errc::invalid_argument, "experiment failed at " + failure);
}

}  // namespace specgal::reporting
