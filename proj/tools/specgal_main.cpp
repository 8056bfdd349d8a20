// Experiment runner for the two-stage dissipative Galerkin method.
//
// Exit codes: 0 ok, 1 config/usage error, 2 numerical failure.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "specgal/matrix_io.hpp"
#include "specgal/reporting.hpp"

namespace {

int exit_code_for(const specgal::Error& e) {
  switch (e.code()) {
    case specgal::Errc::config_error:
    case specgal::Errc::io_error:
      return 1;
    default:
      return 2;
  }
}

int do_run(specgal::config::ExperimentConfig cfg, const std::string& output, int jobs) {
  if (!output.empty()) cfg.output = output;
  if (jobs > 0) cfg.jobs = jobs;
  specgal::reporting::run_experiment(cfg);
  std::printf("wrote %s/manifest.json\n", cfg.output.string().c_str());
  return 0;
}

int do_import_check(const std::string& path) {
  const auto fm = specgal::io::import_matrices(path);
  std::printf("%s: ok (dim %lld, a_hat %s; t_hat Hermitian, mass positive-definite)\n",
              path.c_str(), static_cast<long long>(fm.dim), fm.a_hat ? "present" : "absent");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"specgal: two-stage Galerkin eigenvalue experiments"};
  app.require_subcommand(1);

  std::string config_path, matrix_path, preset_name, output;
  int jobs = 0;

  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--output", output, "override the output directory");
  run->add_option("--jobs", jobs, "parallel workers for sweep points");

  auto* import_check = app.add_subcommand("import-check", "validate a matrix container file");
  import_check->add_option("file", matrix_path, "matrix file")->required();

  auto* preset = app.add_subcommand("preset", "named experiment presets");
  auto* preset_list = preset->add_subcommand("list", "list preset names");
  auto* preset_run = preset->add_subcommand("run", "run a preset");
  preset_run->add_option("name", preset_name, "preset name")->required();
  preset_run->add_option("--output", output, "override the output directory");
  preset_run->add_option("--jobs", jobs, "parallel workers for sweep points");
  preset->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return do_run(specgal::config::parse_file(config_path), output, jobs);
    if (*import_check) return do_import_check(matrix_path);
    if (*preset_list) {
      for (const auto& name : specgal::config::preset_names()) std::printf("%s\n", name.c_str());
      return 0;
    }
    if (*preset_run)
      return do_run(specgal::config::preset(preset_name), output, jobs);
  } catch (const specgal::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
