#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "blochguide/dense_eigen.hpp"
#include "blochguide/errors.hpp"
#include "blochguide/pipeline.hpp"

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<double> delta;
  int threads = 1;
  std::string log_level = "warn";
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config, "JSON run configuration (defaults when omitted)");
  cmd->add_option("--out", opt.out, "output directory")->capture_default_str();
  cmd->add_option("--delta", opt.delta, "override the damping delta");
  cmd->add_option("--threads", opt.threads, "BLAS threads")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--log-level", opt.log_level, "trace, debug, info, warn, error, off")->capture_default_str();
}

blochguide::RunConfig make_config(const Options& opt) {
  blochguide::RunConfig cfg = opt.config.empty() ? blochguide::RunConfig{} : blochguide::load_config(opt.config);
  if (opt.delta) cfg.delta = *opt.delta;
  cfg.validate();
  return cfg;
}

int run(const std::string& command, const Options& opt) {
  spdlog::set_level(spdlog::level::from_str(opt.log_level));
  blochguide::set_blas_threads(opt.threads);
  const auto cfg = make_config(opt);
  const std::filesystem::path out = opt.out;

  if (command == "band") {
    const auto r = blochguide::run_band(cfg, out);
    std::printf("bands: %zu rows, selected: %zu (+) %zu (-)\n", r.bands.size(), r.plus.size(), r.minus.size());
  } else if (command == "solve") {
    const auto r = blochguide::run_solve(cfg, out);
    std::printf("unknowns: %d hats + %ld Bloch, residual %.3e, negative refraction: %s\n", r.n_hat,
                static_cast<long>(r.solution.alpha_plus.size() + r.solution.alpha_minus.size()), r.solution.residual,
                r.diagnostics.negative_refraction ? "yes" : "no");
    if (r.focusing) std::printf("focusing ratio: %.4f\n", r.focusing->ratio);
  } else if (command == "validate") {
    const auto r = blochguide::run_validate(cfg, out);
    std::printf("a* = %.6f, |j_in|/|j_out| = %.6f, R = %.6f (ref %.6f), T = %.6f (ref %.6f)\n", r.a_star,
                r.rt.snell_ratio, r.rt.alpha_refl, r.rt.R_ref, r.rt.alpha_out, r.rt.T_ref);
  } else {
    const auto r = blochguide::run_sweep(cfg, out);
    for (const auto& row : r.rows) std::printf("delta %.1e  err_R %.4e  err_T %.4e\n", row.delta, row.rt.err_R, row.rt.err_T);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bloch-wave enriched finite elements for periodic wave-guides"};
  app.require_subcommand(1);
  Options opt;
  for (const char* name : {"band", "solve", "validate", "sweep"}) {
    const char* help = std::string(name) == "band"       ? "band structure and selected Bloch indices"
                       : std::string(name) == "solve"    ? "scattering solve, field and report"
                       : std::string(name) == "validate" ? "homogenized interface check against Snell and Fresnel"
                                                         : "reflection and transmission errors over a delta sweep";
    add_common(app.add_subcommand(name, help), opt);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return run(app.get_subcommands().front()->get_name(), opt);
  } catch (const blochguide::ConfigError& e) {
    spdlog::error("config error: {}", e.what());
    return 2;
  } catch (const blochguide::NumericalError& e) {
    spdlog::error("numerical failure: {}", e.what());
    return 3;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}
