// Command-line front end: sample paths, solve, run convergence studies and
// the Fourier-integral check. Exit codes: 0 ok, 2 config error, 3 domain
// error, 4 selftest failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "goupillaud/error.hpp"
#include "goupillaud/experiment.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kDomainError = 3;
constexpr int kSelfTestFailure = 4;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> workers;
};

goupillaud::ExperimentConfig resolve(const CommonFlags& flags) {
  goupillaud::ExperimentConfig cfg =
      flags.config.empty() ? goupillaud::ExperimentConfig{} : goupillaud::load_config(flags.config);
  if (flags.seed) cfg.master_seed = *flags.seed;
  if (flags.out) cfg.output_dir = *flags.out;
  if (flags.workers) {
    if (*flags.workers < 1) throw goupillaud::ConfigError("--workers", 0, "must be >= 1");
    cfg.workers = *flags.workers;
  }
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transport in stochastic Goupillaud media"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "key=value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "master seed (overrides the config)");
    sub->add_option("--out", flags.out, "output directory (overrides the config)");
    sub->add_option("--workers", flags.workers, "worker threads for Monte Carlo replicas");
  };

  auto* sample = app.add_subcommand("sample-path", "sample one driver path and write it to disk");
  auto* solve = app.add_subcommand("solve", "write U(t, .) for the finest level and the limit");
  auto* converge = app.add_subcommand("converge", "Monte Carlo L^p error table and pointwise probes");
  auto* fio = app.add_subcommand("fio-check", "compare the Fourier integral representation with u0(Gamma)");
  auto* figure2 = app.add_subcommand("figure2", "solution snapshots for the Gamma and Poisson presets");
  auto* selftest = app.add_subcommand("selftest", "hand-computed checks on a one-jump path");
  for (auto* sub : {sample, solve, converge, fio, figure2}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (selftest->parsed()) return goupillaud::cmd_selftest(std::cout) == 0 ? 0 : kSelfTestFailure;
    const goupillaud::ExperimentConfig cfg = resolve(flags);
    if (sample->parsed()) goupillaud::cmd_sample_path(cfg, std::cout);
    if (solve->parsed()) goupillaud::cmd_solve(cfg, std::cout);
    if (converge->parsed()) goupillaud::cmd_converge(cfg, std::cout);
    if (fio->parsed()) goupillaud::cmd_fio_check(cfg, std::cout);
    if (figure2->parsed()) goupillaud::cmd_figure2(cfg, std::cout);
  } catch (const goupillaud::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const goupillaud::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainError;
  }
  return 0;
}
