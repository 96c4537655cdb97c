// polsim: command-line front end for the slow-light polariton toolkit.
//
// Subcommands map one-to-one onto the runners; every runner writes a CSV
// bundle plus manifest.txt into --out and prints a short summary.

#include <cstdio>
#include <exception>
#include <functional>
#include <string>

#include <CLI11.hpp>

#include "polsim/errors.hpp"
#include "runners.hpp"

namespace {

using polsim::tools::Options;

struct Command {
  const char* name;
  const char* help;
  void (*run)(const Options&);
  bool takes_full_bloch = false;
  bool takes_workers = false;
};

const Command commands[] = {
    {"fig2", "shape-preserving transport under a control ramp (CSV bundle)",
     polsim::tools::run_fig2, true, false},
    {"propagate", "integrate the coupled field/atom equations for one scenario",
     polsim::tools::run_propagate},
    {"store", "storage and retrieval figures for one scenario",
     polsim::tools::run_store},
    {"validity", "adiabaticity and storage-limit diagnostics for one scenario",
     polsim::tools::run_validity},
    {"oracle", "few-atom exact checks: dark residuals, commutators, transfers",
     polsim::tools::run_oracle},
    {"sweep", "repeat the storage scenario while varying one parameter",
     polsim::tools::run_sweep, false, true},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slow-light polariton simulation toolkit"};
  app.require_subcommand(1);

  Options opt;
  std::function<void(const Options&)> selected;

  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", opt.config_path, "INI-style scenario file");
    sub->add_option("--out", opt.out_dir, "output directory (default .)");
    if (c.takes_full_bloch)
      sub->add_flag("--full-bloch", opt.full_bloch,
                    "also integrate the full equations and report the deviation");
    if (c.takes_workers)
      sub->add_option("--workers", opt.workers, "parallel runs (default 1)");
    sub->callback([&selected, &c] { selected = c.run; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version are successes; any other parse problem is a
    // configuration error as far as callers are concerned
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    selected(opt);
  } catch (const polsim::config_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const polsim::numerical_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const polsim::domain_overflow& e) {
    std::fprintf(stderr, "out of range: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected failure: %s\n", e.what());
    return 1;
  }
  return 0;
}
