#pragma once

#include <string>

namespace polsim::tools {

struct Options {
  std::string config_path;  // empty: built-in defaults (fig2) or an error
  std::string out_dir = ".";
  bool full_bloch = false;
  int workers = 1;
};

// Each runner writes its CSV set plus manifest.txt into out_dir and prints
// a short summary to stdout.  Failures surface as the polsim exception
// hierarchy; main maps them to exit codes.
void run_fig2(const Options& opt);
void run_propagate(const Options& opt);
void run_store(const Options& opt);
void run_validity(const Options& opt);
void run_oracle(const Options& opt);
void run_sweep(const Options& opt);

}  // namespace polsim::tools
