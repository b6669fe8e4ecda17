#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flatcal/flatcal.h"

int main(int argc, char** argv) {
  CLI::App app{"numerical toolkit for boundary-flattening pullbacks"};
  app.require_subcommand(1);

  std::string config, out_dir = "out";
  int threads = 0;
  uint64_t seed = 0;
  CLI::App* run = app.add_subcommand("run", "run the experiment named in a config file");
  run->add_option("config", config, "path to the config file")->required();
  run->add_option("-o,--output-dir", out_dir, "directory for CSV output and the manifest");
  run->add_option("-t,--threads", threads, "worker threads (overrides run.threads)");
  run->add_option("-s,--seed", seed, "rng seed (overrides run.seed)");
  CLI::App* list = app.add_subcommand("list", "print the available experiment names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : FLATCAL_EINVAL;
  }

  if (list->parsed()) {
    int need = flatcal_list_experiments(nullptr, 0);
    std::vector<char> buf(need > 0 ? (size_t)need : 1);
    flatcal_list_experiments(buf.data(), buf.size());
    std::fputs(buf.data(), stdout);
    return FLATCAL_OK;
  }

  int rc = flatcal_run_experiment(config.c_str(), out_dir.c_str(), threads, seed);
  if (rc != FLATCAL_OK) std::fprintf(stderr, "flatcal: %s\n", flatcal_last_error());
  return rc;
}
