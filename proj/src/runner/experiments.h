#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "runner/config.h"

namespace flatcal {

const char* version_string();

std::vector<std::string> experiment_names();

// runs cfg's run.experiment; writes its CSV files plus manifest.txt into
// out_dir. threads <= 0 and seed == 0 defer to run.threads / run.seed.
void run_experiment(const Config& cfg, const std::string& out_dir, int threads, uint64_t seed);

}  // namespace flatcal
