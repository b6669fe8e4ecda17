#include "flatcal/flatcal.h"

#include <cstring>
#include <memory>
#include <string>

#include "common/errors.h"
#include "geometry/pullback.h"
#include "runner/config.h"
#include "runner/experiments.h"

struct flatcal_pullback {
  std::unique_ptr<flatcal::PullbackMap> map;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return FLATCAL_OK;
  } catch (const flatcal::validation_error& e) {
    g_last_error = e.what();
    return FLATCAL_EINVAL;
  } catch (const flatcal::numeric_error& e) {
    g_last_error = e.what();
    return FLATCAL_ENUMERIC;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FLATCAL_ENUMERIC;
  }
}

void check_handle(const flatcal_pullback* map, const double* data, int dim, int expected) {
  if (!map || !map->map) throw flatcal::validation_error("null pullback handle");
  if (!data) throw flatcal::validation_error("null coordinate pointer");
  if (dim != expected)
    throw flatcal::validation_error("dimension mismatch: expected " + std::to_string(expected));
}

}  // namespace

extern "C" {

const char* flatcal_version(void) { return flatcal::version_string(); }

const char* flatcal_last_error(void) { return g_last_error.c_str(); }

int flatcal_pullback_create(const char* kind, double eps, double lambda, double radius, int dim,
                            flatcal_pullback** out) {
  return guarded([&] {
    if (!kind || !out) throw flatcal::validation_error("null argument");
    auto graph = flatcal::make_boundary(kind, eps, lambda, radius, dim);
    auto handle = std::make_unique<flatcal_pullback>();
    handle->map = std::make_unique<flatcal::PullbackMap>(graph);
    *out = handle.release();
  });
}

void flatcal_pullback_destroy(flatcal_pullback* map) { delete map; }

int flatcal_rho(const flatcal_pullback* map, const double* x, int dim, double* out) {
  return guarded([&] {
    check_handle(map, x, dim, map && map->map ? map->map->dim() : dim);
    if (!out) throw flatcal::validation_error("null output pointer");
    *out = map->map->rho(x);
  });
}

int flatcal_psi(const flatcal_pullback* map, const double* x, int dim, double* y) {
  return guarded([&] {
    check_handle(map, x, dim, map && map->map ? map->map->dim() : dim);
    if (!y) throw flatcal::validation_error("null output pointer");
    map->map->psi(x, y);
  });
}

int flatcal_psi_inverse(const flatcal_pullback* map, const double* y, int dim, double* x) {
  return guarded([&] {
    check_handle(map, y, dim, map && map->map ? map->map->dim() : dim);
    if (!x) throw flatcal::validation_error("null output pointer");
    map->map->psi_inverse(y, x);
  });
}

int flatcal_h2(const flatcal_pullback* map, double tau, const double* xt, int lat_dim,
               double* out) {
  return guarded([&] {
    if (!map || !map->map) throw flatcal::validation_error("null pullback handle");
    if (!xt || !out) throw flatcal::validation_error("null argument");
    if (lat_dim != map->map->dim() - 1)
      throw flatcal::validation_error("lateral dimension mismatch");
    *out = map->map->h2(tau, xt);
  });
}

int flatcal_seminorm(const flatcal_pullback* map, double* out) {
  return guarded([&] {
    if (!map || !map->map) throw flatcal::validation_error("null pullback handle");
    if (!out) throw flatcal::validation_error("null output pointer");
    *out = map->map->full_seminorm();
  });
}

int flatcal_list_experiments(char* buf, size_t len) {
  std::string joined;
  for (const auto& name : flatcal::experiment_names()) {
    joined += name;
    joined += "\n";
  }
  if (buf && len > 0) {
    size_t n = std::min(len - 1, joined.size());
    std::memcpy(buf, joined.data(), n);
    buf[n] = '\0';
  }
  return (int)joined.size() + 1;
}

int flatcal_run_experiment(const char* config_path, const char* out_dir, int threads,
                           uint64_t seed) {
  return guarded([&] {
    if (!config_path || !out_dir) throw flatcal::validation_error("null argument");
    flatcal::Config cfg = flatcal::Config::parse_file(config_path);
    flatcal::run_experiment(cfg, out_dir, threads, seed);
  });
}

}  // extern "C"
