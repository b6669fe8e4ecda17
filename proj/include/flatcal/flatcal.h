#ifndef FLATCAL_H
#define FLATCAL_H

/* C interface to the boundary-flattening toolkit. All functions return
 * FLATCAL_OK on success; on failure they return an error code and leave a
 * message readable through flatcal_last_error() on the calling thread. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define FLATCAL_OK 0
#define FLATCAL_EINVAL 2
#define FLATCAL_ENUMERIC 3

const char* flatcal_version(void);

/* message from the most recent failing call on this thread ("" if none) */
const char* flatcal_last_error(void);

typedef struct flatcal_pullback flatcal_pullback;

/* kind: "zero", "bump", or "cone_smoothed"; dim >= 2 counts the normal axis */
int flatcal_pullback_create(const char* kind, double eps, double lambda, double radius, int dim,
                            flatcal_pullback** out);
void flatcal_pullback_destroy(flatcal_pullback* map);

/* x and y carry dim entries; xt carries lat_dim = dim - 1 entries */
int flatcal_rho(const flatcal_pullback* map, const double* x, int dim, double* out);
int flatcal_psi(const flatcal_pullback* map, const double* x, int dim, double* y);
int flatcal_psi_inverse(const flatcal_pullback* map, const double* y, int dim, double* x);
int flatcal_h2(const flatcal_pullback* map, double tau, const double* xt, int lat_dim,
               double* out);
int flatcal_seminorm(const flatcal_pullback* map, double* out);

/* writes newline-separated experiment names into buf (truncating to len) and
 * returns the length required to hold them all, terminator included */
int flatcal_list_experiments(char* buf, size_t len);

/* runs the experiment named by run.experiment in the config file; writes CSV
 * output and manifest.txt into out_dir. threads <= 0 and seed == 0 defer to
 * the config. Returns exit-code semantics: 0, 2 (invalid), 3 (numeric). */
int flatcal_run_experiment(const char* config_path, const char* out_dir, int threads,
                           uint64_t seed);

#ifdef __cplusplus
}
#endif

#endif
