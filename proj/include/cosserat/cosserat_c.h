#ifndef COSSERAT_C_H
#define COSSERAT_C_H

/* C interface to the Cosserat library. All functions return a status code:
 *   0  success
 *   1  internal failure (I/O, allocation, unexpected state)
 *   2  invalid input or a violated precondition guard
 * csr_last_error() describes the most recent failure on the calling thread;
 * csr_last_error_name() gives the stable guard name (e.g. "AlphaTooLarge").
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define CSR_OK 0
#define CSR_ERR_INTERNAL 1
#define CSR_ERR_INVALID 2

typedef struct csr_field csr_field;

const char* csr_version(void);

const char* csr_last_error(void);
const char* csr_last_error_name(void);

/* Field container ------------------------------------------------------- */

int csr_field_load(const char* path, csr_field** out);
int csr_field_save(const csr_field* f, const char* path);
void csr_field_free(csr_field* f);

int csr_field_dims(const csr_field* f, unsigned* nx, unsigned* ny, unsigned* nz);
int csr_field_spacing(const csr_field* f, double* h);

/* Total energy with material constants (mu1, muc, mu2, lambda, p). */
int csr_field_energy(const csr_field* f, double mu1, double muc, double mu2,
                     double lambda, double p, int threads, double* deformation,
                     double* curvature);

/* Command layer --------------------------------------------------------- */

/* Runs one named pipeline command ("build-boundary", "insert-dipole",
 * "energy", "minimize", "analyze", "export") with a JSON configuration
 * string. Output files are written under out_dir; the run manifest JSON is
 * returned in *manifest_json_out (free with csr_string_free) and also written
 * to out_dir. Deterministic: identical inputs produce identical bytes.
 */
int csr_run_command(const char* command, const char* config_json, const char* out_dir,
                    int threads, int verbose, char** manifest_json_out);

void csr_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* COSSERAT_C_H */
