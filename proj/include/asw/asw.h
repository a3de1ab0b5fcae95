#ifndef ASW_ASW_H
#define ASW_ASW_H

/* C interface of the asw library.
 *
 * Every operation is reachable through asw_invoke with a command name and a
 * JSON request; the request is validated against the command's schema before
 * dispatch. The result document (or error message) stays owned by the
 * context and is valid until the next call on that context. A context is
 * not thread safe; use one per thread. */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct asw_context asw_context;

typedef enum asw_status {
  ASW_OK = 0,
  ASW_ERR_TOLERANCE = 1,   /* a numerical or stabilization target was missed */
  ASW_ERR_INVALID = 2,     /* malformed JSON, schema violation or bad arguments */
  ASW_ERR_UNSUPPORTED = 3, /* valid request outside the supported regime */
  ASW_ERR_INTERNAL = 4
} asw_status;

asw_context* asw_context_new(void);
void asw_context_free(asw_context* ctx);

/* Context-wide defaults; per-request "counting"/"quadrature" objects override
 * them. Keys: threads, max_work, max_precision, tolerance, node_budget. */
asw_status asw_set_option(asw_context* ctx, const char* key, const char* value);

asw_status asw_invoke(asw_context* ctx, const char* command, const char* request_json);

/* Output of the last successful asw_invoke, "" otherwise. */
const char* asw_result(const asw_context* ctx);
/* Message of the last failure, "" after a success. */
const char* asw_last_error(const asw_context* ctx);

const char* asw_version(void);
/* Request schema of a command, NULL if the command is unknown. */
const char* asw_schema(const char* command);
/* i-th command name in sorted order, NULL past the end. */
const char* asw_command_name(int i);
const char* asw_status_name(asw_status s);

/* Typed shortcuts. Rationals are passed as "p/q" strings, places as a prime
 * or "inf". */
asw_status asw_hilbert_symbol(asw_context* ctx, const char* a, const char* b, const char* place, int* out);
/* nu_p(a1, a2, a3) as a canonical "p/q" string in asw_result. */
asw_status asw_nu_p(asw_context* ctx, int a1, int a2, int a3, long p);
asw_status asw_b_infinity(asw_context* ctx, int n, double* re, double* im);

#ifdef __cplusplus
}
#endif

#endif
