/* Copyright 2026 The semicoarse authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the semicoarse-equilibria toolkit.  All structured input
 * and output is JSON; returned strings are owned by the caller and must be
 * released with sce_string_free.
 */

#ifndef SEMICOARSE_H_
#define SEMICOARSE_H_

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sce_status {
  SCE_OK = 0,
  SCE_ERR_USAGE = 1,        /* malformed input / JSON / unknown option */
  SCE_ERR_INFEASIBLE = 2,   /* LP infeasible */
  SCE_ERR_UNBOUNDED = 3,    /* LP unbounded */
  SCE_ERR_PRECONDITION = 4, /* domain precondition failed */
  SCE_ERR_STALL = 5,        /* solver pivot budget exhausted */
  SCE_ERR_INTERNAL = 6
} sce_status;

typedef struct sce_game sce_game;

/* Message for the most recent failure on this thread. */
const char* sce_last_error(void);

void sce_string_free(char* s);
void sce_game_free(sce_game* g);

/* Game construction.  Generator spec:
 *   {"kind":"bertrand","n":10,"costs":[0,0],"demand":"linear"|"inelastic"|[...]}
 *   {"kind":"firstprice","n":10,"values":[10,10],"gauge":"uniform"|"square"}
 *   {"kind":"badgame"}
 *   {"kind":"rps","actions":3,"players":[0,1]}
 *   {"kind":"random","players":2,"actions":[3,3],"seed":0}
 */
sce_status sce_game_generate(const char* spec_json, sce_game** out);
sce_status sce_game_from_json(const char* json, sce_game** out);
sce_status sce_game_to_json(const sce_game* g, char** out);

/* Equilibrium LPs.  Options:
 *   {"concept":"cce"|"ce"|"semicoarse-ext"|"semicoarse-enum"|"lyapunov"|"weighted",
 *    "objective":{"kind":"not-nash"|"sum-sq-value"|"sq-dist"|"dense",
 *                 "target":[...], "values":[...]},
 *    "weights":[[...],...], "max_cycle_len":0, "exact":false}
 * Result: {"status","value","sigma":[...],"pivots", "certificate":{...}}.
 */
sce_status sce_solve(const sce_game* g, const char* options_json, char** result_json);

/* Dynamics.  Options:
 *   {"kind":"pga"|"scaled","T":10000,"schedule":{"C":0.5,"alpha":0.5},
 *    "schedules":[...], "seed":0, "init":"uniform"|"random",
 *    "weights":[[...]], "verify":true, "verify_tol":0.9, "max_cycle_len":0}
 *   {"kind":"meanbased","actions":2,"C":1.0,"alpha":0.5,"T":40000}
 *   {"kind":"rps","eps":0.1,"actions":3,"perm":[1,2,0],"quadrature":256}
 * Result includes the averaged outcome distribution and, when requested,
 * the canonical-family verification report and trajectory CSV.
 */
sce_status sce_dynamics(const sce_game* g, const char* options_json, char** result_json);

/* Bertrand dual certificate.  Options:
 *   {"n":10,"costs":[0,0,5],"demand":"inelastic"|"linear"|[...],"verify":true}
 * Result: certificate JSON plus {"verify":{"min_slack","argmin","pass"}}.
 */
sce_status sce_certify(const char* options_json, char** result_json);

/* Experiments.  Options: {"name":"fig1"|"fig2","n":10}. */
sce_status sce_experiment(const char* options_json, char** result_json);

#ifdef __cplusplus
}
#endif

#endif /* SEMICOARSE_H_ */
