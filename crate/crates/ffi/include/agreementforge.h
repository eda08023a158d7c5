// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef AGREEMENTFORGE_H
#define AGREEMENTFORGE_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum {
  AF_STATUS_OK = 0,
  AF_STATUS_NULL_ARGUMENT = 1,
  AF_STATUS_INVALID_UTF8 = 2,
  AF_STATUS_INVALID_ARGUMENT = 3,
  AF_STATUS_RDF = 4,
  AF_STATUS_CONTRACT = 5,
  AF_STATUS_ENGINE = 6,
  AF_STATUS_CAPACITY = 7,
  AF_STATUS_EVENT_ORDER = 8,
  AF_STATUS_UNKNOWN_REF = 9,
  AF_STATUS_VALIDATION = 10,
  AF_STATUS_DUPLICATE = 11,
  AF_STATUS_INTEGRITY = 12,
  AF_STATUS_IO = 13,
  AF_STATUS_LOCKED = 14,
  AF_STATUS_NOT_FOUND = 15,
  AF_STATUS_PANIC = 99,
} AfStatus;

/**
 * Handle to a parsed RDF graph.
 */
typedef struct AfGraph AfGraph;

/**
 * Handle to an in-memory ledger.
 */
typedef struct AfLedger AfLedger;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, static storage.
 */
const char *af_version(void);

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into the library from the same thread.
 */
const char *af_last_error(void);

void af_string_free(char *s);

/**
 * Empty ledger, not backed by a file.
 */
AfStatus af_ledger_new(AfLedger **out);

/**
 * Creates a new log file at `path`. Fails if it exists.
 */
AfStatus af_ledger_create(const char *path, AfLedger **out);

/**
 * Opens and verifies the log file at `path`. Appends write through.
 */
AfStatus af_ledger_open(const char *path, AfLedger **out);

/**
 * Verifies and replays a log held in memory.
 */
AfStatus af_ledger_from_bytes(const uint8_t *data, size_t len, AfLedger **out);

void af_ledger_free(AfLedger *ledger);

/**
 * Number of records, 0 for a null handle.
 */
uint64_t af_ledger_len(const AfLedger *ledger);

AfStatus af_ledger_head_hash(const AfLedger *ledger, char **out);

/**
 * The log as JSON lines.
 */
AfStatus af_ledger_log(const AfLedger *ledger, char **out);

/**
 * Appends one command given as JSON, e.g. `{"type":"register_operator",...}`.
 * `timestamp` may be null for the current time. `out_seq` may be null.
 */
AfStatus af_ledger_append_json(AfLedger *ledger,
                               const char *command_json,
                               const char *timestamp_text,
                               uint64_t *out_seq);

/**
 * Appends the demonstration scenario, one second per record from `start`
 * (null for the built-in start time).
 */
AfStatus af_ledger_seed_demo(AfLedger *ledger, const char *start);

/**
 * Evaluates all contracts, records new obligations and returns them as a
 * JSON array.
 */
AfStatus af_ledger_evaluate(AfLedger *ledger, const char *now, char **out_json);

/**
 * The derived A-Box as Turtle.
 */
AfStatus af_ledger_export_turtle(const AfLedger *ledger, char **out);

/**
 * Hex SHA-256 over the replayed state.
 */
AfStatus af_ledger_state_digest(const AfLedger *ledger, char **out);

/**
 * Answers competency question `question` ("cq1".."cq6") about `subject`
 * (IRI or CURIE) over the exported A-Box. Text table unless `csv`.
 */
AfStatus af_ledger_query(const AfLedger *ledger,
                         const char *question,
                         const char *subject,
                         bool csv,
                         char **out);

/**
 * Checks a log without building state. On an integrity failure the
 * offending record number goes to `out_failed_seq`. Either output may be
 * null.
 */
AfStatus af_verify_chain(const uint8_t *data,
                         size_t len,
                         uint64_t *out_records,
                         uint64_t *out_failed_seq);

AfStatus af_graph_parse_turtle(const char *turtle, AfGraph **out);

void af_graph_free(AfGraph *graph);

uint64_t af_graph_len(const AfGraph *graph);

AfStatus af_graph_serialize(const AfGraph *graph, char **out);

AfStatus af_graph_isomorphic(const AfGraph *a, const AfGraph *b, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AGREEMENTFORGE_H */
