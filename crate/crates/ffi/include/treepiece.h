#ifndef TREEPIECE_H
#define TREEPIECE_H

#include <stddef.h>
#include <stdint.h>

// Result codes shared by every entry point.
typedef enum TpStatus {
  TP_STATUS_OK = 0,
  TP_STATUS_NULL_ARGUMENT = 1,
  TP_STATUS_INVALID_UTF8 = 2,
  TP_STATUS_IO = 3,
  TP_STATUS_CORRUPT_VOCAB = 4,
  TP_STATUS_PARSE = 5,
  // The skeleton cannot be covered by the vocabulary.
  TP_STATUS_OOV = 6,
  TP_STATUS_TOO_LARGE = 7,
  TP_STATUS_ASSEMBLY = 8,
  TP_STATUS_INVALID_ARGUMENT = 9,
  TP_STATUS_PANIC = 10,
} TpStatus;

// Values accepted by the `mode` argument of [`tp_tokenize`].
typedef enum TpMode {
  TP_MODE_VITERBI = 0,
  TP_MODE_SAMPLE = 1,
} TpMode;

// Opaque vocabulary handle.
typedef struct TpVocab TpVocab;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Loads a vocabulary file. On success `*out` owns a new handle.
//
// # Safety
// `path` is a NUL-terminated string; `out` is valid for writes.
enum TpStatus tp_vocab_load(const char *path, struct TpVocab **out);

// # Safety
// `vocab` is null or a handle from [`tp_vocab_load`] not yet freed.
void tp_vocab_free(struct TpVocab *vocab);

// Number of units, or 0 for a null handle.
//
// # Safety
// `vocab` is null or a live handle.
size_t tp_vocab_len(const struct TpVocab *vocab);

// Tokenizes one logical form into tab-separated units. `mode` takes a
// [`TpMode`] value; `theta` and `seed` are read only in sample mode. An
// uncoverable skeleton returns `TP_STATUS_OOV` and writes nothing.
//
// # Safety
// `vocab` is a live handle, `logical_form` a NUL-terminated string and
// `out` valid for writes.
enum TpStatus tp_tokenize(const struct TpVocab *vocab,
                          const char *logical_form,
                          uint32_t mode,
                          double theta,
                          uint64_t seed,
                          char **out);

// Assembles a line of tab-separated units into a skeleton. The `<OOV>`
// sentinel is echoed back.
//
// # Safety
// `line` is a NUL-terminated string; `out` is valid for writes.
enum TpStatus tp_detokenize(const char *line, char **out);

// Tokenizes by Viterbi and writes the placeholder-nest serialization.
//
// # Safety
// As for [`tp_tokenize`].
enum TpStatus tp_placeholder_nest(const struct TpVocab *vocab,
                                  const char *logical_form,
                                  char **out);

// # Safety
// `s` is null or a string returned by this library and not yet freed.
void tp_string_free(char *s);

// Message of the last failure on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *tp_last_error(void);

// The sentinel written by the command-line tokenizer for OOV lines.
const char *tp_oov_sentinel(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TREEPIECE_H */
