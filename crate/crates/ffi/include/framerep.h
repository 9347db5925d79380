#ifndef FRAMEREP_H
#define FRAMEREP_H

#include <stddef.h>

// Result code of every fallible call.
typedef enum FrmStatus {
  FRM_STATUS_OK = 0,
  FRM_STATUS_NULL_POINTER = 1,
  FRM_STATUS_INVALID_ARGUMENT = 2,
  FRM_STATUS_DIMENSION_MISMATCH = 3,
  FRM_STATUS_NON_SQUARE = 4,
  FRM_STATUS_NOT_HERMITIAN = 5,
  FRM_STATUS_NOT_A_FRAME = 6,
  FRM_STATUS_SECTION_TOO_LARGE = 7,
  FRM_STATUS_NON_FINITE = 8,
  FRM_STATUS_EMPTY = 9,
  FRM_STATUS_INCOMPATIBLE_FRAMES = 10,
  FRM_STATUS_PARSE = 11,
  FRM_STATUS_BUFFER_TOO_SMALL = 12,
  FRM_STATUS_PANIC = 13,
} FrmStatus;

// Structural class of a frame, strongest first in the order of checking.
typedef enum FrmFrameClass {
  FRM_FRAME_CLASS_BESSEL_ONLY = 0,
  FRM_FRAME_CLASS_FRAME = 1,
  FRM_FRAME_CLASS_TIGHT_FRAME = 2,
  FRM_FRAME_CLASS_PARSEVAL_FRAME = 3,
  FRM_FRAME_CLASS_RIESZ_BASIS = 4,
  FRM_FRAME_CLASS_ORTHONORMAL_BASIS = 5,
} FrmFrameClass;

// Opaque frame of vectors in `C^dim`.
typedef struct FrmFrame FrmFrame;

// Opaque dense complex matrix.
typedef struct FrmMatrix FrmMatrix;

// Options for [`frm_solve`]. Zero values select the defaults.
typedef struct FrmSolveOptions {
  // Leading section size; 0 uses the full system.
  size_t section_size;
  // Relative pseudoinverse cutoff; values `≤ 0` use the default.
  double pseudoinverse_rel_tol;
  // Nonzero skips the projection of the right-hand side.
  int no_project;
} FrmSolveOptions;

// Scalar diagnostics of a solve.
typedef struct FrmSolveInfo {
  double residual_operator;
  double residual_matrix;
  size_t section_used;
  int conditioning_warning;
} FrmSolveInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or NULL if none. The pointer
// stays valid until the next failing call on the same thread.
const char *frm_last_error_message(void);

// Releases a string returned by a `*_to_json` function.
//
// # Safety
// `s` must be NULL or a string returned by this library, freed once.
void frm_string_free(char *s);

// Creates a `rows × cols` matrix from `2·rows·cols` interleaved doubles.
//
// # Safety
// `data` must point to `2·rows·cols` readable doubles; `out` must be writable.
enum FrmStatus frm_matrix_new(size_t rows, size_t cols, const double *data, struct FrmMatrix **out);

// # Safety
// `m` must be NULL or a live matrix handle, freed once.
void frm_matrix_free(struct FrmMatrix *m);

// Number of rows, or 0 for NULL.
//
// # Safety
// `m` must be NULL or a live matrix handle.
size_t frm_matrix_rows(const struct FrmMatrix *m);

// Number of columns, or 0 for NULL.
//
// # Safety
// `m` must be NULL or a live matrix handle.
size_t frm_matrix_cols(const struct FrmMatrix *m);

// Copies the entries row-major into `out`, which holds `len` doubles.
//
// # Safety
// `m` must be a live handle and `out` must point to `len` writable doubles.
enum FrmStatus frm_matrix_copy_entries(const struct FrmMatrix *m, double *out, size_t len);

// Parses the canonical JSON (or real CSV) matrix format.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum FrmStatus frm_matrix_from_json(const char *text, struct FrmMatrix **out);

// Serializes to canonical JSON; release the result with [`frm_string_free`].
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum FrmStatus frm_matrix_to_json(const struct FrmMatrix *m, char **out);

// Creates a frame of `count` vectors in `C^dim` from `2·dim·count`
// interleaved doubles, vector after vector.
//
// # Safety
// `data` must point to `2·dim·count` readable doubles; `out` must be writable.
enum FrmStatus frm_frame_new(size_t dim, size_t count, const double *data, struct FrmFrame **out);

// # Safety
// `f` must be NULL or a live frame handle, freed once.
void frm_frame_free(struct FrmFrame *f);

// Dimension of the space, or 0 for NULL.
//
// # Safety
// `f` must be NULL or a live frame handle.
size_t frm_frame_dim(const struct FrmFrame *f);

// Number of vectors, or 0 for NULL.
//
// # Safety
// `f` must be NULL or a live frame handle.
size_t frm_frame_count(const struct FrmFrame *f);

// Copies the vectors, one after another, into `out` holding `len` doubles.
//
// # Safety
// `f` must be a live handle and `out` must point to `len` writable doubles.
enum FrmStatus frm_frame_copy_vectors(const struct FrmFrame *f, double *out, size_t len);

// The `dim × count` synthesis matrix with the vectors as columns.
//
// # Safety
// `f` must be a live handle; `out` must be writable.
enum FrmStatus frm_frame_synthesis(const struct FrmFrame *f, struct FrmMatrix **out);

// The frame operator `S = D·D*`.
//
// # Safety
// `f` must be a live handle; `out` must be writable.
enum FrmStatus frm_frame_operator(const struct FrmFrame *f, struct FrmMatrix **out);

// Optimal frame bounds `A ≤ B`.
//
// # Safety
// `f` must be a live handle; `lower` and `upper` must be writable.
enum FrmStatus frm_frame_bounds(const struct FrmFrame *f, double *lower, double *upper);

// # Safety
// `f` must be a live handle; `out` must be writable.
enum FrmStatus frm_frame_classify(const struct FrmFrame *f, enum FrmFrameClass *out);

// Canonical dual frame `(S⁻¹ψ_k)`. Fails with `NotAFrame` if the family does
// not span.
//
// # Safety
// `f` must be a live handle; `out` must be writable.
enum FrmStatus frm_frame_dual(const struct FrmFrame *f, struct FrmFrame **out);

// Parses the canonical JSON frame format.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum FrmStatus frm_frame_from_json(const char *text, struct FrmFrame **out);

// Serializes to canonical JSON; release the result with [`frm_string_free`].
//
// # Safety
// `f` must be a live handle; `out` must be writable.
enum FrmStatus frm_frame_to_json(const struct FrmFrame *f, char **out);

// Gram matrix with entries `⟨φ_m, ψ_j⟩` (rows indexed by `psi`).
//
// # Safety
// Handles must be live; `out` must be writable.
enum FrmStatus frm_gram(const struct FrmFrame *psi,
                        const struct FrmFrame *phi,
                        struct FrmMatrix **out);

// Matrix `C_Φ·O·D_Ψ` of the operator `op` from `C^{dim Ψ}` to `C^{dim Φ}`.
//
// # Safety
// Handles must be live; `out` must be writable.
enum FrmStatus frm_matrix_of_operator(const struct FrmMatrix *op,
                                      const struct FrmFrame *phi,
                                      const struct FrmFrame *psi,
                                      struct FrmMatrix **out);

// Operator `D_Φ·M·C_Ψ` induced by the coefficient matrix `m`.
//
// # Safety
// Handles must be live; `out` must be writable.
enum FrmStatus frm_operator_of_matrix(const struct FrmMatrix *m,
                                      const struct FrmFrame *phi,
                                      const struct FrmFrame *psi,
                                      struct FrmMatrix **out);

// Frame multiplier `Σ m_k φ_k ψ_k*` for a symbol of `len` complex values.
//
// # Safety
// `symbol` must point to `2·len` readable doubles; handles must be live;
// `out` must be writable.
enum FrmStatus frm_multiplier(const double *symbol,
                              size_t len,
                              const struct FrmFrame *phi,
                              const struct FrmFrame *psi,
                              struct FrmMatrix **out);

// Kernel `Σ M_kj φ_k ψ_j*` of the operator induced by `m`.
//
// # Safety
// Handles must be live; `out` must be writable.
enum FrmStatus frm_kernel(const struct FrmMatrix *m,
                          const struct FrmFrame *phi,
                          const struct FrmFrame *psi,
                          struct FrmMatrix **out);

// Solves `O f = g` through the frame `phi`. `g` and `solution` hold `n`
// complex values (`2n` doubles) where `n` is the dimension of `phi`.
//
// # Safety
// `g` must point to `2n` readable doubles and `solution` to `2n` writable
// doubles; `options` may be NULL; `info` may be NULL.
enum FrmStatus frm_solve(const struct FrmMatrix *op,
                         const double *g,
                         size_t n,
                         const struct FrmFrame *phi,
                         const struct FrmSolveOptions *options,
                         double *solution,
                         struct FrmSolveInfo *info);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRAMEREP_H */
