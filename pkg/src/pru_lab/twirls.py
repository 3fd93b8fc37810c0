"""The three averaging channels used by the experiments.

Each channel (Haar, permutation-phase, Clifford) comes in an exact flavor
and a seeded Monte-Carlo flavor, and acts on the system factor of an
operator that may carry an entangled workspace register.

Exact Haar twirling is the orthogonal projection onto the span of the
tensor-slot permutation operators (their Gram matrix has the closed form
d^{#cycles}); the permutation-phase twirl is evaluated combinatorially per
basis pair, enumerating injective relabelings of the few values present
rather than the full label permutation group.

Monte-Carlo runs draw their randomness per fixed-size chunk from seeds
derived as (seed, chunk index), and chunks are reduced in ascending order,
so results are reproducible however the chunks are scheduled.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import cache

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .clifford import enumerate_cliffords, sample_clifford
from .errors import CapacityError, ConsistencyError, DomainError
from .operators import (
    DenseOperator,
    DensityMatrix,
    StateVector,
    check_capacity,
    derive_seed,
    distinct_mask,
    falling_factorial,
    haar_unitaries,
    subsystem_perm_index_map,
    trace_distance,
)
from .schur_weyl import (
    IsotypicDecomposition,
    rotate_from_basis,
    rotate_to_basis,
)
from .symgroup import PermutationT, all_permutations

PF_PAIR_CAP = 1 << 20  # exact PF twirl enumerates d^{2t} basis pairs
MC_CHUNK = 512  # fixed chunk size; seeds derive as (seed, chunk index)
MC_BATCH_DIM_CAP = 64  # batched-matrix MC path is for small system factors


@dataclass(frozen=True)
class TwirlSpec:
    """Which channel to apply and how."""

    kind: str  # "haar" | "pf" | "clifford" | "custom-ensemble"
    d: int
    t: int
    method: str = "exact"  # "exact" | "monte_carlo"
    samples: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("haar", "pf", "clifford", "custom-ensemble"):
            raise DomainError(f"unknown twirl kind {self.kind!r}")
        if self.method not in ("exact", "monte_carlo"):
            raise DomainError(f"unknown method {self.method!r}")
        if self.method == "monte_carlo" and self.samples < 1:
            raise DomainError("monte_carlo requires samples >= 1")
        if self.kind == "haar" and self.method == "exact" and self.d < self.t:
            raise DomainError("exact Haar twirl needs d >= t (independent permutation operators)")


def _as_matrix(state) -> tuple[np.ndarray, bool]:
    """Matrix payload plus a flag saying whether the input was a state."""
    if isinstance(state, StateVector):
        psi = state.amplitudes
        return np.outer(psi, psi.conj()), True
    if isinstance(state, DensityMatrix):
        return np.asarray(state.entries), True
    if isinstance(state, DenseOperator):
        return np.asarray(state.entries), False
    return np.asarray(state, dtype=complex), False


def _wrap(matrix: np.ndarray, was_state: bool, d: int, t: int, meta: dict | None = None):
    regs = (d**t, matrix.shape[0] // d**t)
    if was_state:
        return DensityMatrix(matrix, regs, meta=meta)
    return DenseOperator(matrix, regs, meta=meta)


def _system_split(matrix_dim: int, d: int, t: int) -> int:
    n = d**t
    if matrix_dim % n:
        raise DomainError(f"operator dim {matrix_dim} not divisible by d^t = {n}")
    return matrix_dim // n


def _chunk_seeds(samples: int):
    """Yield (chunk_index, count) pairs covering ``samples``."""
    done, index = 0, 0
    while done < samples:
        count = min(MC_CHUNK, samples - done)
        yield index, count
        done += count
        index += 1


# ---------------------------------------------------------------------------
# Haar twirl: exact commutant projection and block formula.
# ---------------------------------------------------------------------------

def haar_twirl_exact(state, d: int, t: int):
    """Project the system factor onto the span of slot permutations.

    Solves the Gram system G c = b with G[s, p] = d^{#cycles(s^-1 p)} and
    b the pairing of the input with each permutation operator; the
    workspace factor rides along as matrix-valued coefficients.
    """
    if d < t:
        raise DomainError("exact Haar twirl needs d >= t")
    matrix, was_state = _as_matrix(state)
    dim_e = _system_split(matrix.shape[0], d, t)
    n = d**t
    perms = all_permutations(t)
    maps = [subsystem_perm_index_map(pi, d) for pi in perms]
    arr = matrix.reshape(n, dim_e, n, dim_e)

    b = np.stack([arr[m, :, np.arange(n), :].sum(axis=0) for m in maps])  # (t!, E, E)
    G = np.array(
        [[float(d) ** a.inverse().compose(bp).num_cycles() for bp in perms] for a in perms]
    )
    cho = cho_factor(G)  # Gram matrices of independent operators are SPD
    coeffs = cho_solve(cho, b.reshape(len(perms), -1)).reshape(b.shape)

    out = np.zeros_like(arr)
    cols = np.arange(n)
    for m, c in zip(maps, coeffs):
        out[m, :, cols, :] += c[None, :, :]
    meta = {"gram_condition": float(np.linalg.cond(G))}
    return _wrap(out.reshape(matrix.shape), was_state, d, t, meta=meta)


def haar_twirl_schur_weyl(state, decomp: IsotypicDecomposition):
    """Assemble the twirl output blockwise: maximally mixed on each
    unitary-group factor, the input's own footprint on the rest."""
    matrix, was_state = _as_matrix(state)
    d, t = decomp.d, decomp.t
    dim_e = _system_split(matrix.shape[0], d, t)
    rotated = rotate_to_basis(matrix, decomp)
    out = np.zeros_like(rotated)
    for sl, block in zip(decomp.block_slices(), decomp.blocks):
        w, v = block.weyl_dim, block.specht_dim
        idx = np.arange(sl.start * dim_e, sl.stop * dim_e)
        sub = rotated[np.ix_(idx, idx)].reshape(w, v, dim_e, w, v, dim_e)
        footprint = np.einsum("ijeikf->jekf", sub)
        rebuilt = np.einsum("ab,jekf->ajebkf", np.eye(w) / w, footprint)
        out[np.ix_(idx, idx)] = rebuilt.reshape(w * v * dim_e, w * v * dim_e)
    result = rotate_from_basis(out, decomp)
    return _wrap(result, was_state, d, t)


# ---------------------------------------------------------------------------
# Shared Monte-Carlo driver for ensembles given as batched system matrices.
# ---------------------------------------------------------------------------

def _mc_batched_twirl(state, d: int, t: int, samples: int, seed, draw_batch, label: str):
    """Average (M x I) X (M x I)^dag over sampled system matrices M.

    ``draw_batch(rng, count)`` returns a (count, d^t, d^t) stack.  Pure
    inputs go through a vector path; operators through a batched
    conjugation.  The Frobenius standard error of the mean comes for free
    because conjugation preserves the Frobenius norm sample by sample.
    """
    n = d**t
    if n > MC_BATCH_DIM_CAP:
        raise CapacityError(f"batched MC twirl capped at system dim {MC_BATCH_DIM_CAP}")
    pure_vec = state.amplitudes if isinstance(state, StateVector) else None
    matrix, was_state = _as_matrix(state)
    dim_e = _system_split(matrix.shape[0], d, t)
    total = matrix.shape[0]

    acc = np.zeros((total, total), dtype=complex)
    for chunk_index, count in _chunk_seeds(samples):
        rng = np.random.default_rng(derive_seed(seed, chunk_index))
        ms = draw_batch(rng, count)
        if pure_vec is not None:
            vecs = np.einsum("sax,xe->sae", ms, pure_vec.reshape(n, dim_e)).reshape(count, total)
            acc += vecs.T @ vecs.conj()
        else:
            arr = matrix.reshape(n, dim_e, n, dim_e)
            acc += np.einsum("sax,xeyf,sby->aebf", ms, arr, ms.conj(), optimize=True).reshape(
                total, total
            )
    mean = acc / samples
    mean = (mean + mean.conj().T) / 2
    input_sq = float(np.sum(np.abs(matrix) ** 2))
    mean_sq = float(np.sum(np.abs(mean) ** 2))
    var = max(input_sq - mean_sq, 0.0) * samples / max(samples - 1, 1)
    meta = {
        "method": "monte_carlo",
        "ensemble": label,
        "samples": samples,
        "seed": seed,
        "std_error_fro": float(np.sqrt(var / samples)),
    }
    return _wrap(mean, was_state, d, t, meta=meta)


def _haar_batch(d: int, t: int):
    n = d**t

    def draw(rng, count):
        us = haar_unitaries(d, count, rng)
        ms = us
        for _ in range(t - 1):
            ms = np.einsum("sab,scd->sacbd", ms, us).reshape(count, -1, n)
        return ms

    return draw


def _pf_batch(d: int, t: int):
    n = d**t

    def draw(rng, count):
        perms = np.argsort(rng.random((count, d)), axis=1)
        signs = (1.0 - 2.0 * rng.integers(0, 2, size=(count, d))).astype(complex)
        pf = np.zeros((count, d, d), dtype=complex)
        pf[np.arange(count)[:, None], perms, np.arange(d)[None, :]] = signs
        ms = pf
        for _ in range(t - 1):
            ms = np.einsum("sab,scd->sacbd", ms, pf).reshape(count, -1, n)
        return ms

    return draw


def haar_twirl_mc(state, d: int, t: int, samples: int, seed):
    """Monte-Carlo Haar twirl, deterministic per seed."""
    return _mc_batched_twirl(state, d, t, samples, seed, _haar_batch(d, t), "haar")


def pf_twirl_mc(state, d: int, t: int, samples: int, seed):
    """Monte-Carlo permutation-phase twirl over sampled (permutation, sign
    pattern) pairs, deterministic per seed."""
    return _mc_batched_twirl(state, d, t, samples, seed, _pf_batch(d, t), "pf")


# ---------------------------------------------------------------------------
# Permutation-phase twirl, exact.
# ---------------------------------------------------------------------------

def _phase_parity_ok(x: tuple[int, ...], y: tuple[int, ...]) -> bool:
    """Averaging the random binary phase leaves |x><y| alive iff every
    value occurs an even number of times across both tuples."""
    return all(c % 2 == 0 for c in Counter(x + y).values())


@cache
def _orbit_for_pattern(d: int, t: int, pattern: tuple[int, ...]):
    """Uniform label-permutation average of |x><y| for the given joint
    pattern (values replaced by first-occurrence codes).  Returns row and
    column basis indices of the surviving matrix units plus the weight."""
    m = max(pattern) + 1
    weight = 1.0 / falling_factorial(d, m)
    powers = d ** np.arange(t - 1, -1, -1)
    rows, cols = [], []
    for values in itertools.permutations(range(d), m):
        relabeled = [values[p] for p in pattern]
        rows.append(int(np.dot(relabeled[:t], powers)))
        cols.append(int(np.dot(relabeled[t:], powers)))
    return np.array(rows), np.array(cols), weight


def _joint_pattern(x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
    codes: dict[int, int] = {}
    out = []
    for v in x + y:
        if v not in codes:
            codes[v] = len(codes)
        out.append(codes[v])
    return tuple(out)


def pf_twirl_basis_element(x, y, d: int) -> DenseOperator:
    """Exact permutation-phase twirl of the matrix unit |x><y|.

    Phase parity first; distinct tuples related by a slot permutation take
    the closed form (distinct projector) R_sigma / Tr, anything else is an
    explicit orbit average over injective relabelings.
    """
    x, y = tuple(int(v) for v in x), tuple(int(v) for v in y)
    t = len(x)
    if len(y) != t:
        raise DomainError("tuples must have equal length")
    if any(not 0 <= v < d for v in x + y):
        raise DomainError(f"tuple values must lie in [0, {d})")
    n = d**t
    check_capacity(n)
    out = np.zeros((n, n), dtype=complex)
    if not _phase_parity_ok(x, y):
        return DenseOperator(out, (d,) * t)

    if len(set(x)) == t and sorted(x) == sorted(y):
        # distinct tuples, y = x_sigma with sigma(i) = position of y_i in x
        sigma = PermutationT(tuple(x.index(v) for v in y))
        mask = distinct_mask(d, t).astype(float)
        out[subsystem_perm_index_map(sigma, d), np.arange(n)] = 1.0
        out *= mask[:, None]  # left-multiply by the distinct projector
        return DenseOperator(out / falling_factorial(d, t), (d,) * t)

    rows, cols, weight = _orbit_for_pattern(d, t, _joint_pattern(x, y))
    out[rows, cols] = weight
    return DenseOperator(out, (d,) * t)


def pf_twirl(state, d: int, t: int):
    """Exact permutation-phase twirl, extended linearly over the system
    basis with workspace blocks carried along."""
    matrix, was_state = _as_matrix(state)
    dim_e = _system_split(matrix.shape[0], d, t)
    n = d**t
    if n * n > PF_PAIR_CAP:
        raise CapacityError(f"exact PF twirl needs d^2t = {n * n} <= {PF_PAIR_CAP} basis pairs")
    arr = matrix.reshape(n, dim_e, n, dim_e)
    digit_table = list(itertools.product(range(d), repeat=t))
    nonzero = np.einsum("aebf->ab", np.abs(arr) ** 2) > 0
    out = np.zeros_like(arr)
    for a in range(n):
        xa = digit_table[a]
        for b in range(n):
            if not nonzero[a, b]:
                continue
            yb = digit_table[b]
            if not _phase_parity_ok(xa, yb):
                continue
            rows, cols, weight = _orbit_for_pattern(d, t, _joint_pattern(xa, yb))
            out[rows, :, cols, :] += weight * arr[a, :, b, :]
    return _wrap(out.reshape(matrix.shape), was_state, d, t)


def pf_twirl_distinct_formula(state, decomp: IsotypicDecomposition):
    """Block formula for inputs supported on distinct tuples: the
    distinct-block mixed state replaces the maximally mixed one."""
    matrix, was_state = _as_matrix(state)
    d, t = decomp.d, decomp.t
    dim_e = _system_split(matrix.shape[0], d, t)
    mask = distinct_mask(d, t).astype(float)
    full_mask = np.repeat(mask, dim_e)
    projected = full_mask[:, None] * matrix * full_mask[None, :]
    if trace_distance(projected, matrix) > 1e-9:
        raise DomainError("input is not supported on the distinct subspace")

    rotated = rotate_to_basis(matrix, decomp)
    out = np.zeros_like(rotated)
    for sl, block in zip(decomp.block_slices(), decomp.blocks):
        w, v = block.weyl_dim, block.specht_dim
        idx = np.arange(sl.start * dim_e, sl.stop * dim_e)
        sub = rotated[np.ix_(idx, idx)].reshape(w, v, dim_e, w, v, dim_e)
        footprint = np.einsum("ijeikf->jekf", sub)
        sigma = block.distinct_block / np.trace(block.distinct_block).real
        rebuilt = np.einsum("ab,jekf->ajebkf", sigma, footprint)
        out[np.ix_(idx, idx)] = rebuilt.reshape(w * v * dim_e, w * v * dim_e)
    result = rotate_from_basis(out, decomp)
    return _wrap(result, was_state, d, t)


# ---------------------------------------------------------------------------
# Explicit-ensemble and Clifford twirls.
# ---------------------------------------------------------------------------

def ensemble_twirl(state, ops, d: int, t: int):
    """Exact t-fold twirl over an explicit list of unitaries on C^d."""
    matrix, was_state = _as_matrix(state)
    dim_e = _system_split(matrix.shape[0], d, t)
    nA = d**t
    arr = matrix.reshape(nA, dim_e, nA, dim_e)
    acc = np.zeros_like(arr)
    for op in ops:
        U = op.entries if isinstance(op, DenseOperator) else np.asarray(op)
        M = U
        for _ in range(t - 1):
            M = np.kron(M, U)
        acc += np.einsum("ax,xeyf,by->aebf", M, arr, M.conj(), optimize=True)
    mean = (acc / len(ops)).reshape(matrix.shape)
    mean = (mean + mean.conj().T) / 2
    return _wrap(mean, was_state, d, t, meta={"method": "exact", "samples": len(ops)})


def _apply_local_tensor(U: np.ndarray, psi_shaped: np.ndarray, t: int) -> np.ndarray:
    """Apply U to each of the first t axes of a shaped state tensor."""
    v = psi_shaped
    for axis in range(t):
        v = np.moveaxis(np.tensordot(U, v, axes=([1], [axis])), 0, axis)
    return v


def _clifford_sample_seed(seed, index: int) -> list:
    return derive_seed(seed, index // MC_CHUNK, index % MC_CHUNK)


def clifford_twirl(state, n: int, t: int, method: str = "exact", samples: int = 0, seed: int = 0):
    """Average conjugation by C^{x t} over the Clifford group.

    Exact averaging enumerates the group for n <= 2; otherwise a seeded
    Monte-Carlo estimate is returned, with the Frobenius standard error of
    the mean attached to the metadata.  Pure inputs are twirled in the
    state picture (one tensor application per sample), so the t-fold
    operator is never materialized.
    """
    d = 2**n
    pure_vec = state.amplitudes if isinstance(state, StateVector) else None
    matrix, was_state = _as_matrix(state)
    dim_e = _system_split(matrix.shape[0], d, t)
    nA = d**t
    total = matrix.shape[0]

    if method == "exact":
        if n > 2:
            raise CapacityError("exact Clifford averaging supported for n <= 2")
        return ensemble_twirl(state, enumerate_cliffords(n, allow_two_qubit=True), d, t)

    if method != "monte_carlo":
        raise DomainError(f"unknown method {method!r}")
    if samples < 1:
        raise DomainError("monte_carlo requires samples >= 1")

    acc = np.zeros((total, total), dtype=complex)
    if pure_vec is not None:
        shaped = pure_vec.reshape((d,) * t + (dim_e,))
        index = 0
        for chunk_index, count in _chunk_seeds(samples):
            vecs = np.empty((count, total), dtype=complex)
            for i in range(count):
                U = sample_clifford(n, _clifford_sample_seed(seed, index)).to_dense().entries
                vecs[i] = _apply_local_tensor(U, shaped, t).reshape(total)
                index += 1
            acc += vecs.T @ vecs.conj()
    else:
        for index in range(samples):
            U = sample_clifford(n, _clifford_sample_seed(seed, index)).to_dense().entries
            M = U
            for _ in range(t - 1):
                M = np.kron(M, U)
            big = np.kron(M, np.eye(dim_e))
            acc += big @ matrix @ big.conj().T
    mean = acc / samples
    mean = (mean + mean.conj().T) / 2
    input_sq = float(np.sum(np.abs(matrix) ** 2))
    var = max(input_sq - float(np.sum(np.abs(mean) ** 2)), 0.0) * samples / max(samples - 1, 1)
    meta = {
        "method": "monte_carlo",
        "samples": samples,
        "seed": seed,
        "std_error_fro": float(np.sqrt(var / samples)),
    }
    return _wrap(mean, was_state, d, t, meta=meta)


def distinct_overlap_after_clifford(
    state, n: int, t: int, method: str = "exact", samples: int = 0, seed: int = 0
) -> dict:
    """Overlap of the Clifford-twirled state with the distinct subspace,
    with the pair-counting lower bound 1 - t(t-1)/(d+1).

    The bound multiplies the t(t-1)/2 colliding pairs by the operator norm
    2/(d(d+1)) of the Haar average of a doubled projector, times the
    collision projector trace d.  For pure inputs under Monte-Carlo the
    overlap is a per-sample scalar, so the reported standard error is the
    plain sample one (and the sampled Cliffords match clifford_twirl's for
    the same seed).
    """
    d = 2**n
    bound = 1.0 - t * (t - 1) / (d + 1)
    mask = distinct_mask(d, t)

    if method == "monte_carlo" and isinstance(state, StateVector):
        psi = state.amplitudes
        dim_e = _system_split(psi.shape[0], d, t)
        shaped = psi.reshape((d,) * t + (dim_e,))
        vals = np.zeros(samples)
        for i in range(samples):
            U = sample_clifford(n, _clifford_sample_seed(seed, i)).to_dense().entries
            v = _apply_local_tensor(U, shaped, t)
            vals[i] = float(np.sum(np.abs(v.reshape(d**t, dim_e))[mask] ** 2))
        overlap = float(vals.mean())
        se = float(vals.std(ddof=1) / np.sqrt(samples)) if samples > 1 else 0.0
        result = {
            "overlap": overlap,
            "bound": bound,
            "std_error": se,
            "method": "monte_carlo",
            "samples": samples,
        }
        return _assert_overlap_bound(result)

    twirled = clifford_twirl(state, n, t, method=method, samples=samples, seed=seed)
    dim_e = twirled.dim // d**t
    diag = np.real(np.diagonal(twirled.entries)).reshape(d**t, dim_e)
    overlap = float(diag[mask].sum())
    se = (twirled.meta or {}).get("std_error_fro", 0.0)
    result = {"overlap": overlap, "bound": bound, "std_error": se, "method": method, "samples": samples}
    return _assert_overlap_bound(result)


def _assert_overlap_bound(result: dict) -> dict:
    slack = 3 * result["std_error"] + 1e-9
    if result["overlap"] < result["bound"] - slack:
        raise ConsistencyError(
            f"distinct-subspace overlap {result['overlap']} fell below the bound "
            f"{result['bound']} by more than the Monte-Carlo tolerance {slack}"
        )
    return result
