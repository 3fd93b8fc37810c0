"""The keyed unitary ensemble: permutation * phase * Clifford.

Keys are triples of independent 16-byte strings.  The permutation and
phase components are *toy* keyed schemes backed by a counter-mode digest
stream: statistically uniform and perfectly replayable, which is all the
desk-scale statistical experiments need.  (A production instantiation
would slot a cipher-based permutation and PRF behind the same interface;
nothing downstream would change.)  The Clifford component is keyed by
seeding the uniform tableau sampler.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .clifford import sample_clifford
from .errors import CapacityError, DomainError
from .operators import (
    BooleanFunction,
    DenseOperator,
    DensityMatrix,
    PermutationD,
    StateVector,
    as_generator,
    check_capacity,
    phase_op,
    perm_op,
)

KEY_BYTES = 16
PRU_DENSE_QUBIT_CAP = 4


@dataclass(frozen=True, order=True)
class PruKey:
    """Independent sub-keys for the permutation, phase and Clifford parts."""

    k1: bytes
    k2: bytes
    k3: bytes

    def __post_init__(self):
        for part in (self.k1, self.k2, self.k3):
            if len(part) != KEY_BYTES:
                raise DomainError(f"key components must be {KEY_BYTES} bytes")

    def digest(self) -> str:
        return hashlib.sha256(b"pru-key" + self.k1 + self.k2 + self.k3).hexdigest()[:16]

    def to_json(self) -> str:
        return json.dumps({"k1": self.k1.hex(), "k2": self.k2.hex(), "k3": self.k3.hex()})

    @staticmethod
    def from_json(text: str) -> "PruKey":
        obj = json.loads(text)
        return PruKey(bytes.fromhex(obj["k1"]), bytes.fromhex(obj["k2"]), bytes.fromhex(obj["k3"]))


def sample_key(n: int, seed) -> PruKey:
    """Three independent 16-byte components from the seeded generator.

    ``n`` fixes the domain the key will be used on; the key length itself
    is size-independent.
    """
    del n
    rng = as_generator(seed)
    return PruKey(bytes(rng.bytes(KEY_BYTES)), bytes(rng.bytes(KEY_BYTES)), bytes(rng.bytes(KEY_BYTES)))


def _digest_stream(key: bytes, label: bytes):
    """Deterministic byte stream: sha256(label || key || counter) blocks."""
    counter = 0
    while True:
        block = hashlib.sha256(label + key + counter.to_bytes(8, "big")).digest()
        yield from block
        counter += 1


def _uniform_below(stream, bound: int) -> int:
    """Rejection-sample a uniform integer in [0, bound) from a byte stream."""
    nbytes = max(1, (bound - 1).bit_length() + 7 >> 3)
    limit = (1 << (8 * nbytes)) // bound * bound
    while True:
        val = int.from_bytes(bytes(next(stream) for _ in range(nbytes)), "big")
        if val < limit:
            return val % bound


@dataclass(frozen=True)
class PrfScheme:
    """Keyed boolean function on [2^n] (toy: one digest bit per input)."""

    n: int

    @property
    def d(self) -> int:
        return 2**self.n

    def eval(self, key: bytes, x: int) -> int:
        if not 0 <= x < self.d:
            raise DomainError(f"input {x} outside domain [0, {self.d})")
        return hashlib.sha256(b"prf" + key + x.to_bytes(8, "big")).digest()[0] & 1

    def table(self, key: bytes) -> BooleanFunction:
        return BooleanFunction(tuple(self.eval(key, x) for x in range(self.d)))


@dataclass(frozen=True)
class PrpScheme:
    """Keyed permutation of [2^n] (toy: keyed uniform shuffle).

    At desk scale the permutation table is the honest object; ``table``
    materializes it and bijectivity is checked by construction.
    """

    n: int

    @property
    def d(self) -> int:
        return 2**self.n

    def table(self, key: bytes) -> PermutationD:
        stream = _digest_stream(key, b"prp")
        images = list(range(self.d))
        for i in range(self.d - 1, 0, -1):  # Fisher-Yates on the digest stream
            j = _uniform_below(stream, i + 1)
            images[i], images[j] = images[j], images[i]
        return PermutationD(tuple(images))

    def eval(self, key: bytes, x: int) -> int:
        return self.table(key)(x)

    def inverse(self, key: bytes, y: int) -> int:
        return self.table(key).inverse()(y)


def clifford_seed(k3: bytes) -> int:
    return int.from_bytes(k3, "big")


def pru_unitary(key: PruKey, n: int) -> DenseOperator:
    """Dense keyed unitary: permutation operator * phase operator * Clifford."""
    if n > PRU_DENSE_QUBIT_CAP:
        raise CapacityError(f"dense keyed unitaries capped at n <= {PRU_DENSE_QUBIT_CAP}")
    P = perm_op(PrpScheme(n).table(key.k1))
    F = phase_op(PrfScheme(n).table(key.k2))
    C = sample_clifford(n, clifford_seed(key.k3)).to_dense()
    U = P @ F @ C
    if not U.is_unitary(1e-10):
        raise DomainError("assembled keyed unitary failed the unitarity check")
    return DenseOperator(U.entries, (2,) * n)


def sample_keys(n: int, count: int, seed) -> list[PruKey]:
    rng = as_generator(seed)
    return [sample_key(n, rng) for _ in range(count)]


def pru_average_state_from_keys(psi: StateVector, t: int, n: int, keys) -> DensityMatrix:
    """Average of the t-fold keyed conjugation over an explicit key list.

    Keys are sorted before accumulation so the result depends only on the
    key multiset, bitwise.
    """
    d = 2**n
    nA = d**t
    if psi.dim % nA:
        raise DomainError(f"state dim {psi.dim} not divisible by d^t = {nA}")
    dim_e = psi.dim // nA
    check_capacity(psi.dim)
    shaped = psi.amplitudes.reshape((d,) * t + (dim_e,))
    keys = sorted(keys)
    acc = np.zeros((psi.dim, psi.dim), dtype=complex)
    for key in keys:
        U = pru_unitary(key, n).entries
        v = shaped
        for axis in range(t):
            v = np.moveaxis(np.tensordot(U, v, axes=([1], [axis])), 0, axis)
        vec = v.reshape(psi.dim)
        acc += np.outer(vec, vec.conj())
    mean = acc / len(keys)
    mean = (mean + mean.conj().T) / 2
    nkeys = len(keys)
    var = max(1.0 - float(np.sum(np.abs(mean) ** 2)), 0.0) * nkeys / max(nkeys - 1, 1)
    meta = {"num_keys": nkeys, "std_error_fro": float(np.sqrt(var / nkeys))}
    return DensityMatrix(mean, (nA, dim_e), meta=meta)


def pru_average_state(psi: StateVector, t: int, n: int, num_keys: int, seed) -> DensityMatrix:
    """Monte-Carlo ensemble average over freshly sampled keys."""
    return pru_average_state_from_keys(psi, t, n, sample_keys(n, num_keys, seed))
