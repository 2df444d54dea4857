"""Seeded generators for the experiment matrices.

Two families of tall test matrices with a prescribed condition number:

* :func:`worst_coherence_stack` -- a conditioned triangular block on top of
  zeros, whose orthonormal factor has coherence 1 (the worst case for
  uniform row sampling);
* :func:`haar_rotated` -- the same spectrum rotated by a Haar frame, which
  has benign coherence.

All generators are deterministic functions of (dimensions, kappa, seed).
A small binary matrix format is provided for harness caching.
"""

import struct
from dataclasses import dataclass

import numpy as np

from .kernels import as_matrix, householder_qr

_MAGIC = b"RPQRMAT1"


@dataclass(frozen=True)
class SpectrumSpec:
    """Prescribed singular-value profile with sigma_1 = 1."""

    n: int
    kappa: float
    mode: str = "geometric"

    def values(self):
        if self.kappa < 1.0:
            raise ValueError("kappa must be >= 1")
        n, kappa = self.n, self.kappa
        if n == 1:
            return np.array([1.0])
        i = np.arange(n)
        if self.mode == "geometric":
            return kappa ** (-i / (n - 1))
        if self.mode == "arithmetic":
            return 1.0 - (1.0 - 1.0 / kappa) * i / (n - 1)
        if self.mode == "one_small":
            s = np.ones(n)
            s[-1] = 1.0 / kappa
            return s
        raise ValueError(f"unknown mode {self.mode!r}")


def _seed_for(seed, tag):
    ss = np.random.SeedSequence([int(seed), int(tag)])
    return int(ss.generate_state(1, np.uint64)[0])


def haar_frame(m, n, seed):
    """Rotation-invariant random m x n orthonormal frame.

    Thin QR of a standard Gaussian with the R-diagonal sign correction is
    distributionally equal to the leading n columns of a full Haar matrix,
    at O(m n^2) cost instead of O(m^3).
    """
    if m < n:
        raise ValueError("need m >= n")
    rng = np.random.Generator(np.random.Philox(_seed_for(seed, 0)))
    G = rng.standard_normal((m, n))
    return householder_qr(G).Q


def randsvd(spec, seed):
    """Square matrix with the prescribed spectrum and Haar singular vectors."""
    n = spec.n
    sigma = spec.values()
    U = haar_frame(n, n, _seed_for(seed, 1))
    V = haar_frame(n, n, _seed_for(seed, 2))
    return (U * sigma) @ V.T


def worst_coherence_stack(m, n, kappa, seed):
    """Conditioned n x n block stacked on zeros; coherence exactly 1."""
    if m < n:
        raise ValueError("need m >= n")
    R_A = randsvd(SpectrumSpec(n=n, kappa=kappa), seed)
    A = np.zeros((m, n))
    A[:n, :] = R_A
    return A


def haar_rotated(m, n, kappa, seed):
    """Haar frame times a conditioned block; same spectrum, low coherence.

    Shares the conditioned block (and hence the singular values) with
    :func:`worst_coherence_stack` at the same seed.
    """
    if m < n:
        raise ValueError("need m >= n")
    R_A = randsvd(SpectrumSpec(n=n, kappa=kappa), seed)
    Q_A = haar_frame(m, n, _seed_for(seed, 3))
    return Q_A @ R_A


def save_matrix(path, A):
    """Write A as magic + uint64 rows/cols + column-major float64 LE."""
    A = as_matrix(A)
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<QQ", A.shape[0], A.shape[1]))
        fh.write(np.asfortranarray(A).astype("<f8").tobytes(order="F"))


def load_matrix(path):
    """Read a matrix written by :func:`save_matrix`."""
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != _MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        rows, cols = struct.unpack("<QQ", fh.read(16))
        data = np.frombuffer(fh.read(rows * cols * 8), dtype="<f8")
        if data.size != rows * cols:
            raise ValueError(f"{path}: truncated payload")
    return data.reshape((rows, cols), order="F").astype(np.float64)
