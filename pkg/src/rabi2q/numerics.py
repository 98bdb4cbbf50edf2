"""Shared numerical kernels.

Dense symmetric eigendecomposition (LAPACK via numpy), associated Laguerre
polynomials, displacement-operator matrix elements, and spectral-decomposition
time propagation.  Everything here is pure; decompositions may be shared
read-only across threads.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceFailure


class EigenDecomposition(NamedTuple):
    """Eigenvalues ascending and the matching orthonormal column vectors."""

    values: np.ndarray
    vectors: np.ndarray


def eigh(h: np.ndarray) -> EigenDecomposition:
    """Full spectrum of a real symmetric matrix, ascending.

    Uses the standard orthogonal reduction to tridiagonal form with
    implicitly shifted iteration (LAPACK).  Raises ConvergenceFailure if the
    iteration does not converge, which signals pathological input.
    """
    h = np.asarray(h, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.array_equal(h, h.T):
        scale = np.max(np.abs(h)) or 1.0
        if np.max(np.abs(h - h.T)) > 1e-12 * scale:
            raise ValueError("matrix is not symmetric")
    try:
        values, vectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return EigenDecomposition(values, vectors)


def laguerre_assoc(n: int, k: int, z: float) -> float:
    """Associated Laguerre polynomial L_n^(k)(z).

    Evaluated by the three-term recurrence in the degree, which is stable
    for z >= 0 and integer order k >= 0.
    """
    if n < 0:
        raise ValueError("degree must be >= 0")
    if k < 0:
        raise ValueError("order must be >= 0")
    if n == 0:
        return 1.0
    prev = 1.0
    cur = 1.0 + k - z
    for i in range(1, n):
        prev, cur = cur, ((2 * i + 1 + k - z) * cur - (i + k) * prev) / (i + 1)
    return cur


def displacement_element(m: int, n: int, x: float) -> float:
    """Fock matrix element <m| D(2x) |n> of a real displacement by 2x.

    For m >= n this is sqrt(n!/m!) (2x)^(m-n) exp(-2x^2) L_n^(m-n)(4x^2);
    the m < n case follows from <m|D|n> = (-1)^(n-m) <n|D|m> for real
    arguments.  The factorial ratio is evaluated in log space so the formula
    stays finite well past m, n ~ 85.
    """
    if m < 0 or n < 0:
        raise ValueError("Fock indices must be >= 0")
    if m < n:
        return (-1) ** (n - m) * displacement_element(n, m, x)
    d = m - n
    log_ratio = 0.5 * (math.lgamma(n + 1) - math.lgamma(m + 1))
    mag = math.exp(log_ratio - 2.0 * x * x) if abs(x) < 200 else 0.0
    return mag * (2.0 * x) ** d * laguerre_assoc(n, d, 4.0 * x * x)


def propagate_spectral(decomp: EigenDecomposition, c0: np.ndarray,
                       t: float | np.ndarray) -> np.ndarray:
    """Apply exp(-i H t) to c0 using the eigendecomposition of H.

    t may be a scalar (returns a vector) or a 1-d array of output times
    (returns an array with one column per time).  Exactly unitary on the
    truncated space up to roundoff.
    """
    values, vectors = decomp
    c0 = np.asarray(c0, dtype=complex)
    if c0.shape[0] != values.shape[0]:
        raise ValueError("state dimension does not match decomposition")
    proj = vectors.T.conj() @ c0
    t_arr = np.asarray(t, dtype=float)
    if t_arr.ndim == 0:
        return vectors @ (np.exp(-1j * values * float(t_arr)) * proj)
    phases = np.exp(-1j * np.outer(values, t_arr))
    return vectors @ (phases * proj[:, None])
