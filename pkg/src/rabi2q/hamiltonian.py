"""Hamiltonian construction.

Builds the full truncated Hamiltonian in the product basis, its parity-block
form (block tridiagonal with 2x2 blocks), the parity operator, the full-basis
RWA Hamiltonian, and the per-excitation-sector RWA blocks.  All matrices are
real symmetric by construction (complex arithmetic enters only in dynamics).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (ModelParams, Parity, QubitLevel, TruncationConfig,
                    chain_state, chain_to_full_indices, full_basis_index)


def diag_energy(params: ModelParams, n: int, q1: QubitLevel,
                q2: QubitLevel) -> float:
    """Free energy n*omega_f + (sz1*omega_1 + sz2*omega_2)/2."""
    return n * params.omega_f + 0.5 * (q1.sz * params.omega_1
                                       + q2.sz * params.omega_2)


@dataclass(frozen=True)
class BlockTridiagonal:
    """Parity-block Hamiltonian: diagonal blocks D_j and off blocks O_j.

    d_blocks[j] holds the two diagonal entries of D_j for 0 <= j <= n_max;
    o_blocks[j-1] is the symmetric 2x2 block O_j = sqrt(j)*[[g1,g2],[g2,g1]]
    coupling photon numbers j-1 and j.
    """

    parity: Parity
    d_blocks: np.ndarray
    o_blocks: np.ndarray

    @property
    def n_max(self) -> int:
        return self.d_blocks.shape[0] - 1

    @property
    def dim(self) -> int:
        return 2 * self.d_blocks.shape[0]


def build_parity_blocks(params: ModelParams, parity: Parity,
                        trunc: TruncationConfig) -> BlockTridiagonal:
    """Block-tridiagonal form of the Hamiltonian in one parity chain."""
    n_blocks = trunc.n_max + 1
    d = np.empty((n_blocks, 2))
    for j in range(n_blocks):
        for slot in range(2):
            n, q1, q2 = chain_state(parity, 2 * j + slot)
            d[j, slot] = diag_energy(params, n, q1, q2)
    coupling = np.array([[params.g_1, params.g_2], [params.g_2, params.g_1]])
    o = np.sqrt(np.arange(1, n_blocks))[:, None, None] * coupling
    return BlockTridiagonal(parity, d, o)


def expand_dense(blocks: BlockTridiagonal) -> np.ndarray:
    """Dense symmetric matrix with D_j on the diagonal and O_j off it."""
    dim = blocks.dim
    h = np.zeros((dim, dim))
    h[np.arange(dim), np.arange(dim)] = blocks.d_blocks.ravel()
    for j in range(1, blocks.n_max + 1):
        r = 2 * (j - 1)
        block = blocks.o_blocks[j - 1]
        h[r:r + 2, r + 2:r + 4] = block
        h[r + 2:r + 4, r:r + 2] = block.T
    return h


def build_parity_matrix(params: ModelParams, parity: Parity,
                        trunc: TruncationConfig) -> np.ndarray:
    return expand_dense(build_parity_blocks(params, parity, trunc))


def build_full(params: ModelParams, trunc: TruncationConfig) -> np.ndarray:
    """Hamiltonian in the product basis |n>|q1>|q2>, photon cutoff n_max."""
    dim = trunc.full_dim
    h = np.zeros((dim, dim))
    levels = (QubitLevel.E, QubitLevel.G)
    for n in range(trunc.n_max + 1):
        for q1 in levels:
            for q2 in levels:
                i = full_basis_index(n, q1, q2)
                h[i, i] = diag_energy(params, n, q1, q2)
                if n < trunc.n_max:
                    # (a + a+) matrix element between |n> and |n+1>
                    amp = np.sqrt(n + 1.0)
                    j1 = full_basis_index(n + 1, q1.flipped(), q2)
                    h[i, j1] = h[j1, i] = params.g_1 * amp
                    j2 = full_basis_index(n + 1, q1, q2.flipped())
                    h[i, j2] = h[j2, i] = params.g_2 * amp
    return h


def build_parity_operator(trunc: TruncationConfig) -> np.ndarray:
    """Diagonal +-1 matrix of sz(1)*sz(2)*(-1)^(a+a) in the product basis."""
    dim = trunc.full_dim
    diag = np.empty(dim)
    levels = (QubitLevel.E, QubitLevel.G)
    for n in range(trunc.n_max + 1):
        for q1 in levels:
            for q2 in levels:
                sign = q1.sz * q2.sz * (-1) ** n
                diag[full_basis_index(n, q1, q2)] = sign
    return np.diag(diag)


def build_rwa_full(params: ModelParams, trunc: TruncationConfig) -> np.ndarray:
    """Full-basis Hamiltonian with counter-rotating coupling terms dropped.

    Keeps the free terms and the excitation-conserving couplings
    g_j (a sigma+^j + a+ sigma-^j).
    """
    dim = trunc.full_dim
    h = np.zeros((dim, dim))
    levels = (QubitLevel.E, QubitLevel.G)
    for n in range(trunc.n_max + 1):
        for q1 in levels:
            for q2 in levels:
                i = full_basis_index(n, q1, q2)
                h[i, i] = diag_energy(params, n, q1, q2)
                if n < trunc.n_max:
                    amp = np.sqrt(n + 1.0)
                    # a+ sigma-^j: photon up, qubit j de-excited
                    if q1 is QubitLevel.E:
                        j1 = full_basis_index(n + 1, QubitLevel.G, q2)
                        h[i, j1] = h[j1, i] = params.g_1 * amp
                    if q2 is QubitLevel.E:
                        j2 = full_basis_index(n + 1, q1, QubitLevel.G)
                        h[i, j2] = h[j2, i] = params.g_2 * amp
    return h


def excitation_number_operator(trunc: TruncationConfig) -> np.ndarray:
    """Diagonal of N = a+a + (sz1+sz2)/2 + 1 in the product basis."""
    dim = trunc.full_dim
    diag = np.empty(dim)
    levels = (QubitLevel.E, QubitLevel.G)
    for n in range(trunc.n_max + 1):
        for q1 in levels:
            for q2 in levels:
                diag[full_basis_index(n, q1, q2)] = n + (q1.sz + q2.sz) / 2 + 1
    return np.diag(diag)


@dataclass(frozen=True)
class RwaExcitationBlock:
    """One excitation sector of the RWA Hamiltonian in the rotating frame.

    Sector N couples {|N-2,ee>, |N-1,eg>, |N-1,ge>, |N,gg>}; rows whose
    photon number would be negative are dropped, so the ground sector is
    1x1 and the one-excitation sector 3x3.  basis lists the surviving
    (photon, q1, q2) labels in row order.
    """

    sector: int
    matrix: np.ndarray
    basis: tuple[tuple[int, QubitLevel, QubitLevel], ...]


def build_rwa_excitation_block(params: ModelParams, n: int) -> RwaExcitationBlock:
    """Excitation-sector block with detunings on the diagonal.

    Diagonal entries are (D1+D2, D1-D2, -D1+D2, -D1-D2) with
    D_j = (omega_j - omega_f)/2; off-diagonal couplings carry sqrt(n-1)
    between the ee row and the single-excited rows and sqrt(n) between the
    single-excited rows and the gg row.
    """
    if n < 0:
        raise ValueError("sector label must be >= 0")
    d1 = 0.5 * (params.omega_1 - params.omega_f)
    d2 = 0.5 * (params.omega_2 - params.omega_f)
    e, g = QubitLevel.E, QubitLevel.G
    full_basis = ((n - 2, e, e), (n - 1, e, g), (n - 1, g, e), (n, g, g))
    diag = (d1 + d2, d1 - d2, -d1 + d2, -d1 - d2)
    keep = [i for i, (ph, _, _) in enumerate(full_basis) if ph >= 0]
    m = np.zeros((4, 4))
    m[np.arange(4), np.arange(4)] = diag
    s = np.sqrt(n - 1.0) if n >= 1 else 0.0
    t = np.sqrt(float(n))
    m[0, 1] = m[1, 0] = params.g_2 * s
    m[0, 2] = m[2, 0] = params.g_1 * s
    m[1, 3] = m[3, 1] = params.g_1 * t
    m[2, 3] = m[3, 2] = params.g_2 * t
    sub = m[np.ix_(keep, keep)]
    basis = tuple(full_basis[i] for i in keep)
    return RwaExcitationBlock(n, sub, basis)


def parity_permutation(trunc: TruncationConfig) -> tuple[list[int], list[int]]:
    """Full-basis indices of the even chain then the odd chain, in order."""
    return (chain_to_full_indices(Parity.EVEN, trunc),
            chain_to_full_indices(Parity.ODD, trunc))
