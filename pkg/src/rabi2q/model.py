"""Model parameters and the parity-chain bookkeeping.

The Hilbert space of a single boson mode coupled to two qubits splits into
two invariant subspaces under the parity operator sz(1)*sz(2)*(-1)^n.  Each
subspace is spanned by an ordered chain of product states in which the
Hamiltonian is block tridiagonal.  This module owns the chain orderings and
the maps between chain positions and product states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple


class QubitLevel(Enum):
    """Two-level state label; sz convention: e -> +1, g -> -1."""

    G = "g"
    E = "e"

    @property
    def sz(self) -> int:
        return 1 if self is QubitLevel.E else -1

    def flipped(self) -> "QubitLevel":
        return QubitLevel.E if self is QubitLevel.G else QubitLevel.G


class Parity(Enum):
    EVEN = "even"
    ODD = "odd"

    @property
    def sign(self) -> int:
        return 1 if self is Parity.EVEN else -1


class ParityChainIndex(NamedTuple):
    parity: Parity
    j: int


@dataclass(frozen=True)
class ModelParams:
    """Frequencies and couplings of the two-qubit Rabi Hamiltonian.

    omega_f is the field frequency and serves as the reference unit; the
    qubit frequencies and couplings are given in the same units.  Couplings
    may be any real number; only |g_1| != |g_2| matters for the recurrence
    construction of eigenstates.
    """

    omega_1: float
    omega_2: float
    g_1: float
    g_2: float
    omega_f: float = 1.0

    def __post_init__(self):
        for name in ("omega_1", "omega_2", "g_1", "g_2", "omega_f"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.omega_f <= 0:
            raise ValueError("omega_f must be positive")
        if self.omega_1 < 0 or self.omega_2 < 0:
            raise ValueError("qubit frequencies must be non-negative")

    @property
    def g_plus(self) -> float:
        return self.g_1 + self.g_2

    @property
    def g_minus(self) -> float:
        return self.g_1 - self.g_2

    def normalized(self) -> "ModelParams":
        """Same model with all quantities expressed in units of omega_f."""
        w = self.omega_f
        return ModelParams(self.omega_1 / w, self.omega_2 / w,
                           self.g_1 / w, self.g_2 / w, 1.0)


@dataclass(frozen=True)
class TruncationConfig:
    """Photon-number cutoff; chain length is 2*(n_max+1) per parity."""

    n_max: int

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")

    @property
    def chain_dim(self) -> int:
        return 2 * (self.n_max + 1)

    @property
    def full_dim(self) -> int:
        return 4 * (self.n_max + 1)


_G, _E = QubitLevel.G, QubitLevel.E

# Within-block qubit-pair order for photon number n: index by (parity, n % 2).
_BLOCK_PAIRS = {
    (Parity.EVEN, 0): ((_G, _G), (_E, _E)),
    (Parity.EVEN, 1): ((_E, _G), (_G, _E)),
    (Parity.ODD, 0): ((_E, _G), (_G, _E)),
    (Parity.ODD, 1): ((_G, _G), (_E, _E)),
}


def chain_state(parity: Parity, j: int) -> tuple[int, QubitLevel, QubitLevel]:
    """Product state (n, q1, q2) at position j of the given parity chain."""
    if j < 0:
        raise ValueError("chain position must be >= 0")
    n = j // 2
    q1, q2 = _BLOCK_PAIRS[(parity, n % 2)][j % 2]
    return n, q1, q2


def parity_of_product_state(n: int, q1: QubitLevel, q2: QubitLevel) -> Parity:
    """Parity eigenvalue of |n, q1, q2>: even iff sz1*sz2*(-1)^n = +1."""
    if n < 0:
        raise ValueError("photon number must be >= 0")
    sign = q1.sz * q2.sz * (-1) ** n
    return Parity.EVEN if sign == 1 else Parity.ODD


def chain_index_of(n: int, q1: QubitLevel, q2: QubitLevel) -> ParityChainIndex:
    """Inverse of chain_state: chain position of the product state."""
    parity = parity_of_product_state(n, q1, q2)
    pair = _BLOCK_PAIRS[(parity, n % 2)]
    return ParityChainIndex(parity, 2 * n + pair.index((q1, q2)))


# Full product basis |n> x |q1> x |q2>, qubit-pair order (ee, eg, ge, gg).
_PAIR_ORDER = ((_E, _E), (_E, _G), (_G, _E), (_G, _G))


def full_basis_index(n: int, q1: QubitLevel, q2: QubitLevel) -> int:
    """Row index of |n, q1, q2> in the full product basis."""
    if n < 0:
        raise ValueError("photon number must be >= 0")
    return 4 * n + _PAIR_ORDER.index((q1, q2))


def full_basis_state(i: int) -> tuple[int, QubitLevel, QubitLevel]:
    q1, q2 = _PAIR_ORDER[i % 4]
    return i // 4, q1, q2


def chain_to_full_indices(parity: Parity, trunc: TruncationConfig) -> list[int]:
    """Full-basis index of every chain position, in chain order."""
    return [full_basis_index(*chain_state(parity, j))
            for j in range(trunc.chain_dim)]
