"""Finite root systems (types A-D), weights and Weyl-group words.

Roots are stored as integer coordinate vectors over the simple roots.
Weights are stored by their coefficients over the fundamental weights, so
that ``weight.coeffs[i]`` is the value of the weight on the i-th simple
coroot.  The invariant form is normalized so that long roots have squared
length 2; ``RootSystem.scaled`` produces a copy with a rescaled form, which
must leave every ratio of pairings unchanged.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import NonReducedWord, UnsupportedRootSystem

__all__ = [
    "RootSystem",
    "Weight",
    "WeylWord",
    "build_root_system",
    "form_pairing",
    "longest_word",
    "inversion_roots",
    "weyl_group_order",
    "weyl_orbit_size",
]

_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3}


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


def _euclidean_data(series: str, r: int):
    """Simple and positive roots in the usual orthonormal realization."""
    if series == "A":
        dim = r + 1
    else:
        dim = r
    e = np.eye(dim)
    simple = [e[i] - e[i + 1] for i in range(r - 1)]
    if series == "A":
        simple.append(e[r - 1] - e[r])
    elif series == "B":
        simple.append(e[r - 1])
    elif series == "C":
        simple.append(2 * e[r - 1])
    elif series == "D":
        simple.append(e[r - 2] + e[r - 1])

    pos = []
    if series == "A":
        pos = [e[i] - e[j] for i in range(dim) for j in range(i + 1, dim)]
    else:
        for i in range(r):
            for j in range(i + 1, r):
                pos.append(e[i] - e[j])
                pos.append(e[i] + e[j])
        if series == "B":
            pos += [e[i] for i in range(r)]
        elif series == "C":
            pos += [2 * e[i] for i in range(r)]
    return np.array(simple), np.array(pos)


@dataclass(frozen=True)
class Weight:
    """Complex linear functional on the Cartan subalgebra.

    Coefficients are taken over the fundamental weights.  Real coefficients
    give elements of the real dual; Fourier parameters are real weights and
    their deformations such as ``2*delta - 1j*lam`` are complex.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        object.__setattr__(self, "coeffs", _frozen(c))

    @property
    def rank(self) -> int:
        return self.coeffs.shape[0]

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.coeffs.imag == 0))

    def _check(self, other: "Weight"):
        if not isinstance(other, Weight):
            return NotImplemented
        if other.rank != self.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Weight(self.coeffs + other.coeffs)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Weight(self.coeffs - other.coeffs)

    def __neg__(self):
        return Weight(-self.coeffs)

    def __mul__(self, s):
        if isinstance(s, Weight):
            return NotImplemented
        return Weight(self.coeffs * s)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Weight):
            return NotImplemented
        return self.rank == other.rank and bool(np.all(self.coeffs == other.coeffs))

    def __hash__(self):
        return hash(tuple(self.coeffs.tolist()))

    def __repr__(self):
        return f"Weight({self.coeffs.tolist()})"

    @classmethod
    def zero(cls, rank: int) -> "Weight":
        return cls(np.zeros(rank))


@dataclass(frozen=True)
class WeylWord:
    """Word ``(i_1, ..., i_n)`` in simple reflections (1-based indices).

    The word denotes ``w = r_{i_n} ... r_{i_1}``: the first index acts first.
    """

    indices: tuple[int, ...]
    reduced: bool = True

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)


@dataclass(frozen=True)
class RootSystem:
    series: str
    rank: int
    cartan_matrix: np.ndarray
    simple_roots: np.ndarray
    positive_roots: np.ndarray
    form: np.ndarray
    simple_lengths: tuple[Fraction, ...] = field(repr=False)
    form_scale: Fraction = Fraction(1)

    @property
    def label(self) -> str:
        return f"{self.series}{self.rank}"

    @property
    def n_positive(self) -> int:
        return self.positive_roots.shape[0]

    @property
    def weyl_vector(self) -> Weight:
        """delta, half the sum of positive roots."""
        return Weight(np.ones(self.rank))

    @property
    def fundamental_weights(self) -> tuple[Weight, ...]:
        return tuple(Weight(row) for row in np.eye(self.rank))

    @property
    def weyl_order(self) -> int:
        return weyl_group_order(self)

    def scaled(self, c) -> "RootSystem":
        """Same root system with the invariant form multiplied by ``c > 0``."""
        if not c > 0:
            raise ValueError("form scale must be positive")
        fc = Fraction(c).limit_denominator(10**12)
        return RootSystem(
            self.series,
            self.rank,
            self.cartan_matrix,
            self.simple_roots,
            self.positive_roots,
            _frozen(self.form * float(fc)),
            tuple(x * fc for x in self.simple_lengths),
            self.form_scale * fc,
        )

    # -- conversions -------------------------------------------------------
    def as_root(self, root) -> np.ndarray:
        v = np.asarray(root)
        if v.shape != (self.rank,):
            raise ValueError(f"root must have {self.rank} simple-root coordinates, got shape {v.shape}")
        return v

    def weight_of_root(self, root) -> Weight:
        """Express a root (or any simple-root combination) as a Weight."""
        v = np.asarray(self.as_root(root), dtype=float)
        return Weight(self.cartan_matrix @ v)

    def weight_from_root_coords(self, coords: Sequence[complex]) -> Weight:
        """Weight with the given (possibly complex) simple-root coefficients."""
        v = np.asarray(coords, dtype=complex)
        if v.shape != (self.rank,):
            raise ValueError(f"expected {self.rank} coefficients, got {v.shape}")
        return Weight(self.cartan_matrix @ v)

    def coroot_value(self, weight: Weight, root) -> complex:
        """``weight(h_alpha) = 2 <weight, alpha> / <alpha, alpha>``."""
        v = self.as_root(root)
        return 2 * form_pairing(self, weight, v) / form_pairing(self, v, v)

    def root_length2(self, root) -> float:
        v = np.asarray(self.as_root(root), dtype=float)
        return float(v @ self.form @ v)

    # -- Weyl group action -------------------------------------------------
    def reflect_root(self, root, i: int) -> np.ndarray:
        """Simple reflection ``r_i`` (1-based) applied to a root."""
        v = np.asarray(root, dtype=int)
        c = int(self.cartan_matrix[i - 1] @ v)
        out = v.copy()
        out[i - 1] -= c
        return out

    def reflect_weight(self, weight: Weight, i: int) -> Weight:
        c = weight.coeffs[i - 1]
        return Weight(weight.coeffs - c * self.cartan_matrix[:, i - 1])

    def is_positive(self, root) -> bool:
        v = np.asarray(root)
        return bool(np.all(v >= 0) and np.any(v > 0))

    def word(self, indices: Iterable[int]) -> WeylWord:
        """Build a WeylWord, rejecting non-reduced input."""
        idx = tuple(int(i) for i in indices)
        for i in idx:
            if not 1 <= i <= self.rank:
                raise ValueError(f"simple index {i} out of range 1..{self.rank}")
        w = WeylWord(idx, True)
        inversion_roots(self, w, "tau")
        return w


def build_root_system(series: str, rank: int) -> RootSystem:
    series = str(series).upper()
    if series not in _MIN_RANK:
        raise UnsupportedRootSystem(f"unsupported series {series!r}; expected one of A, B, C, D")
    if int(rank) != rank or rank < _MIN_RANK[series]:
        raise UnsupportedRootSystem(
            f"series {series} needs rank >= {_MIN_RANK[series]}, got {rank}"
        )
    rank = int(rank)
    simple, pos = _euclidean_data(series, rank)
    gram = simple @ simple.T
    long2 = Fraction(float(np.max(np.einsum("ij,ij->i", pos, pos)))).limit_denominator(8)
    scale = Fraction(2) / long2
    coords = np.rint(np.linalg.lstsq(simple.T, pos.T, rcond=None)[0].T).astype(int)
    if not np.allclose(coords @ simple, pos):
        raise AssertionError("positive roots not integral over simple roots")
    heights = coords.sum(axis=1)
    # height order; ties reverse-lexicographic so alpha_1 precedes alpha_2
    order = sorted(range(len(coords)), key=lambda j: (heights[j], tuple(-coords[j])))
    coords = coords[order]
    form = gram * float(scale)
    lengths = tuple(Fraction(float(x)).limit_denominator(8) * scale for x in np.diag(gram))
    cartan = np.rint(2 * gram / np.diag(gram)[:, None]).astype(int)
    return RootSystem(
        series,
        rank,
        _frozen(cartan),
        _frozen(np.eye(rank, dtype=int)),
        _frozen(coords),
        _frozen(form),
        lengths,
    )


def form_pairing(rs: RootSystem, w1, w2) -> complex:
    """Invariant form ``<w1, w2>``; ``w1`` a Weight or root, ``w2`` a root."""
    v2 = np.asarray(w2)
    if isinstance(w2, Weight) or v2.shape != (rs.rank,):
        raise ValueError(f"second argument must be a root with {rs.rank} coordinates")
    if isinstance(w1, Weight):
        if w1.rank != rs.rank:
            raise ValueError(f"weight rank {w1.rank} does not match root system rank {rs.rank}")
        half_len = np.diag(rs.form) / 2.0
        val = complex(np.sum(w1.coeffs * v2 * half_len))
    else:
        v1 = np.asarray(w1, dtype=float)
        if v1.shape != (rs.rank,):
            raise ValueError(f"dimension mismatch: {v1.shape} vs ({rs.rank},)")
        val = complex(v1 @ rs.form @ v2)
    return val


def exact_pairing(rs: RootSystem, coeffs: Sequence, root) -> Fraction:
    """Rational ``<weight, root>`` for a weight with rational fundamental coefficients."""
    return sum(
        (Fraction(c) * int(n) * ln / 2 for c, n, ln in zip(coeffs, root, rs.simple_lengths)),
        Fraction(0),
    )


def longest_word(rs: RootSystem) -> WeylWord:
    """Reduced word for the longest element, built by walking delta to -delta."""
    wt = rs.weyl_vector.coeffs.real.copy()
    idx = []
    while True:
        pos = np.nonzero(wt > 0)[0]
        if pos.size == 0:
            break
        i = int(pos[0]) + 1
        idx.append(i)
        wt = wt - wt[i - 1] * rs.cartan_matrix[:, i - 1]
    return WeylWord(tuple(idx), True)


def inversion_roots(rs: RootSystem, word: WeylWord, convention: str = "beta") -> list[np.ndarray]:
    """Inversion roots of ``w = r_{i_n} ... r_{i_1}``.

    ``beta``: ``beta_j = r_n ... r_{j+1}(alpha_{i_j})``, the positive roots sent
    negative by ``w^{-1}``.
    ``tau``: ``tau_j = r_1 ... r_{j-1}(alpha_{i_j})``, the positive roots sent
    negative by ``w``.
    """
    idx = tuple(word.indices if isinstance(word, WeylWord) else word)
    n = len(idx)
    out = []
    for j in range(n):
        v = np.zeros(rs.rank, dtype=int)
        v[idx[j] - 1] = 1
        if convention == "beta":
            for p in idx[j + 1:]:
                v = rs.reflect_root(v, p)
        elif convention == "tau":
            for p in reversed(idx[:j]):
                v = rs.reflect_root(v, p)
        else:
            raise ValueError(f"unknown convention {convention!r}")
        out.append(v)
    seen = {tuple(v) for v in out}
    if len(seen) != n or not all(rs.is_positive(v) for v in out):
        raise NonReducedWord(f"word {idx} is not reduced")
    return out


def weyl_group_order(*systems) -> int:
    """|W| of a root system, or of a product of root systems.

    Accepts RootSystem arguments or a single iterable of them; an empty
    product (a torus) has order 1.
    """
    if len(systems) == 1 and not isinstance(systems[0], RootSystem):
        systems = tuple(systems[0])
    order = 1
    for rs in systems:
        r = rs.rank
        if rs.series == "A":
            order *= math.factorial(r + 1)
        elif rs.series in ("B", "C"):
            order *= 2**r * math.factorial(r)
        elif rs.series == "D":
            order *= 2 ** (r - 1) * math.factorial(r)
        else:  # pragma: no cover
            raise UnsupportedRootSystem(rs.series)
    return order


def weyl_orbit_size(rs: RootSystem, weight: Weight | None = None, limit: int = 50000) -> int:
    """Size of the Weyl orbit of a weight, by breadth-first search.

    For a regular weight (the default is delta) this equals |W|.
    """
    start = rs.weyl_vector if weight is None else weight
    key = lambda w: tuple(np.round(w.coeffs, 9).tolist())
    seen = {key(start)}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for i in range(1, rs.rank + 1):
            v = rs.reflect_weight(w, i)
            k = key(v)
            if k not in seen:
                seen.add(k)
                if len(seen) > limit:
                    raise RuntimeError("orbit enumeration exceeded limit")
                queue.append(v)
    return len(seen)
