"""SL(2)-factor coordinates on Schubert cells and minor-based coefficients.

Type A only: the group is SL(n) acting on C^n, ``i_j`` embeds SL(2) into
rows and columns ``j, j+1`` and ``r_j = i_j([[0, 1], [-1, 0]])``.  A point
of a Bott-Samelson chart is ``r_n i_n(g_n) ... r_1 i_1(g_1)``.

Lowest-weight matrix coefficients are realized as products of leading
principal minors: ``sigma_lam(g) = prod_j Delta_j(g)^{m_j}`` for the
antidominant ``lam = -sum_j m_j Lambda_j``, and the ``w``-translate is
``sigma_lam^w(g) = sigma_lam(W^{-1} g)`` with ``W`` the fixed matrix
representative of ``w`` built from the ``r_j``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .closedform import POLE_TOL
from .errors import PoleError
from .rootsys import RootSystem, Weight, WeylWord, inversion_roots, longest_word

__all__ = [
    "ROTATION",
    "SL2Factor",
    "ParabolicWordData",
    "sl2_embed",
    "random_sl2_prime",
    "word_representative",
    "bs_point",
    "sigma_eval",
    "sigma_lambda",
    "sigma_translate",
    "sigma_translate_exact",
    "verify_a26",
    "factored_c_integral",
]

ROTATION = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)


@dataclass(frozen=True)
class SL2Factor:
    g: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.g, dtype=complex)
        if g.shape != (2, 2):
            raise ValueError("SL2 factor must be 2x2")
        if abs(np.linalg.det(g) - 1) > 1e-12:
            raise ValueError(f"SL2 factor has determinant {np.linalg.det(g)}, not 1")
        object.__setattr__(self, "g", g)

    @property
    def a(self) -> complex:
        return complex(self.g[0, 0])

    @property
    def in_prime(self) -> bool:
        """True on the open cell ``a != 0``."""
        return self.a != 0

    @classmethod
    def from_abc(cls, a, b, c) -> "SL2Factor":
        """Factor ``[[a, b], [c, (1 + b c)/a]]`` with ``a != 0``."""
        return cls(np.array([[a, b], [c, (1 + b * c) / a]], dtype=complex))


def random_sl2_prime(rng: np.random.Generator, zero_a: bool = False) -> SL2Factor:
    """Random factor with Gaussian entries; ``zero_a`` gives ``[[0, b], [-1/b, d]]``."""
    z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    if zero_a:
        b = z[1] if abs(z[1]) > 1e-3 else 1.0
        return SL2Factor(np.array([[0.0, b], [-1.0 / b, z[3]]], dtype=complex))
    a = z[0] if abs(z[0]) > 1e-3 else 1.0
    return SL2Factor.from_abc(a, z[1], z[2])


def sl2_embed(rs: RootSystem, i: int, g) -> np.ndarray:
    """``i_{alpha_i}(g)``: ``g`` placed in rows/columns ``i, i+1`` (1-based)."""
    if rs.series != "A":
        raise ValueError("matrix realization is implemented for type A only")
    if not 1 <= i <= rs.rank:
        raise ValueError(f"simple index {i} out of range 1..{rs.rank}")
    g = g.g if isinstance(g, SL2Factor) else np.asarray(g, dtype=complex)
    out = np.eye(rs.rank + 1, dtype=complex)
    out[i - 1:i + 1, i - 1:i + 1] = g
    return out


@dataclass(frozen=True)
class ParabolicWordData:
    """A reduced word with an optional simple-root subset ``phi``."""

    rs: RootSystem
    word: WeylWord
    phi: frozenset = frozenset()

    def __post_init__(self):
        for i in self.phi:
            if not 1 <= i <= self.rs.rank:
                raise ValueError(f"simple index {i} out of range")
        inversion_roots(self.rs, self.word, "tau")

    @cached_property
    def taus(self) -> list[np.ndarray]:
        return inversion_roots(self.rs, self.word, "tau")

    def exponents(self, lam: Weight) -> np.ndarray:
        """``lam_j = -lam(h_{tau_j})``."""
        return np.array([-self.rs.coroot_value(lam, t) for t in self.taus])


def word_representative(rs: RootSystem, word: WeylWord) -> np.ndarray:
    """Matrix ``W = r_{i_n} ... r_{i_1}``."""
    W = np.eye(rs.rank + 1, dtype=complex)
    for i in word:
        W = sl2_embed(rs, i, ROTATION) @ W
    return W


def bs_point(data: ParabolicWordData, factors: Sequence[SL2Factor]) -> np.ndarray:
    """``r_n i_n(g_n) ... r_1 i_1(g_1)``."""
    if len(factors) != len(data.word):
        raise ValueError(f"need {len(data.word)} factors, got {len(factors)}")
    rs = data.rs
    P = np.eye(rs.rank + 1, dtype=complex)
    for i, f in zip(data.word, factors):
        P = sl2_embed(rs, i, ROTATION) @ sl2_embed(rs, i, f) @ P
    return P


def sigma_eval(g, j: int) -> complex:
    """``sigma_{Lambda_j}(g)``: the ``j``-th leading principal minor."""
    g = np.asarray(g)
    if not 1 <= j <= g.shape[0] - 1:
        raise ValueError(f"fundamental index {j} out of range 1..{g.shape[0] - 1}")
    return complex(np.linalg.det(g[:j, :j]))


def _antidominant_exponents(lam: Weight) -> list[int]:
    c = lam.coeffs
    if not lam.is_real or np.any(np.real(c) > 0) or np.any(np.real(c) != np.round(np.real(c))):
        raise ValueError(f"{lam} is not integral antidominant")
    return [int(-x) for x in np.real(c)]


def sigma_lambda(g, lam: Weight) -> complex:
    """``sigma_lam(g) = prod_j Delta_j(g)^{m_j}`` for ``lam = -sum m_j Lambda_j``."""
    ms = _antidominant_exponents(lam)
    val = 1.0 + 0j
    for j, mj in enumerate(ms, start=1):
        if mj:
            val *= sigma_eval(g, j) ** mj
    return val


def sigma_translate(data: ParabolicWordData, g, lam: Weight) -> complex:
    """``sigma_lam^w(g) = sigma_lam(W^{-1} g)``."""
    W = word_representative(data.rs, data.word)
    return sigma_lambda(np.linalg.solve(W, g), lam)


# Exact evaluation: every float is a dyadic rational, so products of chart
# matrices and their minors can be formed without rounding.  A Gaussian
# rational is a pair (re, im) of Fractions.

def _gq(z) -> tuple[Fraction, Fraction]:
    z = complex(z)
    return Fraction(z.real), Fraction(z.imag)


def _gmul(x, y):
    return x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0]


def _gadd(x, y):
    return x[0] + y[0], x[1] + y[1]


_GZERO = (Fraction(0), Fraction(0))
_GONE = (Fraction(1), Fraction(0))


def _exact_matmul(A, B):
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = _GZERO
            for k in range(n):
                if A[i][k] != _GZERO and B[k][j] != _GZERO:
                    acc = _gadd(acc, _gmul(A[i][k], B[k][j]))
            row.append(acc)
        out.append(row)
    return out


def _exact_det(A):
    """Leibniz expansion; matrices here are at most 3x3 minors."""
    n = len(A)
    total = _GZERO
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = _GONE
        for i, p in enumerate(perm):
            term = _gmul(term, A[i][p])
            if term == _GZERO:
                break
        if inv % 2:
            term = (-term[0], -term[1])
        total = _gadd(total, term)
    return total


def _gpow(x, e: int):
    out = _GONE
    for _ in range(e):
        out = _gmul(out, x)
    return out


def sigma_translate_exact(data: ParabolicWordData, factors: Sequence[SL2Factor], lam: Weight) -> complex:
    """``sigma_lam^w`` of the chart point in exact rational arithmetic.

    The floating-point entries of the factors are taken as exact
    rationals; the chart product, the translate by the signed permutation
    ``W^{-1} = W^T`` and the leading minors are then computed exactly.  A
    value that vanishes identically on the given entries returns exactly 0.
    """
    if len(factors) != len(data.word):
        raise ValueError(f"need {len(data.word)} factors, got {len(factors)}")
    rs = data.rs
    ms = _antidominant_exponents(lam)
    def exact(mat):
        return [[_gq(x) for x in row] for row in mat]

    # W^{-1} = W^T for the signed permutation W; the chart point is
    # r_n i(g_n) ... r_1 i(g_1), so its translate is W^T r_n i(g_n) ... r_1 i(g_1)
    P = exact(word_representative(rs, data.word).T)
    for i, f in reversed(list(zip(data.word, factors))):
        P = _exact_matmul(P, exact(sl2_embed(rs, i, ROTATION)))
        P = _exact_matmul(P, exact(sl2_embed(rs, i, f)))
    val = _GONE
    for j, mj in enumerate(ms, start=1):
        if mj:
            val = _gmul(val, _gpow(_exact_det([row[:j] for row in P[:j]]), mj))
    return complex(float(val[0]), float(val[1]))


def verify_a26(data: ParabolicWordData, factors: Sequence[SL2Factor], lam: Weight) -> float:
    """Relative gap between ``sigma_lam^w`` of the chart point and ``prod a_j^{lam_j}``."""
    lhs = sigma_translate(data, bs_point(data, factors), lam)
    exps = data.exponents(lam)
    rhs = 1.0 + 0j
    for f, e in zip(factors, exps):
        e = int(round(float(np.real(e))))
        if e:
            rhs *= f.a ** e
    return float(abs(lhs - rhs) / max(1.0, abs(rhs)))


def factored_c_integral(rs: RootSystem, lam: Weight) -> complex:
    """``prod_tau (2 delta)(h_tau) / (2 delta - i lam)(h_tau)`` over the tau roots of the longest word.

    Each factor is one SL(2) coordinate integral; the tau roots of a
    reduced longest word run over all positive roots exactly once.
    """
    two_delta = 2 * rs.weyl_vector
    shifted = two_delta - 1j * lam
    val = 1.0 + 0j
    for tau in inversion_roots(rs, longest_word(rs), "tau"):
        den = rs.coroot_value(shifted, tau)
        if abs(den) < POLE_TOL:
            raise PoleError(f"pole at root {tau.tolist()}", root=tuple(int(x) for x in tau))
        val *= rs.coroot_value(two_delta, tau) / den
    return complex(val)
