"""Closed-form Fourier transforms of diagonal distributions.

Every evaluator returns a :class:`FormulaValue` carrying the per-root
factors it multiplied, so a wrong root classification shows up in the
audit trail rather than only in the final number.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import PoleError
from .rootsys import RootSystem, Weight, exact_pairing, form_pairing
from .symspace import (
    ComponentIndex,
    RootKind,
    SymmetricSpaceSpec,
    classify_root,
    enumerate_components,
    noncompact_roots,
    order_M,
    root_support,
)

__all__ = [
    "Factor",
    "FormulaValue",
    "NORMALIZATIONS",
    "POLE_TOL",
    "c_function",
    "c_function_exact",
    "component_mass",
    "component_term",
    "diagonal_fourier",
    "dh_denominator",
    "eigenfunction_sum",
    "weyl_dimension",
]

POLE_TOL = 1e-12


@dataclass(frozen=True)
class Factor:
    root: tuple[int, ...]
    numerator: complex
    denominator: complex

    @property
    def ratio(self) -> complex:
        return self.numerator / self.denominator


@dataclass(frozen=True)
class FormulaValue:
    """A complex value together with the audit trail that produced it.

    ``prefactor * prod(factor ratios)`` for products; for sums the
    ``terms`` hold the summands, each itself a FormulaValue.
    """

    value: complex
    factors: tuple[Factor, ...] = ()
    prefactor: complex = 1.0
    terms: tuple["FormulaValue", ...] = field(default=(), repr=False)
    label: str = ""

    def __complex__(self):
        return complex(self.value)

    def recompute(self) -> complex:
        if self.terms:
            return complex(sum(t.recompute() for t in self.terms))
        val = complex(self.prefactor)
        for f in self.factors:
            val *= f.ratio
        return val

    def consistent(self, rtol: float = 1e-14) -> bool:
        r = self.recompute()
        return abs(r - self.value) <= rtol * max(abs(self.value), abs(r), 1e-300)

    def as_dict(self) -> dict:
        d = {
            "label": self.label,
            "re": float(np.real(self.value)),
            "im": float(np.imag(self.value)),
        }
        if self.factors:
            d["prefactor"] = [float(np.real(self.prefactor)), float(np.imag(self.prefactor))]
            d["factors"] = [
                {
                    "root": list(f.root),
                    "num": [float(np.real(f.numerator)), float(np.imag(f.numerator))],
                    "den": [float(np.real(f.denominator)), float(np.imag(f.denominator))],
                }
                for f in self.factors
            ]
        if self.terms:
            d["terms"] = [t.as_dict() for t in self.terms]
        return d


def _ratio_product(rs, roots, num_weight, den_weight, prefactor=1.0, label=""):
    factors = []
    val = complex(prefactor)
    for a in roots:
        num = form_pairing(rs, num_weight, a)
        den = form_pairing(rs, den_weight, a)
        if abs(den) < POLE_TOL:
            raise PoleError(f"pole at root {list(map(int, a))}: denominator {den}", root=tuple(map(int, a)))
        factors.append(Factor(tuple(int(x) for x in a), num, den))
        val *= num / den
    return FormulaValue(val, tuple(factors), prefactor, label=label)


def c_function(rs: RootSystem, lam: Weight) -> FormulaValue:
    """Harish-Chandra's ``c(2 delta - i lam) = prod <2 delta, a> / <2 delta - i lam, a>``."""
    two_delta = 2 * rs.weyl_vector
    return _ratio_product(rs, rs.positive_roots, two_delta, two_delta - 1j * lam, label="c")


def c_function_exact(rs: RootSystem, mu: Sequence) -> Fraction:
    """Exact ``c(2 delta + mu)`` for rational ``mu`` (i.e. ``lam = i mu``).

    For ``mu = 2 nu`` with ``nu`` dominant integral this is ``1 / dim V_nu``.
    """
    two_delta = [2] * rs.rank
    shifted = [2 + Fraction(x) for x in mu]
    val = Fraction(1)
    for a in rs.positive_roots:
        den = exact_pairing(rs, shifted, a)
        if den == 0:
            raise PoleError(f"pole at root {a.tolist()}", root=tuple(int(x) for x in a))
        val *= exact_pairing(rs, two_delta, a) / den
    return val


def weyl_dimension(rs: RootSystem, nu: Sequence[int]) -> int:
    """Weyl dimension formula for the irreducible module of highest weight ``nu``."""
    val = Fraction(1)
    for a in rs.positive_roots:
        val *= exact_pairing(rs, [x + 1 for x in nu], a) / exact_pairing(rs, [1] * rs.rank, a)
    assert val.denominator == 1
    return int(val)


NORMALIZATIONS = ("uniform", "shared")


def _check_norm(normalization):
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"normalization must be one of {NORMALIZATIONS}, got {normalization!r}")


def component_mass(spec: SymmetricSpaceSpec, w: ComponentIndex, normalization: str = "uniform") -> float:
    """Predicted volume of the component labelled ``w``.

    ``uniform`` gives ``1/M`` for every component.  ``shared`` gives
    ``Z^{-1} prod^w 1/<delta, a>`` with ``Z = sum_w prod^w 1/<delta, a>``,
    which is what Haar sampling measures (for example 1/4, 1/2, 1/4 on the
    complex projective plane).
    """
    _check_norm(normalization)
    if normalization == "uniform":
        noncompact_roots(spec, w)
        return 1.0 / order_M(spec)
    return float(np.real(_dh_weight(spec, w, spec.root_system.weyl_vector) / _shared_z(spec)))


def _dh_weight(spec, w, shifted) -> complex:
    rs = spec.root_system
    val = 1.0 + 0j
    for a in noncompact_roots(spec, w):
        val /= form_pairing(rs, shifted, a)
    return val


def _shared_z(spec) -> float:
    delta = spec.root_system.weyl_vector
    return float(np.real(sum(_dh_weight(spec, w, delta) for w in enumerate_components(spec))))


def component_term(
    spec: SymmetricSpaceSpec,
    w: ComponentIndex,
    lam: Weight,
    normalization: str = "uniform",
) -> FormulaValue:
    """Integral of ``a_phi^{-i lam}`` over the component labelled ``w``.

    ``p_w prod <delta, a> / <delta - i lam, a>`` over positive roots of
    noncompact type for ``Ad(w) Theta``, where ``p_w`` is
    :func:`component_mass`.  With ``uniform`` normalization ``p_w = 1/M``
    and the value at ``lam = 0`` is exactly ``1/M``.
    """
    rs = spec.root_system
    delta = rs.weyl_vector
    roots = noncompact_roots(spec, w)
    pref = component_mass(spec, w, normalization)
    return _ratio_product(rs, roots, delta, delta - 1j * lam, pref, label=str(w))


def diagonal_fourier(spec: SymmetricSpaceSpec, lam: Weight, normalization: str = "uniform") -> FormulaValue:
    """Fourier transform of the diagonal distribution: sum of component terms."""
    if spec.group_case:
        val = c_function(spec.root_system, lam)
        return FormulaValue(val.value, terms=(val,), label=spec.name)
    terms = tuple(component_term(spec, w, lam, normalization) for w in enumerate_components(spec))
    return FormulaValue(complex(sum(t.value for t in terms)), terms=terms, label=spec.name)


def dh_denominator(spec: SymmetricSpaceSpec, w: ComponentIndex, Lam: Weight) -> complex:
    """``prod <delta + Lam, a>`` over noncompact positive roots (zero factors allowed)."""
    rs = spec.root_system
    shifted = rs.weyl_vector + Lam
    val = 1.0 + 0j
    for a in noncompact_roots(spec, w):
        val *= form_pairing(rs, shifted, a)
    return complex(val)


def _eps_coords(weight: Weight) -> np.ndarray:
    """Type-A weight in epsilon coordinates, normalized to sum zero."""
    c = weight.coeffs
    m = np.concatenate([np.cumsum(c[::-1])[::-1], [0.0]])
    return m - m.mean()


def _from_eps(m: np.ndarray) -> Weight:
    return Weight(m[:-1] - m[1:])


def _block_arrangements(a: np.ndarray, blocks, rtol):
    """Coset representatives of W(K)/W(C_K(a)) as index permutations.

    Each representative is a permutation ``pi`` of positions (within blocks)
    such that the rearranged diagonal is ``a[pi]``; arrangements differing
    only by swapping equal entries are identified.
    """
    per_block = []
    for lo, hi in blocks:
        idx = list(range(lo, hi))
        reps = {}
        for perm in itertools.permutations(idx):
            key = tuple(np.round(np.log(a[list(perm)]) / max(rtol, 1e-300)).astype(np.int64)) \
                if rtol > 0 else tuple(a[list(perm)])
            reps.setdefault(key, perm)
        per_block.append(list(reps.values()))
    for combo in itertools.product(*per_block):
        yield np.array([i for part in combo for i in part])


def eigenfunction_sum(
    spec: SymmetricSpaceSpec,
    a,
    Lam: Weight,
    *,
    rtol: float = 1e-12,
) -> FormulaValue:
    """Fixed-point sum for the spherical-type integral at a torus point ``a``.

    ``sum_w a1(w a)^{-2(delta+Lam)} / prod^w <(delta+Lam)^{w^-1}, alpha>``,
    summed over ``W(K)/W(C_K(a))``.  The product runs over noncompact
    positive roots and over compact positive roots whose root vectors are
    not centralized by ``a``.  ``a1(w a)`` is the positive middle factor of
    the Iwasawa decomposition of the matrix ``w a``.
    """
    from .matreal import a_power, iwasawa

    spec._require_inner()
    rs = spec.root_system
    a = np.asarray(a)
    if a.ndim == 2:
        a = np.real(np.diag(a))
    a = np.asarray(a, dtype=float)
    if a.shape != (spec.n,) or np.any(a <= 0):
        raise ValueError("a must be a positive diagonal of length n")
    if abs(np.sum(np.log(a))) > 1e-9:
        raise ValueError("a must have determinant 1")

    shifted = rs.weyl_vector + Lam
    m = _eps_coords(shifted)
    blocks = [(0, spec.k), (spec.k, spec.n)]
    ident = ComponentIndex.identity(spec.n)
    log_a = np.log(a)

    def centralized(p, q):
        return abs(log_a[p] - log_a[q]) <= rtol * max(1.0, abs(log_a[p]), abs(log_a[q]))

    roots = []
    for alpha in rs.positive_roots:
        kind = classify_root(spec, ident, alpha)
        p, q = root_support(alpha)
        if kind is RootKind.NONCOMPACT or not centralized(p, q):
            roots.append(alpha)

    terms = []
    for pi in _block_arrangements(a, blocks, rtol):
        # permutation matrix P with (P a P^-1)_ii = a_{pi(i)}; sign-fixed into SU(n)
        P = np.zeros((spec.n, spec.n))
        P[np.arange(spec.n), pi] = 1.0
        if np.linalg.det(P) < 0:
            P[0] *= -1
        fac = iwasawa(P @ np.diag(a))
        num = a_power(fac, -2 * shifted)
        # (delta+Lam)^{w^-1}: nu_j = m_{sigma(j)} with sigma = pi^{-1}
        sigma = np.argsort(pi)
        nu = _from_eps(m[sigma])
        factors = []
        val = complex(num)
        for alpha in roots:
            den = form_pairing(rs, nu, alpha)
            if abs(den) < POLE_TOL:
                raise PoleError(f"pole at root {alpha.tolist()} in term {pi.tolist()}",
                                root=tuple(int(x) for x in alpha))
            factors.append(Factor(tuple(int(x) for x in alpha), 1.0, den))
            val /= den
        terms.append(FormulaValue(val, tuple(factors), num, label="".join(map(str, pi))))
    return FormulaValue(complex(sum(t.value for t in terms)), terms=tuple(terms), label="eigenfunction")
