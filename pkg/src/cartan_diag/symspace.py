"""Inner symmetric spaces of SU(n) and their open LDU components.

A space is the Grassmannian ``SU(k+m)/S(U(k) x U(m))`` with involution
``Ad(J)``, ``J = diag(1_k, -1_m)``, or the group case ``X = SU(n)``.  The
open components of the generic stratum of the Cartan-embedded space are
labelled by sign vectors ``w`` (diagonal elements of order two in SU(n));
``w`` is admissible when ``w J`` is conjugate to ``J``, i.e. has exactly
``k`` entries equal to +1.
"""
from __future__ import annotations

import enum
import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InadmissibleComponent
from .rootsys import RootSystem, build_root_system, weyl_group_order

__all__ = [
    "ComponentIndex",
    "RootKind",
    "SymmetricSpaceSpec",
    "CATALOG",
    "get_space",
    "grassmannian",
    "group_space",
    "enumerate_components",
    "classify_root",
    "noncompact_roots",
    "order_M",
    "root_support",
]


class RootKind(str, enum.Enum):
    COMPACT = "compact"
    NONCOMPACT = "noncompact"


@dataclass(frozen=True)
class ComponentIndex:
    """Sign vector ``w`` in {+1,-1}^n with an even number of -1 entries."""

    signs: tuple[int, ...]

    def __post_init__(self):
        s = tuple(int(x) for x in self.signs)
        if any(x not in (1, -1) for x in s):
            raise ValueError(f"component signs must be +-1, got {s}")
        if s.count(-1) % 2:
            raise ValueError(f"sign vector {s} has odd number of -1 entries (not in SU(n))")
        object.__setattr__(self, "signs", s)

    @classmethod
    def identity(cls, n: int) -> "ComponentIndex":
        return cls((1,) * n)

    @property
    def n(self) -> int:
        return len(self.signs)

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(np.array(self.signs, dtype=float))

    def __neg__(self) -> "ComponentIndex":
        return ComponentIndex(tuple(-x for x in self.signs))

    def character(self, root) -> int:
        """Value of ``w^alpha`` on a type-A root given in simple-root coordinates."""
        p, q = root_support(root)
        return self.signs[p] * self.signs[q]

    def label(self) -> str:
        return "".join("+" if x > 0 else "-" for x in self.signs)

    def __str__(self):
        return self.label()


def root_support(root) -> tuple[int, int]:
    """Indices ``(p, q)`` with ``root = e_p - e_q`` (0-based) for a type-A root."""
    v = np.asarray(root)
    nz = np.nonzero(v)[0]
    if nz.size == 0:
        raise ValueError("zero vector is not a root")
    sign = int(np.sign(v[nz[0]]))
    if not np.all(v[nz[0]: nz[-1] + 1] == sign) or nz[-1] - nz[0] + 1 != nz.size:
        raise ValueError(f"{v.tolist()} is not a type-A root")
    p, q = int(nz[0]), int(nz[-1]) + 1
    return (p, q) if sign > 0 else (q, p)


@dataclass(frozen=True)
class SymmetricSpaceSpec:
    name: str
    n: int
    k: int
    m: int
    group_case: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not self.group_case and (self.k < 1 or self.m < 1 or self.k + self.m != self.n):
            raise ValueError(f"invalid signature ({self.k}, {self.m}) for n={self.n}")

    @cached_property
    def root_system(self) -> RootSystem:
        return build_root_system("A", self.n - 1)

    @property
    def J(self) -> np.ndarray:
        return np.diag(np.array([1.0] * self.k + [-1.0] * self.m))

    @property
    def a0_dim(self) -> int:
        """Dimension of the outer part of the Cartan subalgebra (zero for inner involutions)."""
        return 0

    @property
    def weyl_order_K(self) -> int:
        blocks = [build_root_system("A", b - 1) for b in (self.k, self.m) if b > 1]
        return weyl_group_order(blocks)

    @property
    def dim(self) -> int:
        """Real dimension of U/K."""
        return 2 * self.k * self.m

    def _require_inner(self):
        if self.group_case:
            raise ValueError(f"{self.name} is a group case; components are trivial there")


def grassmannian(k: int, m: int) -> SymmetricSpaceSpec:
    return SymmetricSpaceSpec(f"gr:{k},{m}", k + m, k, m)


def group_space(n: int) -> SymmetricSpaceSpec:
    return SymmetricSpaceSpec(f"group:su{n}", n, n, 0, group_case=True)


CATALOG: dict[str, str] = {
    "group:su2": "SU(2) as a symmetric space (group case)",
    "group:su3": "SU(3) as a symmetric space (group case)",
    "gr:1,1": "2-sphere, SU(2)/U(1)",
    "gr:1,2": "complex projective plane, SU(3)/S(U(1)xU(2))",
    "gr:2,2": "Grassmannian Gr(2,C^4)",
}

_MAX_N = 8


def get_space(name: str) -> SymmetricSpaceSpec:
    """Resolve a catalog key; ``gr:k,m`` and ``group:suN`` also parse for other sizes."""
    key = name.strip().lower()
    mg = re.fullmatch(r"group:su(\d+)", key)
    mr = re.fullmatch(r"gr:(\d+),(\d+)", key)
    if mg:
        n = int(mg.group(1))
        if 2 <= n <= _MAX_N:
            return group_space(n)
    elif mr:
        k, m = int(mr.group(1)), int(mr.group(2))
        if k >= 1 and m >= 1 and k + m <= _MAX_N:
            return grassmannian(k, m)
    raise KeyError(f"unknown space {name!r}; known: {', '.join(CATALOG)}")


def _admissible(spec: SymmetricSpaceSpec, signs) -> bool:
    wj = np.array(signs) * np.diag(spec.J)
    return int(np.sum(wj > 0)) == spec.k


def enumerate_components(spec: SymmetricSpaceSpec) -> list[ComponentIndex]:
    """Admissible sign vectors, identity first, then lexicographic (+ before -)."""
    spec._require_inner()
    out = []
    for signs in itertools.product((1, -1), repeat=spec.n):
        if signs.count(-1) % 2 == 0 and _admissible(spec, signs):
            out.append(ComponentIndex(signs))
    expected = order_M(spec)
    if len(out) != expected:
        raise AssertionError(f"{spec.name}: {len(out)} components but M = {expected}")
    return out


def is_admissible(spec: SymmetricSpaceSpec, w: ComponentIndex) -> bool:
    spec._require_inner()
    return w.n == spec.n and _admissible(spec, w.signs)


def classify_root(spec: SymmetricSpaceSpec, w: ComponentIndex, alpha) -> RootKind:
    """Compact iff ``Ad(w J)`` fixes the root space of ``alpha``."""
    if spec.group_case:
        raise ValueError("root classification needs an inner involution")
    v = spec.root_system.as_root(alpha)
    if not spec.root_system.is_positive(v):
        raise ValueError(f"{v.tolist()} is not a positive root")
    # J itself may have det -1, so take the character of w J entrywise
    wj = np.array(w.signs) * np.diag(spec.J)
    p, q = root_support(v)
    return RootKind.COMPACT if wj[p] * wj[q] > 0 else RootKind.NONCOMPACT


def noncompact_roots(spec: SymmetricSpaceSpec, w: ComponentIndex) -> list[np.ndarray]:
    if not is_admissible(spec, w):
        raise InadmissibleComponent(f"{w} is not an admissible component of {spec.name}")
    return [a for a in spec.root_system.positive_roots
            if classify_root(spec, w, a) is RootKind.NONCOMPACT]


def order_M(spec: SymmetricSpaceSpec) -> int:
    """``|W(U)| / |W(K)|``, the number of open components."""
    spec._require_inner()
    m_val, rem = divmod(weyl_group_order(spec.root_system), spec.weyl_order_K)
    assert rem == 0 and m_val == math.comb(spec.n, spec.k)
    return m_val
