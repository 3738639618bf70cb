"""Evens-Lu operator on G0/K, its Pfaffian, momentum map and volume Jacobian.

``G0 = SU(k, m)`` is realized as the matrices with ``g^* J g = J`` and
determinant one, ``J = diag(1_k, -1_m)``.  Its Cartan decomposition is
``g0 = k + p`` with ``k`` the block-diagonal and ``p`` the block
off-diagonal Hermitian part.  Tangent vectors at ``g0 K`` are identified
with ``p`` by right translation, ``y -> d/de g0 exp(e y) K``.

The trace form ``Re tr(x y^*)`` is used in place of the Killing form.  On
``su(n)`` the two are proportional (Killing = ``2n`` times trace), and
every certified statement is either an operator identity built from
orthonormal coordinates or a ratio, so the constant drops out.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import linalg as sla

from .errors import StepTooSmall
from .matreal import a_power, cartan_embed, is_indefinite_unitary, iwasawa, ldu
from .rootsys import Weight

__all__ = [
    "OMEGA_SIGN",
    "NoncompactPoint",
    "TangentOperator",
    "p_basis",
    "k_basis",
    "random_point",
    "random_k",
    "evens_lu_operator",
    "pfaffian",
    "pfaffian_residual",
    "skew_residual",
    "ad_on_p",
    "symplectic_form",
    "momentum_map",
    "fundamental_field",
    "momentum_residual",
    "momentum_convergence",
    "jacobian_ratio",
    "a_phi_two_ways",
    "ray_momentum",
]

# orientation of omega = +-(Omega^{-1}); -1 makes d mu_X = omega(X_M, .) hold
OMEGA_SIGN = -1


def _J(k, m):
    return np.diag([1.0] * k + [-1.0] * m)


def p_basis(k: int, m: int) -> list[np.ndarray]:
    """Orthonormal basis of ``p`` for the trace form.

    For each pair ``i < k <= j`` the two vectors are
    ``(i E_ij - i E_ji)/sqrt 2`` then ``(E_ij + E_ji)/sqrt 2``.  This order
    fixes the orientation in which the Pfaffian is positive.
    """
    n = k + m
    out = []
    for i in range(k):
        for j in range(k, n):
            F = np.zeros((n, n), dtype=complex)
            F[i, j], F[j, i] = 1j, -1j
            E = np.zeros((n, n), dtype=complex)
            E[i, j] = E[j, i] = 1.0
            out += [F / np.sqrt(2), E / np.sqrt(2)]
    return out


def _skew_basis(n: int, keep) -> list[np.ndarray]:
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            if keep(i, j):
                E = np.zeros((n, n), dtype=complex)
                E[i, j], E[j, i] = 1.0, -1.0
                F = np.zeros((n, n), dtype=complex)
                F[i, j] = F[j, i] = 1j
                out += [E / np.sqrt(2), F / np.sqrt(2)]
    for j in range(n - 1):
        d = np.zeros(n)
        d[: j + 1] = 1.0
        d[j + 1] = -(j + 1)
        out.append(1j * np.diag(d / np.linalg.norm(d)))
    return out


def k_basis(k: int, m: int) -> list[np.ndarray]:
    """Orthonormal basis of ``k = s(u(k) + u(m))``."""
    return _skew_basis(k + m, lambda i, j: (i < k) == (j < k))


def _u_basis(n: int) -> list[np.ndarray]:
    return _skew_basis(n, lambda i, j: True)


def _coords(y, basis) -> np.ndarray:
    return np.array([np.real(np.trace(b.conj().T @ y)) for b in basis])


def _ppart(x, J):
    return (x - J @ x @ J) / 2


@dataclass(frozen=True)
class NoncompactPoint:
    """A representative ``g0`` of a point of ``G0/K``."""

    g0: np.ndarray
    k: int
    m: int

    def __post_init__(self):
        g = np.asarray(self.g0, dtype=complex)
        object.__setattr__(self, "g0", g)
        if g.shape != (self.n, self.n):
            raise ValueError(f"g0 must be {self.n}x{self.n}")
        if not is_indefinite_unitary(g, self.J, 1e-9):
            raise ValueError("g0 does not preserve the indefinite form")
        if abs(np.linalg.det(g) - 1) > 1e-9:
            raise ValueError("g0 must have determinant 1")

    @property
    def n(self) -> int:
        return self.k + self.m

    @property
    def J(self) -> np.ndarray:
        return _J(self.k, self.m)

    @cached_property
    def factors(self):
        return iwasawa(self.g0)

    def right(self, x) -> "NoncompactPoint":
        """``g0 exp(x)``."""
        return NoncompactPoint(self.g0 @ sla.expm(x), self.k, self.m)

    @classmethod
    def identity(cls, k: int, m: int) -> "NoncompactPoint":
        return cls(np.eye(k + m, dtype=complex), k, m)


@dataclass(frozen=True)
class TangentOperator:
    point: NoncompactPoint
    matrix: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def random_point(k: int, m: int, rng: np.random.Generator, radius: float = 2.0, with_k: bool = False) -> NoncompactPoint:
    """``exp(x)`` for a Gaussian ``x`` in ``p`` shrunk to norm at most ``radius``."""
    basis = p_basis(k, m)
    x = sum(c * b for c, b in zip(rng.standard_normal(len(basis)), basis))
    norm = np.sqrt(np.real(np.trace(x @ x.conj().T)))
    if norm > radius:
        x = x * (radius / norm)
    g = sla.expm(x)
    if with_k:
        g = g @ random_k(k, m, rng)
    return NoncompactPoint(g, k, m)


def random_k(k: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """Element of ``K = S(U(k) x U(m))`` as exp of a Gaussian in ``k``."""
    basis = k_basis(k, m)
    x = sum(c * b for c, b in zip(rng.standard_normal(len(basis)), basis))
    return sla.expm(x)


def _pr_g0(x, J):
    """Projection onto ``g0`` along the Iwasawa complement.

    Strictly upper part ``x_+`` is kept, its ``sigma`` image
    ``-J x_+^* J`` fills the lower part, and the diagonal keeps only its
    imaginary part.
    """
    up = np.triu(x, 1)
    return -J @ up.conj().T @ J + np.diag(1j * np.imag(np.diag(x))) + up


def evens_lu_operator(p: NoncompactPoint) -> TangentOperator:
    """``Omega(g0) x = ( g0^{-1} pr(i g0 x g0^{-1}) g0 )_p`` in orthonormal coordinates."""
    J = p.J
    g = p.g0
    gi = np.linalg.inv(g)
    basis = p_basis(p.k, p.m)
    cols = []
    for e in basis:
        y = _ppart(gi @ _pr_g0(1j * g @ e @ gi, J) @ g, J)
        cols.append(_coords(y, basis))
    return TangentOperator(p, np.array(cols).T)


def skew_residual(op: TangentOperator) -> float:
    return float(np.max(np.abs(op.matrix + op.matrix.T)))


def pfaffian(A) -> float:
    """Pfaffian by expansion along the first row (fine for dimension <= 8)."""
    A = np.asarray(A)
    n = A.shape[0]
    if n % 2:
        return 0.0
    if n == 0:
        return 1.0
    total = 0.0
    for j in range(1, n):
        rest = [i for i in range(n) if i not in (0, j)]
        total += (-1) ** (j + 1) * A[0, j] * pfaffian(A[np.ix_(rest, rest)])
    return total


def pfaffian_residual(p: NoncompactPoint) -> float:
    """``|Pf(Omega) - a^{2 delta}| / a^{2 delta}``, ``a`` the Iwasawa factor of g0."""
    pf = pfaffian(evens_lu_operator(p).matrix)
    target = np.real(a_power(p.factors, 2 * Weight(np.ones(p.n - 1))))
    return float(abs(pf - target) / abs(target))


def ad_on_p(kmat, k: int, m: int) -> np.ndarray:
    """Matrix of ``Ad(kmat)`` restricted to ``p`` in the orthonormal basis."""
    basis = p_basis(k, m)
    ki = np.linalg.inv(kmat)
    return np.array([_coords(kmat @ e @ ki, basis) for e in basis]).T


def symplectic_form(p: NoncompactPoint, sign: int = OMEGA_SIGN) -> np.ndarray:
    """Matrix ``W`` of ``omega(u, v) = u^T W v = sign <Omega^{-1} u, v>``."""
    return sign * np.linalg.inv(evens_lu_operator(p).matrix).T


def _as_torus(X, n):
    X = np.asarray(X)
    if X.ndim == 1:
        X = 1j * np.diag(X.astype(float))
    if X.shape != (n, n) or np.max(np.abs(X - np.diag(np.diag(X)))) > 0:
        raise ValueError("X must be a diagonal element of the torus algebra")
    if np.max(np.abs(np.real(np.diag(X)))) > 0 or abs(np.trace(X)) > 1e-12:
        raise ValueError("X must be imaginary diagonal with trace zero")
    return X


def momentum_map(g0, X) -> float:
    """``mu_X(g0 K) = Re tr(i log a(g0) X)``."""
    g0 = np.asarray(g0)
    X = _as_torus(X, g0.shape[0])
    a = iwasawa(g0).a
    return float(np.real(np.trace(1j * np.diag(np.log(a)) @ X)))


def fundamental_field(p: NoncompactPoint, X) -> np.ndarray:
    """Generator of ``t -> exp(t X) g0 K`` in the right-translated ``p`` coordinates."""
    X = _as_torus(X, p.n)
    gi = np.linalg.inv(p.g0)
    return _coords(_ppart(gi @ X @ p.g0, p.J), p_basis(p.k, p.m))


def momentum_residual(p: NoncompactPoint, X, h: float = 1e-4, sign: int = OMEGA_SIGN) -> float:
    """``max_y |d mu_X(y) - omega(X_M, y)|`` over the basis of ``p``, central differences."""
    if not 1e-6 <= h <= 1e-3:
        raise StepTooSmall(f"step {h} outside [1e-6, 1e-3]") if h < 1e-6 else ValueError(
            f"step {h} outside [1e-6, 1e-3]"
        )
    X = _as_torus(X, p.n)
    basis = p_basis(p.k, p.m)
    W = symplectic_form(p, sign)
    xm = fundamental_field(p, X)
    worst = 0.0
    for b, e in enumerate(basis):
        plus = momentum_map(p.g0 @ sla.expm(h * e), X)
        minus = momentum_map(p.g0 @ sla.expm(-h * e), X)
        fd = (plus - minus) / (2 * h)
        worst = max(worst, abs(fd - xm @ W[:, b]))
    return worst


def momentum_convergence(p: NoncompactPoint, X, steps=(4e-4, 2e-4, 1e-4), floor: float = 1e-13):
    """Residuals over successively halved steps.

    Raises
    ------
    StepTooSmall
        If a residual above ``floor`` fails to decrease when the step is
        halved, the sign of round-off domination.
    """
    res = [float(momentum_residual(p, X, h)) for h in steps]
    for prev, cur in zip(res, res[1:]):
        if cur > prev and cur > floor:
            raise StepTooSmall(f"residuals {res} are not decreasing; steps are round-off dominated")
    return res


def _phi_u(g, J):
    return cartan_embed(iwasawa(g).u, J)


def jacobian_ratio(p: NoncompactPoint, h: float = 1e-4, route: str = "lift") -> float:
    """Volume distortion of ``g0 -> u(g0)`` divided by ``a_phi^{2 delta}``.

    ``lift``: determinant of ``x -> d/de u(exp(e x) g0) u(g0)^{-1}`` from all
    of ``g0`` to ``u``, orthonormal bases on both sides.
    ``gram``: ``sqrt det(D^T D)`` for ``y -> d/de phi(u(g0 exp(e y)))``
    (right-translated to the identity) on ``p``.

    In either case the returned ratio should not depend on ``p``.
    """
    J = p.J
    a_phi_2delta = np.real(a_power(p.factors, -4 * Weight(np.ones(p.n - 1))))
    ubasis = _u_basis(p.n)
    if route == "lift":
        src = k_basis(p.k, p.m) + p_basis(p.k, p.m)
        ui = iwasawa(p.g0).u.conj().T
        D = np.empty((len(ubasis), len(src)))
        for b, x in enumerate(src):
            up = iwasawa(sla.expm(h * x) @ p.g0).u
            um = iwasawa(sla.expm(-h * x) @ p.g0).u
            D[:, b] = _coords((up - um) @ ui / (2 * h), ubasis)
        jac = abs(np.linalg.det(D))
    elif route == "gram":
        src = p_basis(p.k, p.m)
        gi = np.linalg.inv(_phi_u(p.g0, J))
        D = np.empty((len(ubasis), len(src)))
        for b, y in enumerate(src):
            plus = _phi_u(p.g0 @ sla.expm(h * y), J)
            minus = _phi_u(p.g0 @ sla.expm(-h * y), J)
            D[:, b] = _coords((plus - minus) @ gi / (2 * h), ubasis)
        jac = float(np.sqrt(np.linalg.det(D.T @ D)))
    else:
        raise ValueError(f"unknown route {route!r}")
    return float(jac / a_phi_2delta)


def a_phi_two_ways(p: NoncompactPoint) -> float:
    """Max relative gap between ``|d|`` of LDU(phi(u(g0))) and ``a(g0)^{-2}``."""
    direct = np.abs(ldu(_phi_u(p.g0, p.J)).d)
    via = p.factors.a ** -2.0
    return float(np.max(np.abs(direct - via) / via))


def ray_momentum(x, X, ts, k: int, m: int) -> np.ndarray:
    """``mu_X(exp(t x) K)`` along the ray spanned by ``x`` in ``p``."""
    return np.array([momentum_map(sla.expm(t * np.asarray(x)), X) for t in ts])
