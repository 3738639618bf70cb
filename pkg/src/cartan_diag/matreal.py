"""Matrix realizations: Haar sampling, Cartan embedding, LDU and Iwasawa.

Haar samples are drawn on U(n) rather than SU(n).  Both integrands used
downstream are invariant under ``u -> zeta u`` for a unit scalar ``zeta``:
the moduli ``|Delta_j(zeta u)| = |Delta_j(u)|`` and
``(zeta u) J (zeta u)^* J = u J u^* J``.  Since ``U(n) = U(1) . SU(n)``
and Haar measure on U(n) pushes forward to Haar measure on the quotient by
scalars, averages over U(n) equal averages over SU(n).

All factorization routines accept a single ``(n, n)`` matrix or a stack
``(..., n, n)`` and operate elementwise over leading axes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonGeneric, PhaseError
from .rootsys import Weight
from .symspace import ComponentIndex, SymmetricSpaceSpec, is_admissible

__all__ = [
    "LDUFactors",
    "IwasawaFactors",
    "haar_unitary",
    "cartan_embed",
    "ldu",
    "ldu_diagonal",
    "iwasawa",
    "a_power",
    "component_of",
    "components_from_d",
    "is_unitary",
    "is_special",
    "is_cartan_symmetric",
    "is_indefinite_unitary",
]

CHECK_TOL = 1e-10


def _adj(g):
    return np.conj(np.swapaxes(g, -1, -2))


def is_unitary(g, tol: float = CHECK_TOL) -> bool:
    g = np.asarray(g)
    eye = np.eye(g.shape[-1])
    return bool(np.max(np.abs(g @ _adj(g) - eye)) <= tol)


def is_special(g, tol: float = CHECK_TOL) -> bool:
    return bool(np.max(np.abs(np.linalg.det(g) - 1)) <= tol)


def is_cartan_symmetric(g, J, tol: float = CHECK_TOL) -> bool:
    """``g^* = J g J``."""
    return bool(np.max(np.abs(_adj(g) - J @ g @ J)) <= tol)


def is_indefinite_unitary(g, J, tol: float = CHECK_TOL) -> bool:
    """``g^* J g = J``."""
    return bool(np.max(np.abs(_adj(g) @ J @ g - J)) <= tol)


@dataclass(frozen=True)
class LDUFactors:
    """``g = l diag(d) u`` with unit triangular ``l`` (lower), ``u`` (upper).

    ``minors[..., k]`` is the leading principal minor of size ``k + 1``.
    """

    l: np.ndarray
    d: np.ndarray
    u: np.ndarray
    minors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.l * self.d[..., None, :]) @ self.u

    @property
    def positive_part(self) -> np.ndarray:
        """``a_phi``: moduli of the diagonal entries."""
        return np.abs(self.d)


@dataclass(frozen=True)
class IwasawaFactors:
    """``g = l diag(a) u`` with unit lower ``l``, positive ``a``, unitary ``u``."""

    l: np.ndarray
    a: np.ndarray
    u: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.l * self.a[..., None, :]) @ self.u

    @property
    def positive_part(self) -> np.ndarray:
        return self.a


def haar_unitary(n: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar-distributed unitary matrices.

    A complex Ginibre matrix is orthonormalized by QR and the columns of
    ``Q`` are rotated by the phases of ``diag(R)``; without that correction
    the output is not Haar distributed.

    Parameters
    ----------
    n : int
        Matrix size.
    rng : numpy.random.Generator
        Source stream.  One ``(size, n, n, 2)`` standard normal block is drawn,
        so a prefix of a larger request reproduces a smaller one.
    size : int, optional
        Number of matrices; a single ``(n, n)`` matrix when omitted.
    """
    if n < 1:
        raise ValueError("n must be positive")
    count = 1 if size is None else int(size)
    while True:
        z = rng.standard_normal((count, n, n, 2))
        z = (z[..., 0] + 1j * z[..., 1]) / np.sqrt(2.0)
        q, r = np.linalg.qr(z)
        diag = np.diagonal(r, axis1=-2, axis2=-1)
        mod = np.abs(diag)
        if np.all(mod > 0):
            break
    q = q * (diag / mod)[..., None, :]
    return q[0] if size is None else q


def cartan_embed(u, spec_or_J) -> np.ndarray:
    """``g = u J u^* J``, the image of ``uK`` under the Cartan embedding."""
    J = spec_or_J.J if isinstance(spec_or_J, SymmetricSpaceSpec) else np.asarray(spec_or_J)
    u = np.asarray(u)
    return u @ J @ _adj(u) @ J


def _row_scale(g):
    """Hadamard bound on the leading minors: cumulative products of row norms."""
    return np.cumprod(np.linalg.norm(g, axis=-1), axis=-1)


def ldu_diagonal(g, tol: float = 1e-12):
    """Diagonal of the LDU factorization for a stack, without raising.

    Returns
    -------
    d : ndarray, shape (..., n)
    generic : ndarray of bool, shape (...)
        False where some ``|Delta_k| < tol * prod_{i<=k} ||row_i||``.
    """
    a = np.array(g, dtype=complex, copy=True)
    n = a.shape[-1]
    d = np.empty(a.shape[:-1], dtype=complex)
    scale = _row_scale(a)
    minors = np.ones(a.shape[:-2], dtype=complex)
    generic = np.ones(a.shape[:-2], dtype=bool)
    for k in range(n):
        piv = a[..., k, k]
        minors = minors * piv
        generic &= np.abs(minors) >= tol * scale[..., k]
        safe = np.where(piv == 0, 1.0, piv)
        d[..., k] = piv
        if k < n - 1:
            lcol = a[..., k + 1:, k] / safe[..., None]
            a[..., k + 1:, k + 1:] -= lcol[..., :, None] * a[..., k, None, k + 1:]
    return d, generic


def ldu(g, tol: float = 1e-12) -> LDUFactors:
    """Unpivoted LDU (Gauss/Doolittle) factorization.

    Raises
    ------
    NonGeneric
        If a leading minor is below ``tol`` times its Hadamard bound, i.e.
        the matrix is numerically in a lower stratum.  No pivoting is done.
    """
    g = np.asarray(g, dtype=complex)
    n = g.shape[-1]
    if g.shape[-2] != n:
        raise ValueError("ldu needs square matrices")
    a = g.copy()
    l = np.broadcast_to(np.eye(n, dtype=complex), g.shape).copy()
    u = np.broadcast_to(np.eye(n, dtype=complex), g.shape).copy()
    d = np.empty(g.shape[:-1], dtype=complex)
    scale = _row_scale(g)
    minors = np.empty(g.shape[:-1], dtype=complex)
    running = np.ones(g.shape[:-2], dtype=complex)
    for k in range(n):
        piv = a[..., k, k]
        running = running * piv
        minors[..., k] = running
        if np.any(np.abs(running) < tol * scale[..., k]):
            raise NonGeneric(f"leading minor {k + 1} vanishes (relative tolerance {tol})")
        d[..., k] = piv
        l[..., k + 1:, k] = a[..., k + 1:, k] / piv[..., None]
        u[..., k, k + 1:] = a[..., k, k + 1:] / piv[..., None]
        a[..., k + 1:, k + 1:] -= l[..., k + 1:, k, None] * a[..., k, None, k + 1:]
    return LDUFactors(l, d, u, minors)


def iwasawa(g) -> IwasawaFactors:
    """``g = l a u`` from the QR factorization of ``g^*``.

    ``g^* = Q R`` gives ``g = R^* Q^*`` with ``R^*`` lower triangular; the
    phases of ``diag(R)`` are moved into ``Q`` so that ``a = diag(R^*) > 0``.
    QR is used rather than a Cholesky factor of ``g g^*``, which would
    square the condition number.
    """
    g = np.asarray(g, dtype=complex)
    q, r = np.linalg.qr(_adj(g))
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    mod = np.abs(diag)
    if np.any(mod == 0):
        raise np.linalg.LinAlgError("iwasawa needs an invertible matrix")
    ph = diag / mod
    r = r / ph[..., :, None]
    q = q * ph[..., None, :]
    C = _adj(r)
    a = np.real(np.diagonal(C, axis1=-2, axis2=-1)).copy()
    u = _adj(q)
    l = C / a[..., None, :]
    return IwasawaFactors(l, a, u)


def a_power(factors, mu: Weight) -> complex | np.ndarray:
    """``a^mu`` from the positive diagonal of LDU or Iwasawa factors.

    With ``a_k`` the positive diagonal, ``log a(h_j) = sum_{i<=j} log a_i``
    for unimodular inputs, hence ``a^mu = exp(sum_j mu_j sum_{i<=j} log a_i)``
    where ``mu_j`` are fundamental-weight coefficients.  Equivalently
    ``prod_j |Delta_j|^{mu_j}``.
    """
    pos = factors.positive_part if hasattr(factors, "positive_part") else np.asarray(factors)
    pos = np.asarray(pos, dtype=float)
    if np.any(pos <= 0):
        raise ValueError("a_power needs a strictly positive diagonal")
    logs = np.cumsum(np.log(pos), axis=-1)[..., :-1]
    if logs.shape[-1] != mu.rank:
        raise ValueError(f"weight rank {mu.rank} does not match matrix size {pos.shape[-1]}")
    out = np.exp(logs @ mu.coeffs)
    return complex(out) if np.ndim(out) == 0 else out


def components_from_d(d, tol: float = 1e-6):
    """Sign vectors of stacked LDU diagonals; raises PhaseError off +-1."""
    ph = d / np.abs(d)
    signs = np.where(np.real(ph) > 0, 1, -1)
    dev = np.max(np.abs(ph - signs), axis=-1)
    if np.any(dev > tol):
        raise PhaseError(f"LDU phase deviates from +-1 by {float(np.max(dev)):.3g} (tolerance {tol})")
    return signs.astype(np.int8)


def component_of(
    factors: LDUFactors,
    spec: SymmetricSpaceSpec,
    tol: float = 1e-6,
    struct_tol: float = 1e-8,
) -> ComponentIndex:
    """Component label ``w`` of a Cartan-embedded point from its LDU factors.

    Also checks the symmetric structure ``u = J l^* J`` of the outer factors.
    """
    J = spec.J
    scale = max(np.max(np.abs(factors.u)), np.max(np.abs(factors.l)))
    if np.max(np.abs(factors.u - J @ _adj(factors.l) @ J)) > struct_tol * scale:
        raise PhaseError("upper factor is not J l^* J: input is not Cartan-symmetric")
    w = ComponentIndex(tuple(int(s) for s in components_from_d(factors.d, tol)))
    if not spec.group_case and not is_admissible(spec, w):
        raise PhaseError(f"sign vector {w} is not an admissible component of {spec.name}")
    return w
