"""Monte Carlo over Haar measure and rank-one hyperbolic quadrature.

Samples are generated in fixed-size blocks.  Block ``b`` of a run with seed
``s`` draws from a Philox stream keyed by ``(s, b)``, so every sample is a
function of ``(seed, sample index)`` alone.  Blocks may be processed on any
number of threads; their partial sums are combined in block order, which
makes estimates bit-identical for every worker count.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import integrate

from .errors import PhaseError, QuadratureError
from .matreal import (
    a_power,
    cartan_embed,
    components_from_d,
    haar_unitary,
    iwasawa,
    ldu,
    ldu_diagonal,
)
from .rootsys import Weight
from .symspace import ComponentIndex, SymmetricSpaceSpec, enumerate_components, get_space

__all__ = [
    "BLOCK_SIZE",
    "MIN_SAMPLES",
    "ComponentStats",
    "MCEstimate",
    "block_rng",
    "estimate_group_integral",
    "estimate_diagonal_integral",
    "hyperbolic_quadrature",
    "worker_count",
]

BLOCK_SIZE = 1 << 15
MIN_SAMPLES = 1000
_THREADS_ENV = "CARTAN_DIAG_THREADS"


def worker_count() -> int:
    """Worker threads: ``CARTAN_DIAG_THREADS`` if set, else the CPU count."""
    raw = os.environ.get(_THREADS_ENV)
    if raw:
        try:
            val = int(raw)
        except ValueError as exc:
            raise ValueError(f"{_THREADS_ENV} must be a positive integer, got {raw!r}") from exc
        if val < 1:
            raise ValueError(f"{_THREADS_ENV} must be a positive integer, got {raw!r}")
        return val
    return os.cpu_count() or 1


def block_rng(seed: int, block: int) -> np.random.Generator:
    """Counter-based stream for one block of a run."""
    ss = np.random.SeedSequence([int(seed), int(block)])
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class ComponentStats:
    """Per-component bin.

    ``mean``/``stderr`` describe the conditional mean of the integrand on the
    component; ``contribution`` is ``(1/N) sum f 1_w`` (the component's share
    of the integral); ``mass`` is ``count/N`` with binomial ``mass_stderr``.
    """

    label: str
    count: int
    mass: float
    mass_stderr: float
    mean_re: float
    mean_im: float
    stderr: float
    contribution_re: float
    contribution_im: float
    contribution_stderr: float
    admissible: bool = True

    @property
    def mean(self) -> complex:
        return complex(self.mean_re, self.mean_im)

    @property
    def contribution(self) -> complex:
        return complex(self.contribution_re, self.contribution_im)


@dataclass(frozen=True)
class MCEstimate:
    mean_re: float
    mean_im: float
    stderr: float
    n_samples: int
    n_rejected: int
    seed: int
    components: tuple[ComponentStats, ...] = field(default=())

    @property
    def mean(self) -> complex:
        return complex(self.mean_re, self.mean_im)

    @property
    def per_component(self) -> dict[str, ComponentStats]:
        return {c.label: c for c in self.components}

    @property
    def n_inadmissible(self) -> int:
        return sum(c.count for c in self.components if not c.admissible)

    def z_score(self, target: complex) -> float:
        return _z(self.mean, target, self.stderr)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["components"] = [asdict(c) for c in self.components]
        return d

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "MCEstimate":
        comps = tuple(ComponentStats(**c) for c in d.get("components", ()))
        return cls(**{**d, "components": comps})


def _z(mean: complex, target: complex, stderr: float) -> float:
    diff = abs(complex(mean) - complex(target))
    if stderr == 0:
        return 0.0 if diff == 0 else float("inf")
    return diff / stderr


# per-block accumulator: [count, sum_re, sum_im, sumsq_re, sumsq_im]
def _accumulate(values: np.ndarray) -> np.ndarray:
    return np.array(
        [
            values.size,
            np.sum(values.real),
            np.sum(values.imag),
            np.sum(values.real ** 2),
            np.sum(values.imag ** 2),
        ]
    )


def _stderr(acc: np.ndarray, denom: int) -> float:
    """Standard error of the complex mean ``sum/denom`` from raw moments."""
    if denom < 2:
        return 0.0
    m_re, m_im = acc[1] / denom, acc[2] / denom
    var = max(acc[3] / denom - m_re ** 2, 0.0) + max(acc[4] / denom - m_im ** 2, 0.0)
    return float(np.sqrt(var * denom / (denom - 1) / denom))


def _block_sizes(n_samples: int) -> list[int]:
    full, rest = divmod(n_samples, BLOCK_SIZE)
    return [BLOCK_SIZE] * full + ([rest] if rest else [])


def _run_blocks(kernel, n_samples: int, seed: int):
    sizes = _block_sizes(n_samples)
    jobs = [(b, size) for b, size in enumerate(sizes)]
    threads = min(worker_count(), len(jobs))
    if threads <= 1:
        return [kernel(b, size) for b, size in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: kernel(*job), jobs))


def _check_inputs(lam: Weight, rank: int, n_samples: int):
    if not isinstance(lam, Weight):
        raise TypeError("lambda must be a Weight")
    if lam.rank != rank:
        raise ValueError(f"lambda has {lam.rank} coefficients, expected {rank}")
    if not lam.is_real:
        raise ValueError("lambda must be real")
    if int(n_samples) < MIN_SAMPLES:
        raise ValueError(f"n_samples must be at least {MIN_SAMPLES}")


def estimate_group_integral(n: int, lam: Weight, n_samples: int, seed: int, tol: float = 1e-12) -> MCEstimate:
    """Monte Carlo estimate of ``int_K a(g)^{-i lam} dk`` over SU(n).

    ``a(g)`` is the positive part of the LDU diagonal of a Haar unitary, so
    ``a^{-i lam} = prod_j |Delta_j(g)|^{-i lam_j}``.
    """
    _check_inputs(lam, n - 1, n_samples)
    mu = -1j * lam

    def kernel(block, size):
        u = haar_unitary(n, block_rng(seed, block), size)
        d, generic = ldu_diagonal(u, tol)
        f = a_power(np.abs(d[generic]), mu)
        return _accumulate(np.atleast_1d(f)), int(np.sum(~generic))

    parts = _run_blocks(kernel, int(n_samples), seed)
    acc = np.zeros(5)
    rejected = 0
    for a, r in parts:
        acc += a
        rejected += r
    kept = int(acc[0])
    return MCEstimate(
        float(acc[1] / kept),
        float(acc[2] / kept),
        _stderr(acc, kept),
        int(n_samples),
        rejected,
        int(seed),
    )


def estimate_diagonal_integral(
    spec: SymmetricSpaceSpec | str,
    lam: Weight,
    n_samples: int,
    seed: int,
    tol: float = 1e-12,
    phase_tol: float = 1e-6,
    symmetry_tol: float = 1e-10,
) -> MCEstimate:
    """Monte Carlo estimate of ``int_{phi(U/K)} a_phi^{-i lam}`` with component bins.

    Pipeline per sample: Haar unitary ``u``, ``g = u J u^* J``, LDU of ``g``,
    component label from the signs of the diagonal, integrand from its moduli.
    """
    if isinstance(spec, str):
        spec = get_space(spec)
    spec._require_inner()
    _check_inputs(lam, spec.n - 1, n_samples)
    admissible = {w.signs for w in enumerate_components(spec)}
    mu = -1j * lam
    J = spec.J
    n = spec.n

    def kernel(block, size):
        u = haar_unitary(n, block_rng(seed, block), size)
        g = cartan_embed(u, J)
        asym = np.max(np.abs(np.conj(np.swapaxes(g, -1, -2)) - J @ g @ J))
        if asym > symmetry_tol:
            raise PhaseError(f"embedded points are not Cartan-symmetric (residual {asym:.3g})")
        d, generic = ldu_diagonal(g, tol)
        d = d[generic]
        signs = components_from_d(d, phase_tol)
        f = np.atleast_1d(a_power(np.abs(d), mu))
        # bin by sign pattern: encode as integer key
        keys = ((signs < 0).astype(np.int64) * (1 << np.arange(n))).sum(axis=1)
        bins = {}
        for key in np.unique(keys):
            sel = keys == key
            bins[int(key)] = _accumulate(f[sel])
        return _accumulate(f), int(np.sum(~generic)), bins

    parts = _run_blocks(kernel, int(n_samples), seed)
    acc = np.zeros(5)
    rejected = 0
    bins: dict[int, np.ndarray] = {}
    for a, r, b in parts:
        acc += a
        rejected += r
        for key in sorted(b):
            bins[key] = bins.get(key, np.zeros(5)) + b[key]

    N = int(n_samples)
    kept = int(acc[0])

    def signs_of(key):
        return tuple(-1 if (key >> i) & 1 else 1 for i in range(n))

    order = [w.signs for w in enumerate_components(spec)]
    seen = {signs_of(k): k for k in bins}
    labels = order + sorted(s for s in seen if s not in admissible)
    comps = []
    for s in labels:
        b = bins.get(seen.get(s, -1), np.zeros(5))
        count = int(b[0])
        mass = count / N
        comps.append(
            ComponentStats(
                label=ComponentIndex(s).label(),
                count=count,
                mass=mass,
                mass_stderr=float(np.sqrt(mass * (1 - mass) / N)),
                mean_re=float(b[1] / count) if count else 0.0,
                mean_im=float(b[2] / count) if count else 0.0,
                stderr=_stderr(b, count),
                contribution_re=float(b[1] / N),
                contribution_im=float(b[2] / N),
                contribution_stderr=_stderr(
                    np.array([N, b[1], b[2], b[3], b[4]]), N
                ),
                admissible=s in admissible,
            )
        )
    return MCEstimate(
        float(acc[1] / kept),
        float(acc[2] / kept),
        _stderr(acc, kept),
        N,
        rejected,
        int(seed),
        tuple(comps),
    )


# -- rank-one quadrature ------------------------------------------------------

# the tail beyond this is below 1e-12 relative; much further out g0 is numerically singular
_SIGMA_MAX = 30.0


def _geodesic_point(sigma: float) -> np.ndarray:
    """Point of SU(1,1) at geodesic distance ``sigma`` from the base point.

    In the disk model it sends 0 to ``tanh(sigma / 2)``.
    """
    c, s = np.cosh(sigma / 2), np.sinh(sigma / 2)
    return np.array([[c, s], [s, c]], dtype=complex)


def hyperbolic_quadrature(
    lam: Weight,
    tol: float = 1e-10,
    route: str = "iwasawa",
) -> complex:
    """Rank-one integral ``int_{G0/K} a(g0)^{-2 delta - 2(delta - i lam)} dV``.

    ``G0 = SU(1,1)`` acting on the unit disk.  The integrand depends only on
    the geodesic distance ``sigma`` from the origin, and the invariant
    measure in geodesic polar coordinates is proportional to
    ``sinh(sigma) d sigma``.  The value is normalized so that it equals 1/2
    at ``lam = 0``, the mass assigned to the identity component of the
    two-sphere.

    Parameters
    ----------
    lam : Weight
        Real rank-one weight.
    tol : float
        Relative tolerance requested from the adaptive quadrature.
    route : {"iwasawa", "cartan"}
        ``iwasawa`` evaluates ``a(g0)^{-4 delta + 2 i lam}`` from the Iwasawa
        factor of ``g0``; ``cartan`` evaluates ``a_phi^{2 delta - i lam}``
        from the LDU factors of the Cartan-embedded point ``phi(u(g0))``.
    """
    if not isinstance(lam, Weight) or lam.rank != 1:
        raise ValueError("hyperbolic_quadrature is implemented for rank one only")
    if not lam.is_real:
        raise ValueError("lambda must be real")
    J = np.diag([1.0, -1.0])
    delta = Weight([1.0])

    if route == "iwasawa":
        def value(sigma, mu):
            return a_power(iwasawa(_geodesic_point(sigma)), mu)
        mu_of = lambda w: -4 * delta + 2j * w
    elif route == "cartan":
        def value(sigma, mu):
            u = iwasawa(_geodesic_point(sigma)).u
            # far from the origin the minors are tiny but exact; skip the stratum test
            return a_power(ldu(cartan_embed(u, J), tol=0.0), mu)
        mu_of = lambda w: 2 * delta - 1j * w
    else:
        raise ValueError(f"unknown route {route!r}")

    def integral(w):
        mu = mu_of(w)
        out = []
        for part in (np.real, np.imag):
            res = integrate.quad(
                lambda s: float(part(value(s, mu))) * np.sinh(s),
                0.0,
                _SIGMA_MAX,
                epsabs=0.0,
                epsrel=tol,
                limit=2000,
                full_output=1,
            )
            if len(res) > 3:
                raise QuadratureError(f"adaptive quadrature did not converge: {res[3]}")
            val, err = res[0], res[1]
            out.append((val, err))
        (re, e_re), (im, e_im) = out
        scale = max(abs(complex(re, im)), 1e-300)
        if (e_re + e_im) > max(10 * tol * scale, 1e-14):
            raise QuadratureError(
                f"quadrature error estimate {e_re + e_im:.3g} exceeds tolerance {tol:.3g}"
            )
        return complex(re, im)

    return 0.5 * integral(lam) / integral(Weight.zero(1))
