"""Command-line driver: closed forms, Monte Carlo verification, certification suites.

Reports are JSON objects ``{"payload": ..., "metadata": ...}``.  The
payload is a deterministic function of the configuration; timestamps,
host and wall-clock time live only in ``metadata``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import platform
import sys
import time
from dataclasses import asdict, dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .bottsamelson import (
    ParabolicWordData,
    factored_c_integral,
    random_sl2_prime,
    sigma_translate_exact,
    verify_a26,
)
from .closedform import NORMALIZATIONS, c_function, component_mass, component_term, diagonal_fourier
from .errors import CartanDiagError, ConfigError
from .haarmc import MIN_SAMPLES, estimate_diagonal_integral, estimate_group_integral
from .matreal import cartan_embed, haar_unitary, iwasawa, ldu
from .poissonel import (
    NoncompactPoint,
    a_phi_two_ways,
    ad_on_p,
    evens_lu_operator,
    jacobian_ratio,
    momentum_convergence,
    pfaffian_residual,
    random_k,
    random_point,
    skew_residual,
)
from .rootsys import Weight, build_root_system, longest_word
from .symspace import CATALOG, enumerate_components, get_space, order_M

__all__ = [
    "VerifyConfig",
    "CertifyConfig",
    "DEFAULT_SEEDS",
    "load_config",
    "run_eval",
    "run_verify",
    "run_certify",
    "emit_table",
    "main",
]

DEFAULT_SEEDS = {"verify": 20260101, "poisson": 20260201, "bottsamelson": 20260301, "factorizations": 20260401}
CSV_COLUMNS = ["space", "lambda", "component", "closed_re", "closed_im", "mc_re", "mc_im", "stderr", "z", "pass"]
SUITES = ("poisson", "bottsamelson", "factorizations")


@dataclass(frozen=True)
class VerifyConfig:
    space: str = "gr:1,1"
    lam: tuple[float, ...] = (1.0,)
    basis: str = "root"
    n_samples: int = 1_000_000
    seed: int = DEFAULT_SEEDS["verify"]
    normalization: str = "uniform"
    tol_z: float = 3.0
    tol_phase: float = 1e-6
    tol_nongeneric: float = 1e-12
    out: str | None = None
    fmt: str = "json"

    def validate(self) -> "VerifyConfig":
        try:
            spec = get_space(self.space)
        except KeyError as exc:
            raise ConfigError(str(exc.args[0])) from exc
        if len(self.lam) != spec.n - 1:
            raise ConfigError(f"{self.space} needs {spec.n - 1} lambda coefficients, got {len(self.lam)}")
        if self.n_samples < MIN_SAMPLES:
            raise ConfigError(f"samples must be at least {MIN_SAMPLES}")
        if self.basis not in ("root", "fundamental"):
            raise ConfigError(f"basis must be 'root' or 'fundamental', got {self.basis!r}")
        if self.normalization not in NORMALIZATIONS:
            raise ConfigError(f"normalization must be one of {NORMALIZATIONS}")
        if self.fmt not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.fmt!r}")
        if not (self.tol_z > 0 and self.tol_phase > 0 and self.tol_nongeneric > 0):
            raise ConfigError("tolerances must be positive")
        return self

    def weight(self) -> Weight:
        rs = get_space(self.space).root_system
        if self.basis == "root":
            return rs.weight_from_root_coords(self.lam)
        return Weight(self.lam)


@dataclass(frozen=True)
class CertifyConfig:
    suite: str
    seed: int | None = None
    tol_pfaffian: float = 1e-8
    tol_pfaffian_rank2: float = 1e-7
    tol_skew: float = 1e-12
    tol_momentum: float = 1e-5
    tol_jacobian: float = 1e-5
    tol_a26: float = 1e-10
    tol_c: float = 1e-12
    tol_roundtrip: float = 1e-10
    n_inputs: int = 10_000
    out: str | None = None

    def resolved_seed(self) -> int:
        return DEFAULT_SEEDS[self.suite] if self.seed is None else int(self.seed)


# -- config files ----------------------------------------------------------

_FILE_KEYS = {
    "space": "space",
    "lambda": "lam",
    "basis": "basis",
    "samples": "n_samples",
    "seed": "seed",
    "normalization": "normalization",
    "out": "out",
    "format": "fmt",
    "tol_z": "tol_z",
    "tol_phase": "tol_phase",
    "tol_nongeneric": "tol_nongeneric",
}


def load_config(path) -> dict:
    """Flat TOML keys mapped onto VerifyConfig field names."""
    try:
        import tomllib
    except ModuleNotFoundError:  # Python < 3.11
        import tomli as tomllib
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    out = {}
    for key, val in raw.items():
        if key not in _FILE_KEYS:
            raise ConfigError(f"unknown config key {key!r}; known: {', '.join(_FILE_KEYS)}")
        if isinstance(val, dict):
            raise ConfigError(f"config key {key!r} must be a scalar or array (flat keys only)")
        out[_FILE_KEYS[key]] = tuple(float(x) for x in val) if key == "lambda" else val
    return out


# -- helpers ------------------------------------------------------------------

def _cplx(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _z(mean, target, stderr) -> float:
    diff = abs(complex(mean) - complex(target))
    if stderr == 0:
        return 0.0 if diff == 0 else math.inf
    return diff / stderr


def _metadata(started: float) -> dict:
    return {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "host": platform.node(),
        "python": platform.python_version(),
        "wall_clock_s": round(time.perf_counter() - started, 3),
        "version": __version__,
    }


def _lam_label(cfg: VerifyConfig) -> str:
    return " ".join(f"{x:g}" for x in cfg.lam)


# -- operations -----------------------------------------------------------------

def run_eval(cfg: VerifyConfig) -> dict:
    """Closed-form values only, with factor audits."""
    started = time.perf_counter()
    cfg = cfg.validate()
    spec = get_space(cfg.space)
    lam = cfg.weight()
    value = diagonal_fourier(spec, lam, cfg.normalization)
    payload = {
        "kind": "eval",
        "config": _config_echo(cfg),
        "closed_form": value.as_dict(),
    }
    if not spec.group_case:
        payload["masses"] = {
            w.label(): component_mass(spec, w, cfg.normalization) for w in enumerate_components(spec)
        }
    return {"payload": payload, "metadata": _metadata(started)}


def _config_echo(cfg: VerifyConfig) -> dict:
    d = asdict(cfg)
    d.pop("out")
    d.pop("fmt")
    d["lam"] = list(cfg.lam)
    return d


def run_verify(cfg: VerifyConfig) -> dict:
    """Monte Carlo against closed form, gated at ``tol_z`` standard errors.

    Rows: the overall integral, then one per component comparing the
    conditional mean on that component with the component product.  The
    component masses are gated separately against ``component_mass``.
    """
    started = time.perf_counter()
    cfg = cfg.validate()
    spec = get_space(cfg.space)
    lam = cfg.weight()
    label = _lam_label(cfg)
    rows = []
    masses = []
    if spec.group_case:
        closed = c_function(spec.root_system, lam)
        est = estimate_group_integral(spec.n, lam, cfg.n_samples, cfg.seed, cfg.tol_nongeneric)
        z = _z(est.mean, closed.value, est.stderr)
        rows.append(_row(spec.name, label, "overall", closed.value, est.mean, est.stderr, z, cfg.tol_z))
        audit = closed.as_dict()
        inadmissible = 0
    else:
        closed = diagonal_fourier(spec, lam, cfg.normalization)
        est = estimate_diagonal_integral(
            spec, lam, cfg.n_samples, cfg.seed, cfg.tol_nongeneric, cfg.tol_phase
        )
        z = _z(est.mean, closed.value, est.stderr)
        rows.append(_row(spec.name, label, "overall", closed.value, est.mean, est.stderr, z, cfg.tol_z))
        stats = est.per_component
        for w in enumerate_components(spec):
            term = component_term(spec, w, lam, cfg.normalization)
            conditional = term.value / term.prefactor
            s = stats[w.label()]
            zc = _z(s.mean, conditional, s.stderr)
            rows.append(_row(spec.name, label, w.label(), conditional, s.mean, s.stderr, zc, cfg.tol_z))
            predicted = component_mass(spec, w, cfg.normalization)
            sigma = math.sqrt(predicted * (1 - predicted) / est.n_samples)
            zm = abs(s.mass - predicted) / sigma
            masses.append(
                {
                    "component": w.label(),
                    "predicted": predicted,
                    "observed": s.mass,
                    "sigma": sigma,
                    "z": zm,
                    "pass": bool(zm <= cfg.tol_z),
                }
            )
        audit = closed.as_dict()
        inadmissible = est.n_inadmissible
    passed = all(r["pass"] for r in rows) and all(m["pass"] for m in masses) and inadmissible == 0
    payload = {
        "kind": "verify",
        "config": _config_echo(cfg),
        "closed_form": audit,
        "mc": est.as_dict(),
        "rows": rows,
        "masses": masses,
        "n_inadmissible": inadmissible,
        "pass": bool(passed),
    }
    return {"payload": payload, "metadata": _metadata(started)}


def _row(space, lam, component, closed, mc, stderr, z, tol_z) -> dict:
    closed, mc = complex(closed), complex(mc)
    return {
        "space": space,
        "lambda": lam,
        "component": component,
        "closed_re": closed.real,
        "closed_im": closed.imag,
        "mc_re": mc.real,
        "mc_im": mc.imag,
        "stderr": float(stderr),
        "z": float(z),
        "pass": bool(z <= tol_z),
    }


# -- certification suites -----------------------------------------------------

def _gate(name, value, tol, **extra) -> dict:
    return {"check": name, "value": float(value), "tol": float(tol), "pass": bool(value < tol), **extra}


def _certify_poisson(cfg: CertifyConfig, rng) -> list[dict]:
    checks = []
    pts11 = [random_point(1, 1, rng) for _ in range(200)]
    pts12 = [random_point(1, 2, rng) for _ in range(50)]
    checks.append(_gate("pfaffian SU(1,1) x200", max(pfaffian_residual(p) for p in pts11), cfg.tol_pfaffian))
    checks.append(_gate("pfaffian SU(1,2) x50", max(pfaffian_residual(p) for p in pts12), cfg.tol_pfaffian_rank2))
    skew = max(skew_residual(evens_lu_operator(p)) for p in pts11 + pts12)
    checks.append(_gate("skew-symmetry", skew, cfg.tol_skew))
    kernel = min(np.linalg.svd(evens_lu_operator(p).matrix, compute_uv=False).min() for p in pts12)
    checks.append({"check": "trivial kernel (min singular value)", "value": float(kernel), "pass": bool(kernel > 1e-8)})
    equiv = 0.0
    for p in pts12[:20]:
        kmat = random_k(1, 2, rng)
        A = ad_on_p(kmat, 1, 2)
        lhs = evens_lu_operator(NoncompactPoint(p.g0 @ kmat, 1, 2)).matrix
        rhs = np.linalg.solve(A, evens_lu_operator(p).matrix @ A)
        equiv = max(equiv, float(np.max(np.abs(lhs - rhs))))
    checks.append(_gate("equivariance under K", equiv, 1e-10))
    worst, orders = 0.0, []
    for i in range(50):
        k, m = (1, 1) if i % 2 == 0 else (1, 2)
        p = random_point(k, m, rng)
        x = rng.standard_normal(k + m)
        x -= x.mean()
        res = momentum_convergence(p, x)
        worst = max(worst, res[-1])
        if res[-1] > 1e-13:
            orders.append(math.log2(res[0] / res[1]))
            orders.append(math.log2(res[1] / res[2]))
    checks.append(_gate("momentum residual h=1e-4 x50", worst, cfg.tol_momentum))
    checks.append({
        "check": "momentum decay order",
        "value": float(min(orders)) if orders else 2.0,
        "pass": bool(not orders or min(orders) > 1.5),
    })
    ratios = np.array([jacobian_ratio(random_point(1, 1, rng)) for _ in range(100)])
    c0 = jacobian_ratio(NoncompactPoint.identity(1, 1))
    checks.append(_gate("jacobian constancy x100", float(np.max(np.abs(ratios / c0 - 1))), cfg.tol_jacobian, c0=c0))
    two = max(a_phi_two_ways(random_point(1, 2, rng)) for _ in range(20))
    checks.append(_gate("a_phi two ways", two, 1e-8))
    return checks


def _certify_bottsamelson(cfg: CertifyConfig, rng) -> list[dict]:
    checks = []
    for rank in (2, 3):
        rs = build_root_system("A", rank)
        data = ParabolicWordData(rs, longest_word(rs))
        worst = 0.0
        for _ in range(5):
            lam = Weight(-rng.integers(1, 4, size=rank).astype(float))
            for _ in range(100):
                factors = [random_sl2_prime(rng) for _ in data.word]
                worst = max(worst, verify_a26(data, factors, lam))
        checks.append(_gate(f"A{rank} longest word identity", worst, cfg.tol_a26))
        zeros = []
        for j in range(len(data.word)):
            factors = [random_sl2_prime(rng) for _ in data.word]
            factors[j] = random_sl2_prime(rng, zero_a=True)
            lam = Weight(-np.ones(rank))
            zeros.append(abs(sigma_translate_exact(data, factors, lam)))
        checks.append({"check": f"A{rank} vanishing on a_j = 0", "value": float(max(zeros)), "pass": bool(max(zeros) == 0.0)})
    for rank in (1, 2, 3):
        rs = build_root_system("A", rank)
        gap = 0.0
        for _ in range(20):
            lam = Weight(rng.normal(scale=2.0, size=rank))
            ref = c_function(rs, lam).value
            gap = max(gap, abs(factored_c_integral(rs, lam) - ref) / abs(ref))
        checks.append(_gate(f"A{rank} factored c-integral", gap, cfg.tol_c))
    return checks


def _certify_factorizations(cfg: CertifyConfig, rng) -> list[dict]:
    checks = []
    N = cfg.n_inputs
    for n in (2, 3, 4):
        z = rng.standard_normal((N, n, n)) + 1j * rng.standard_normal((N, n, n))
        f = ldu(z)
        scale = np.max(np.abs(z), axis=(-2, -1))
        res = np.max(np.abs(f.reconstruct() - z), axis=(-2, -1)) / scale
        checks.append(_gate(f"LDU round trip n={n}", float(res.max()), cfg.tol_roundtrip))
        g = z / np.linalg.det(z)[:, None, None] ** (1.0 / n)
        w = iwasawa(g)
        res = np.max(np.abs(w.reconstruct() - g), axis=(-2, -1)) / np.max(np.abs(g), axis=(-2, -1))
        unit = np.max(np.abs(w.u @ np.conj(np.swapaxes(w.u, -1, -2)) - np.eye(n)))
        checks.append(_gate(f"Iwasawa round trip n={n}", float(res.max()), cfg.tol_roundtrip))
        checks.append(_gate(f"Iwasawa unitary factor n={n}", float(unit), cfg.tol_roundtrip))
    for name in ("gr:1,1", "gr:1,2", "gr:2,2"):
        spec = get_space(name)
        J = spec.J
        u = haar_unitary(spec.n, rng, N)
        g = cartan_embed(u, spec)
        sym = np.max(np.abs(np.conj(np.swapaxes(g, -1, -2)) - J @ g @ J))
        checks.append(_gate(f"Cartan symmetry {name}", float(sym), cfg.tol_roundtrip))
        f = ldu(g)
        # factor entries grow like 1/|pivot| near the singular stratum, so
        # the structure residual is measured relative to the factor scale
        struct = np.max(np.abs(f.u - J @ np.conj(np.swapaxes(f.l, -1, -2)) @ J), axis=(-2, -1))
        scale = np.maximum(np.max(np.abs(f.u), axis=(-2, -1)), np.max(np.abs(f.l), axis=(-2, -1)))
        rt = np.max(np.abs(f.reconstruct() - g), axis=(-2, -1))
        checks.append(_gate(f"LDU round trip embedded {name}", float(rt.max()), cfg.tol_roundtrip))
        checks.append(_gate(f"upper = J lower^* J {name}", float((struct / scale).max()), cfg.tol_roundtrip,
                            absolute=float(struct.max())))
    return checks


def run_certify(cfg: CertifyConfig) -> dict:
    started = time.perf_counter()
    if cfg.suite not in SUITES:
        raise ConfigError(f"unknown suite {cfg.suite!r}; choose from {', '.join(SUITES)}")
    seed = cfg.resolved_seed()
    rng = np.random.default_rng(seed)
    runner = {
        "poisson": _certify_poisson,
        "bottsamelson": _certify_bottsamelson,
        "factorizations": _certify_factorizations,
    }[cfg.suite]
    checks = runner(cfg, rng)
    payload = {
        "kind": "certify",
        "suite": cfg.suite,
        "seed": seed,
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
    }
    return {"payload": payload, "metadata": _metadata(started)}


# -- output ---------------------------------------------------------------------

def emit_table(reports, fmt: str = "csv", path=None) -> str:
    """Write verify reports as a CSV table or JSON list; returns the text."""
    reports = list(reports)
    if not reports:
        raise ConfigError("emit_table needs at least one report")
    if fmt == "json":
        text = json.dumps(reports if len(reports) > 1 else reports[0], indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for rep in reports:
            for row in rep["payload"].get("rows", []):
                writer.writerow({k: row[k] for k in CSV_COLUMNS})
        text = buf.getvalue()
    else:
        raise ConfigError(f"format must be json or csv, got {fmt!r}")
    if path:
        Path(path).write_text(text)
    return text


def _verify_config_from_args(args) -> VerifyConfig:
    values = {}
    if args.config:
        values.update(load_config(args.config))
    flags = {
        "space": args.space,
        "lam": tuple(args.lam) if args.lam is not None else None,
        "basis": args.basis,
        "n_samples": getattr(args, "samples", None),
        "seed": getattr(args, "seed", None),
        "normalization": args.normalization,
        "tol_z": getattr(args, "tol_z", None),
        "tol_phase": getattr(args, "tol_phase", None),
        "tol_nongeneric": getattr(args, "tol_nongeneric", None),
        "out": args.out,
        "fmt": args.format,
    }
    values.update({k: v for k, v in flags.items() if v is not None})
    return replace(VerifyConfig(), **values)


def _parse_lambda(text: str) -> list[float]:
    parts = text.replace(",", " ").split()
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid lambda {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cartan-diag",
        description="Closed forms and Monte Carlo checks for diagonal distributions on compact symmetric spaces.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("spaces", help="list the catalog of spaces")

    def common(p, mc: bool):
        p.add_argument("--config", help="TOML file with flat keys; flags override it")
        p.add_argument("--space", help="catalog key such as gr:1,2 or group:su3")
        p.add_argument("--lambda", dest="lam", type=_parse_lambda,
                       help="coefficients, comma or space separated (root basis by default)")
        p.add_argument("--basis", choices=["root", "fundamental"], help="basis for --lambda")
        p.add_argument("--normalization", choices=list(NORMALIZATIONS),
                       help="component masses: uniform 1/M or shared constant")
        p.add_argument("--out", help="output file (stdout if omitted)")
        p.add_argument("--format", choices=["json", "csv"])
        if mc:
            p.add_argument("--samples", type=int)
            p.add_argument("--seed", type=int)
            p.add_argument("--tol-z", dest="tol_z", type=float)
            p.add_argument("--tol-phase", dest="tol_phase", type=float)
            p.add_argument("--tol-nongeneric", dest="tol_nongeneric", type=float)

    common(sub.add_parser("eval", help="closed-form value with factor audit"), mc=False)
    common(sub.add_parser("verify", help="Monte Carlo against closed form"), mc=True)

    cert = sub.add_parser("certify", help="run a certification suite")
    cert.add_argument("suite", choices=SUITES)
    cert.add_argument("--seed", type=int)
    cert.add_argument("--out")
    cert.add_argument("--inputs", type=int, default=10_000, help="random inputs for factorizations")
    for name, default in (("pfaffian", 1e-8), ("momentum", 1e-5), ("jacobian", 1e-5), ("a26", 1e-10), ("roundtrip", 1e-10)):
        cert.add_argument(f"--tol-{name}", dest=f"tol_{name}", type=float, default=default)

    table = sub.add_parser("table", help="merge saved verify reports")
    table.add_argument("reports", nargs="+")
    table.add_argument("--out")
    table.add_argument("--format", choices=["json", "csv"], default="csv")
    return parser


def _write(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "spaces":
            for key, desc in CATALOG.items():
                spec = get_space(key)
                M = "-" if spec.group_case else order_M(spec)
                print(f"{key:<12} n={spec.n}  M={M:<3} {desc}")
            return 0
        if args.command == "eval":
            cfg = _verify_config_from_args(args)
            rep = run_eval(cfg)
            _write(json.dumps(rep, indent=2, sort_keys=True) + "\n", cfg.out)
            return 0
        if args.command == "verify":
            cfg = _verify_config_from_args(args)
            rep = run_verify(cfg)
            if cfg.fmt == "csv":
                _write(emit_table([rep], "csv"), cfg.out)
            else:
                _write(json.dumps(rep, indent=2, sort_keys=True) + "\n", cfg.out)
            return 0 if rep["payload"]["pass"] else 1
        if args.command == "certify":
            cfg = CertifyConfig(
                suite=args.suite,
                seed=args.seed,
                tol_pfaffian=args.tol_pfaffian,
                tol_momentum=args.tol_momentum,
                tol_jacobian=args.tol_jacobian,
                tol_a26=args.tol_a26,
                tol_roundtrip=args.tol_roundtrip,
                n_inputs=args.inputs,
                out=args.out,
            )
            rep = run_certify(cfg)
            _write(json.dumps(rep, indent=2, sort_keys=True) + "\n", cfg.out)
            return 0 if rep["payload"]["pass"] else 1
        if args.command == "table":
            reports = [json.loads(Path(p).read_text()) for p in args.reports]
            _write(emit_table(reports, args.format), args.out)
            ok = all(r["payload"].get("pass", True) for r in reports)
            return 0 if ok else 1
    except (CartanDiagError, OSError) as exc:
        print(f"cartan-diag: error: {exc}", file=sys.stderr)
        return 2
    return 2  # pragma: no cover
