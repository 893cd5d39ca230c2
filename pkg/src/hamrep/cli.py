"""hamrep command line: verification suites and a wavepacket demo."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from . import enveloping, groups, liealg, uir
from .repops import DiffOp, apply_to_samples, diff_commutator

SCHEMA = "hamrep/1"
SUITES = ("algebra", "casimir", "casimir-count", "cocycle", "cover", "enveloping", "heisenberg",
          "matrix-oracle", "quotients", "uir")
DEFAULT_TOL = {"hom": 1e-9, "matrix": 1e-10, "casimir": 1e-9, "cocycle": 1e-10, "cover": 1e-10}
UIR_FAMILIES = ("WeylHeisenberg", "Hamilton", "Galilei", "QuantumHamilton")


class ConfigError(ValueError):
    pass


@dataclass
class SuiteConfig:
    suites: list = field(default_factory=lambda: list(SUITES))
    n: list = field(default_factory=lambda: [3])
    families: list = field(default_factory=lambda: list(UIR_FAMILIES))
    labels: uir.RepLabels = field(default_factory=uir.RepLabels)
    trials: int = 200
    seed: int = 42
    tolerance: dict = field(default_factory=lambda: dict(DEFAULT_TOL))
    out: str | None = None
    format: str = "text"

    def validate(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        bad = [s for s in self.suites if s not in SUITES]
        if bad:
            raise ConfigError(f"unknown suite(s): {', '.join(bad)}")
        if any(v <= 0 for v in self.tolerance.values()):
            raise ConfigError("tolerances must be positive")
        if any(k < 1 for k in self.n):
            raise ConfigError("n must be >= 1")
        if self.format not in ("text", "json"):
            raise ConfigError("format must be text or json")
        return self

    def to_json(self) -> dict:
        return {"suites": sorted(self.suites), "n": self.n, "families": self.families,
                "labels": self.labels.to_json(), "trials": self.trials, "seed": self.seed,
                "tolerance": dict(sorted(self.tolerance.items()))}


def parse_n(spec) -> list:
    """'3' -> [3]; '1..4' -> [1, 2, 3, 4]; ints and lists pass through."""
    if isinstance(spec, int):
        return [spec]
    if isinstance(spec, list):
        return [int(x) for x in spec]
    try:
        if ".." in spec:
            lo, hi = spec.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(spec)]
    except ValueError as exc:
        raise ConfigError(f"bad n spec {spec!r}") from exc


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def _labels(d) -> uir.RepLabels:
    try:
        return uir.RepLabels.from_json(d)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad labels: {exc}") from exc


def build_config(args) -> SuiteConfig:
    cfg = SuiteConfig()
    if args.config:
        d = _load_json(args.config)
        for key in ("suites", "families", "trials", "seed", "out", "format"):
            if key in d:
                setattr(cfg, key, d[key])
        if "n" in d:
            cfg.n = parse_n(d["n"])
        if "labels" in d:
            cfg.labels = _labels(d["labels"])
        if "tolerance" in d:
            cfg.tolerance = {**cfg.tolerance, **d["tolerance"]}
    if args.suite:
        cfg.suites = args.suite
    if args.n is not None:
        cfg.n = parse_n(args.n)
    if args.family:
        cfg.families = args.family
    if args.labels:
        cfg.labels = _labels(_load_json(args.labels))
    for key in ("trials", "seed", "out", "format"):
        val = getattr(args, key)
        if val is not None:
            setattr(cfg, key, val)
    try:
        cfg.families = [liealg.canonical_family(f) for f in cfg.families]
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg.validate()


# ---------------------------------------------------------------- suites

def _check(name, max_dev, ok, **extra):
    out = {"name": name, "max_dev": float(max_dev), "pass": bool(ok)}
    out.update(extra)
    return out


def suite_algebra(cfg):
    checks = []
    for fam in liealg.FAMILIES:
        for n in cfg.n:
            rep = liealg.jacobi_check(liealg.builtin_algebra(fam, n))
            checks.append(_check(f"jacobi {fam}({n})", len(rep.violations) + len(rep.antisymmetry), rep.ok))
    return checks, []


def suite_matrix(cfg):
    checks = []
    tol = cfg.tolerance["matrix"]
    for n in cfg.n:
        worst = 0.0
        for k in range(cfg.trials):
            rng = np.random.default_rng([cfg.seed, n, k])
            a, b = groups.random_element(rng, n), groups.random_element(rng, n)
            lhs = groups.to_matrix(groups.product(a, b))
            worst = max(worst, float(np.abs(lhs - groups.to_matrix(a) @ groups.to_matrix(b)).max()))
        checks.append(_check(f"product vs matrix n={n}", worst, worst <= tol))
        d = groups.generator_commutator_defect(n)
        checks.append(_check(f"generator commutators n={n}", d, d == 0))
    return checks, []


def suite_count(cfg):
    checks, notes = [], []
    for fam, row in liealg.TABULATED_COUNTS.items():
        for n in cfg.n:
            if not 1 <= n <= 4:
                continue
            got = liealg.invariant_count(liealg.builtin_algebra(fam, n), seed=cfg.seed)
            want = row[n - 1]
            checks.append(_check(f"{fam}({n}) count", abs(got - want), got == want, computed=got, tabulated=want))
            if got != want:
                dim = liealg.builtin_algebra(fam, n).dim
                notes.append(f"{fam}({n}): computed {got}, tabulated {want}; dim {dim} fixes the parity of the count (the generic rank is even)")
    return checks, notes


def suite_enveloping(cfg):
    checks = []
    for fam, n, k in enveloping.catalog_entries():
        alg = liealg.builtin_algebra(fam, n)
        rep = enveloping.is_central(alg, enveloping.casimir_element(fam, n, k, alg))
        checks.append(_check(f"C_{k} of {fam}({n}) central", 0 if rep.ok else 1, rep.ok))
    return checks, []


def suite_casimir(cfg):
    checks, notes = [], []
    tol = cfg.tolerance["casimir"]
    L = cfg.labels
    for fam, (need_n, kmax) in enveloping.CATALOG.items():
        n = need_n or 3
        for k in range(1, kmax + 1):
            try:
                val = uir.casimir_eigenvalue(L, k, fam, n, tol)
            except uir.ScalarityViolation as exc:
                checks.append(_check(f"C_{k} of {fam}({n})", float("inf"), False, error=str(exc)))
                continue
            want = uir.quoted_eigenvalue(L, k, fam)
            dev = abs(val - want)
            checks.append(_check(f"C_{k} of {fam}({n})", dev, dev <= tol * max(1.0, abs(want)),
                                 value=val, closed_form=want))
            derived = uir.derived_eigenvalue(L, k, fam)
            if derived != want:
                notes.append(f"C_{k} of {fam}({n}): value {val:.12g}, tabulated form gives {want:.12g}, "
                             f"derived form gives {derived:.12g}")
    return checks, notes


def _uir_labels(cfg, fam):
    L = cfg.labels
    if fam == "QuantumHamilton":
        return [replace(L, basis="momentum_time", diag="force_diag"),
                replace(L, basis="position_time", diag="velocity_diag")]
    return [L]


def suite_uir(cfg):
    checks, notes = [], []
    for fam in cfg.families:
        if fam not in UIR_FAMILIES:
            raise ConfigError(f"no representation builder for {fam}")
        for L in _uir_labels(cfg, fam):
            rep = uir.verify_homomorphism(fam, L, cfg.trials, cfg.seed, n=3, tol=cfg.tolerance["hom"])
            tag = f"{fam} {L.basis}/{L.diag}" if fam in ("QuantumHamilton", "Hamilton") else fam
            checks.append(_check(f"homomorphism {tag}", max(rep.max_dev.values()), rep.passed,
                                 groups={k: rep.max_dev[k] for k in sorted(rep.max_dev)}))
            for x in rep.notes:
                if x not in notes:
                    notes.append(x)
    return checks, notes


def suite_heisenberg(cfg):
    checks = []
    for basis in uir.BASES:
        for diag in uir.DIAGS:
            L = replace(cfg.labels, lam=1.0, basis=basis, diag=diag)
            cat = uir.algebra_rep(L, "QuantumHamilton", 3)
            h = L.hbar
            worst = 0.0
            for i in range(1, 4):
                for j in range(1, 4):
                    c = diff_commutator(cat[f"P_{i}"].base, cat[f"Q_{j}"].base)
                    want = DiffOp.mult(3, c0=1j * h * (i == j))
                    worst = max(worst, float(np.abs(c.S - want.S).max()), float(np.abs(c.L).max()))
            c = diff_commutator(cat["T"].base, cat["E"].base)
            worst = max(worst, abs(c.scalar() - 1j * h), 0.0 if c.is_scalar(0) else 1.0)
            checks.append(_check(f"[P,Q], [T,E] {basis}/{diag}", worst, worst == 0))
            d = uir.catalog_commutator_check(L, "QuantumHamilton", 3)
            checks.append(_check(f"catalog brackets {basis}/{diag}", d, d <= 1e-12))
    return checks, []


def suite_cocycle(cfg):
    worst = 0.0
    for n in cfg.n:
        for k in range(cfg.trials):
            rng = np.random.default_rng([cfg.seed, n, k])
            xs = [groups.random_element(rng, n, central=False) for _ in range(3)]
            worst = max(worst, groups.cocycle_defect(*xs))
    return [_check("2-cocycle identity", worst, worst <= cfg.tolerance["cocycle"])], []


def suite_cover(cfg):
    tol = cfg.tolerance["cover"]
    checks = []
    worst = 0.0
    for tj in range(7):
        j = Fraction(tj, 2)
        D = groups.wigner_d(j, -np.eye(2))
        worst = max(worst, float(np.abs(D - (-1) ** tj * np.eye(tj + 1)).max()))
    checks.append(_check("D^j(-1) = (-1)^(2j)", worst, worst <= tol))
    worst = 0.0
    for k in range(cfg.trials):
        rng = np.random.default_rng([cfg.seed, k])
        u1, u2 = groups.random_su2(rng), groups.random_su2(rng)
        p = groups.su2_project(u1 @ u2) - groups.su2_project(u1) @ groups.su2_project(u2)
        worst = max(worst, float(np.abs(p).max()),
                    float(np.abs(groups.su2_project(-u1) - groups.su2_project(u1)).max()))
    checks.append(_check("su2_project 2:1 homomorphism", worst, worst <= tol))
    L = cfg.labels
    worst = 0.0
    for k in range(min(cfg.trials, 50)):
        rng = np.random.default_rng([cfg.seed, 7, k])
        g = groups.random_cover_element(rng)
        a, b = uir.qha_rep(L, g), uir.qha_rep(L, g.negate())
        sign = (-1) ** int(2 * L.j)
        d = a.distance(uir.RepValue(sign * b.dj, b.internal, b.base))
        worst = max(worst, *d.values())
    checks.append(_check("qha_rep(-Rbar) = (-1)^(2j) qha_rep(Rbar)", worst, worst <= tol))
    return checks, []


def suite_quotients(cfg):
    checks, notes = [], []
    for row in liealg.QUOTIENT_ROWS:
        for n in cfg.n:
            c = liealg.check_quotient_row(row, n)
            name = f"{row.parent}({n}) / {{{','.join(row.kernel)}}} -> {row.target}"
            checks.append(_check(name, 0 if c.ok else 1, c.ok, ideal=c.ideal, jacobi=c.jacobi,
                                 homogeneous=c.homog_match, normal=c.normal_ok))
            if c.size_note and c.size_note not in notes:
                notes.append(c.size_note)
    return checks, notes


RUNNERS = {
    "algebra": suite_algebra, "matrix-oracle": suite_matrix, "casimir-count": suite_count,
    "enveloping": suite_enveloping, "casimir": suite_casimir, "uir": suite_uir,
    "heisenberg": suite_heisenberg, "cocycle": suite_cocycle, "cover": suite_cover,
    "quotients": suite_quotients,
}


def run_verify(cfg: SuiteConfig) -> dict:
    suites = []
    for name in sorted(set(cfg.suites)):
        checks, notes = RUNNERS[name](cfg)
        suites.append({"suite": name, "pass": all(c["pass"] for c in checks), "checks": checks, "notes": notes})
    return {"schema": SCHEMA, "config": cfg.to_json(), "pass": all(s["pass"] for s in suites), "suites": suites}


def _finite(x):
    if isinstance(x, float) and not np.isfinite(x):
        return str(x)
    if isinstance(x, dict):
        return {k: _finite(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_finite(v) for v in x]
    return x


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_finite(report), indent=2, sort_keys=True) + "\n"
    lines = []
    for s in report["suites"]:
        lines.append(f"[{'PASS' if s['pass'] else 'FAIL'}] {s['suite']}")
        for c in s["checks"]:
            lines.append(f"    {'ok  ' if c['pass'] else 'FAIL'} {c['name']}  max_dev={c['max_dev']:.3g}")
        for x in s["notes"]:
            lines.append(f"    note: {x}")
    lines.append("overall: " + ("PASS" if report["pass"] else "FAIL"))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- demo

def parse_grid(spec: str):
    """'lo:hi:count' for the first coordinate, optionally ',tt=value'."""
    try:
        main, _, rest = spec.partition(",")
        lo, hi, cnt = main.split(":")
        lo, hi, cnt = float(lo), float(hi), int(cnt)
        tt = 0.0
        if rest:
            key, _, val = rest.partition("=")
            if key.strip() != "tt":
                raise ValueError(key)
            tt = float(val)
    except ValueError as exc:
        raise ConfigError(f"bad grid spec {spec!r}; expected lo:hi:count[,tt=value]") from exc
    if cnt < 1 or hi < lo:
        raise ConfigError("grid needs count >= 1 and hi >= lo")
    return np.linspace(lo, hi, cnt), tt


def gaussian(x, tt):
    return np.exp(-0.5 * float(np.dot(x, x)) - 0.5 * tt * tt)


def run_demo(transform: dict, grid_spec: str) -> str:
    xs, tt = parse_grid(grid_spec)
    fam = liealg.canonical_family(transform.get("family", "QuantumHamilton"))
    L = _labels(transform.get("labels", {}))
    L = replace(L, j=0)
    try:
        g = groups.GroupParams.from_json(transform["element"]) if "element" in transform else None
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"bad element: {exc}") from exc
    n = g.n if g is not None else int(transform.get("n", 1))
    g = g or groups.GroupParams.identity(n)
    rv = uir.rep_of(fam, L, g)
    op = rv.internal if fam == "Hamilton" else rv.base
    if fam == "Hamilton":
        op = op.with_c0(rv.base.c0)
    pts = np.zeros((len(xs), n + 1))
    pts[:, 0] = xs
    pts[:, n] = tt
    vals = apply_to_samples(op, gaussian, pts)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "tt", "re", "im", "abs2"])
    for x, v in zip(xs, vals):
        w.writerow([f"{x:.10g}", f"{tt:.10g}", f"{v.real:.12e}", f"{v.imag:.12e}", f"{abs(v) ** 2:.12e}"])
    return buf.getvalue()


# ---------------------------------------------------------------- entry

def make_parser():
    p = argparse.ArgumentParser(prog="hamrep", description="Representation checks for the quantum Hamilton group.")
    sub = p.add_subparsers(dest="cmd", required=True)
    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", action="append", choices=SUITES)
    v.add_argument("--n", help="dimension, e.g. 3 or 1..4")
    v.add_argument("--family", action="append", help="family for the uir suite (repeatable)")
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--labels", help="JSON file with representation labels")
    v.add_argument("--config", help="JSON config file (flags override it)")
    v.add_argument("--format", choices=("text", "json"))
    v.add_argument("--out", help="write the report here instead of stdout")
    d = sub.add_parser("demo", help="sample a transformed Gaussian wavepacket as CSV")
    d.add_argument("--grid", required=True, help="lo:hi:count[,tt=value]")
    d.add_argument("--transform", help="JSON file: {family, labels, element}")
    d.add_argument("--out")
    return p


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.cmd == "verify":
            cfg = build_config(args)
            report = run_verify(cfg)
            text = render(report, cfg.format)
            code = 0 if report["pass"] else 1
            out = cfg.out
        else:
            transform = _load_json(args.transform) if args.transform else {}
            text = run_demo(transform, args.grid)
            code, out = 0, args.out
    except ConfigError as exc:
        print(f"hamrep: {exc}", file=sys.stderr)
        return 2
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
