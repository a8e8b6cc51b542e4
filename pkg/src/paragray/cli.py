"""Command-line entry point: verification suites and machine-readable reports.

Every command builds a :class:`Report`.  JSON output is deterministic for
fixed inputs and seed apart from the ``timing`` field.  Exit status is 0 when
every record passes, 1 when some check fails and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from . import __version__
from .complexify import curvature_bijection_check, gray_kernel_correspondence, ricci_commutation, sign_swap_checks
from .curvature import format_tensor, is_algebraic_curvature, parse_tensor, tensor_inner_product
from .errors import NotCurvatureTensor, ParagrayError, ParseError, UnsupportedDimension
from .gray import main_theorem_checks, p_operator, satisfies_gray
from .model import Kind, Structure, standard_hermitian, standard_para_hermitian
from .realize import (
    catalog,
    catalog_entry,
    d_kaehler_at,
    evaluate_entry,
    metric_j_defect,
    nonsingular_points,
    random_para_metric,
    random_theta,
    PolyMetric,
    realization_metric,
    riemann_at,
)
from .tensors import Tensor4
from .tvdecomp import decompose_curvature, module_table, ricci

SUPPORTED_DIMS = (4, 6, 8)
DEFAULT_SEED = 0
DEFAULT_POINTS = 20
DEFAULT_POLY_METRICS = 10
DEFAULT_SAMPLES = {4: 200, 6: 50, 8: 3}


@dataclass
class Record:
    name: str
    passed: bool
    witness: str | None = None

    def to_json(self) -> dict:
        out = {"name": self.name, "status": "pass" if self.passed else "fail"}
        if not self.passed and self.witness:
            out["witness"] = self.witness
        return out


@dataclass
class Report:
    suite: str
    structure: dict
    records: list[Record] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    timing: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def add(self, name: str, passed: bool, witness: str | None = None) -> None:
        self.records.append(Record(name, bool(passed), witness))

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "structure": self.structure,
            "status": "pass" if self.passed else "fail",
            "records": [r.to_json() for r in self.records],
            "details": self.details,
            "timing": round(self.timing, 3),
            "version": __version__,
        }

    def to_text(self) -> str:
        head = f"{self.suite} ({self.structure.get('dim')}, {self.structure.get('kind')})"
        lines = [head]
        for r in self.records:
            line = f"  [{'pass' if r.passed else 'FAIL'}] {r.name}"
            if not r.passed and r.witness:
                line += f"  -- {r.witness}"
            lines.append(line)
        for k, v in self.details.items():
            lines.append(f"  {k}: {json.dumps(v, sort_keys=True)}")
        lines.append(f"  overall: {'pass' if self.passed else 'FAIL'} in {self.timing:.2f}s")
        return "\n".join(lines)


def _structure(dim: int, kind: str = "para") -> Structure:
    if dim not in SUPPORTED_DIMS:
        raise UnsupportedDimension(f"dimension must be one of {SUPPORTED_DIMS}, got {dim}")
    n = dim // 2
    return standard_para_hermitian(n) if kind == "para" else standard_hermitian(0, n)


def _descr(s: Structure) -> dict:
    return {"dim": s.dim, "kind": s.kind.value}


class _Tally:
    """Collects one pass/fail outcome per sample and keeps the first witness."""

    def __init__(self, name: str):
        self.name = name
        self.count = 0
        self.witness: str | None = None

    def check(self, ok: bool, witness: Callable[[], str]) -> None:
        self.count += 1
        if not ok and self.witness is None:
            self.witness = witness()

    def record(self, report: Report) -> None:
        report.add(f"{self.name} [{self.count} cases]", self.witness is None, self.witness)


def _first_index(a: Tensor4, b: Tensor4) -> str:
    for k in sorted(a.to_sparse().keys() | b.to_sparse().keys()):
        if a[k] != b[k]:
            return f"index {tuple(i + 1 for i in k)}: got {a[k]}, expected {b[k]}"
    return ""


def _fmt_point(p) -> str:
    return "(" + ", ".join(str(x) for x in p) + ")"


# ---------------------------------------------------------------------------
# Suites


def suite_verify_gray(
    dim: int,
    seed: int = DEFAULT_SEED,
    samples: int | None = None,
    points: int = DEFAULT_POINTS,
    poly_metrics: int = DEFAULT_POLY_METRICS,
) -> Report:
    """Realization metrics and random polynomial para-Hermitian metrics.

    For each random ``theta`` in ``S2_- (x) S2`` the realization metric is
    checked for: curvature at the origin equal to ``P(theta)``, the para-Gray
    identity at random nonsingular points, ``d Omega = 0`` at the origin and
    the polynomial identity ``J*g = -g``.  Degree 3 and 4 metrics are checked
    for the para-Gray identity at random points.
    """
    s = _structure(dim)
    samples = DEFAULT_SAMPLES[dim] if samples is None else samples
    rng = random.Random(seed)
    origin = (0,) * dim
    t0 = time.perf_counter()
    rep = Report("verify-gray", _descr(s))
    realizes = _Tally("curvature of realization metric at origin equals P(theta)")
    gray_r = _Tally("para-Gray identity for realization metrics at random points")
    dk = _Tally("d Omega vanishes at origin for realization metrics")
    jdef = _Tally("realization metrics satisfy J*g = -g")
    alg = _Tally("curvature satisfies the algebraic curvature symmetries")
    gray_p = _Tally("para-Gray identity for degree 3/4 polynomial metrics at random points")
    doubled = True
    for k in range(samples):
        theta = random_theta(s, rng)
        m = realization_metric(theta, s)
        a0 = riemann_at(m, origin)
        p = p_operator(theta)
        realizes.check(a0 == p, lambda: f"sample {k}: {_first_index(a0, p)}")
        doubled &= a0 == p * 2
        jbad = metric_j_defect(m, s)
        jdef.check(not jbad, lambda: f"sample {k}: component {jbad[0]}")
        dk.check(not any(d_kaehler_at(m, s, origin).flat), lambda: f"sample {k}")
        for pt in nonsingular_points(m, points, rng):
            a = riemann_at(m, pt)
            alg.check(is_algebraic_curvature(a), lambda: f"sample {k} at {_fmt_point(pt)}")
            gray_r.check(satisfies_gray(a, s), lambda: f"sample {k} at {_fmt_point(pt)}")
    for k in range(poly_metrics):
        m = random_para_metric(s, 3 + k % 2, rng)
        for pt in nonsingular_points(m, points, rng):
            a = riemann_at(m, pt)
            alg.check(is_algebraic_curvature(a), lambda: f"polynomial metric {k} at {_fmt_point(pt)}")
            gray_p.check(satisfies_gray(a, s), lambda: f"polynomial metric {k} at {_fmt_point(pt)}")
    for t in (realizes, jdef, dk, alg, gray_r, gray_p):
        t.record(rep)
    rep.details = {
        "seed": seed,
        "samples": samples,
        "points": points,
        "poly_metrics": poly_metrics,
        # Diagnostic only: the curvature at the origin compared with 2 P(theta).
        "origin_curvature_equals_2P": doubled,
    }
    rep.timing = time.perf_counter() - t0
    return rep


def suite_verify_main(dim: int) -> Report:
    """Realizable subspace, Gray kernel and W7 at one dimension."""
    s = _structure(dim)
    t0 = time.perf_counter()
    rep = Report("verify-main", _descr(s))
    res = main_theorem_checks(s)
    d = res["dims"]
    rep.add("P equals W_G", res["P_equals_W_G"], f"dim P = {d['P']}, dim W_G = {d['W_G']}")
    rep.add("W_G equals orthogonal complement of W7", res["W_G_equals_W7_perp"])
    rep.add("W_G meets W7 trivially", res["W_G_meets_W7_trivially"])
    rep.add("dim W_G + dim W7 = dim A", res["dims_add_up"], f"{d['W_G']} + {d['W7']} != {d['A']}")
    rep.details = {"dims": d}
    rep.timing = time.perf_counter() - t0
    return rep


def suite_catalog(label: str, export: Path | None = None) -> Report:
    """Evaluate catalog entries (``all`` runs every entry)."""
    entries = catalog() if label == "all" else [catalog_entry(label)]
    t0 = time.perf_counter()
    first = entries[0].structure
    rep = Report("catalog", _descr(first) if len(entries) == 1 else {"dim": "mixed", "kind": first.kind.value})
    for e in entries:
        for r in evaluate_entry(e):
            rep.add(f"{e.label}: {r.name}", r.passed, r.witness or None)
    rep.details = {"entries": [{"label": e.label, "dim": e.structure.dim, "parameters": {k: str(v) for k, v in sorted(e.parameters.items())}} for e in entries]}
    if export is not None:
        if len(entries) != 1:
            raise ValueError("--export needs a single catalog label")
        e = entries[0]
        export.write_text(format_tensor(riemann_at(e.metric, (0,) * e.structure.dim)))
    rep.timing = time.perf_counter() - t0
    return rep


def suite_metric(text: str, seed: int = DEFAULT_SEED, points: int = DEFAULT_POINTS) -> Report:
    """Para-Gray checks for a polynomial metric read from JSON."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"metric file is not JSON: {exc.msg}", exc.lineno) from None
    m = PolyMetric.from_json(data)
    s = _structure(m.dim)
    t0 = time.perf_counter()
    rep = Report("metric", _descr(s))
    jbad = metric_j_defect(m, s)
    rep.add("J*g = -g", not jbad, f"components {[(a + 1, b + 1) for a, b in jbad]}" if jbad else None)
    rng = random.Random(seed)
    alg = _Tally("algebraic curvature symmetries at random points")
    gray = _Tally("para-Gray identity at random points")
    for pt in nonsingular_points(m, points, rng):
        a = riemann_at(m, pt)
        alg.check(is_algebraic_curvature(a), lambda: f"point {_fmt_point(pt)}")
        gray.check(satisfies_gray(a, s), lambda: f"point {_fmt_point(pt)}")
    alg.record(rep)
    gray.record(rep)
    rep.details = {"points": points, "seed": seed, "max_degree": m.max_degree()}
    rep.timing = time.perf_counter() - t0
    return rep


def suite_decompose(text: str, dim: int, kind: str = "para") -> Report:
    """Split a curvature tensor into its module components."""
    s = _structure(dim, kind)
    a = parse_tensor(text, dim)
    if not is_algebraic_curvature(a):
        raise NotCurvatureTensor("input does not have the symmetries of a curvature tensor")
    t0 = time.perf_counter()
    table = module_table(s)
    comps = decompose_curvature(a, table)
    rep = Report("decompose", _descr(s))
    total = Tensor4.zeros(dim)
    for c in comps.values():
        total = total + c
    rep.add("components reassemble the tensor", total == a, _first_index(total, a))
    labels = list(comps)
    orth = [
        (x, y)
        for i, x in enumerate(labels)
        for y in labels[i + 1 :]
        if tensor_inner_product(comps[x], comps[y], s)
    ]
    rep.add("components pairwise orthogonal", not orth, f"{orth[0]}" if orth else None)
    rd = ricci(a, s)
    rep.details = {
        "module_dims": table.dims(),
        "nonzero_components": [k for k, c in comps.items() if not c.is_zero()],
        "components": {k: format_tensor(c) for k, c in comps.items() if not c.is_zero()},
        "rho": [[str(v) for v in row] for row in rd.rho.array.tolist()],
        "rho_star": [[str(v) for v in row] for row in rd.rho_star.array.tolist()],
        "tau": str(rd.tau),
        "tau_star": str(rd.tau_star),
    }
    rep.timing = time.perf_counter() - t0
    return rep


def suite_transfer(dim: int, seed: int = DEFAULT_SEED, samples: int = 5) -> Report:
    """Complexification checks from the definite Hermitian model of dimension ``dim``."""
    if dim not in (2, 4, 6):
        raise UnsupportedDimension(f"transfer checks run at dimension 2, 4 or 6, got {dim}")
    n = dim // 2
    t0 = time.perf_counter()
    rep = Report("transfer", {"dim": dim, "kind": f"{Kind.HERMITIAN.value} -> {Kind.PARA.value}"})
    for k, v in sign_swap_checks(n).items():
        rep.add(f"sign swap: {k}", v)
    bij = curvature_bijection_check(n)
    rep.add(
        "curvature space transfers bijectively",
        bij["complex_rank"] == bij["source_dim"] == bij["target_dim"] and bij["parts_span_target"],
        json.dumps(bij),
    )
    details = {"curvature": bij}
    if n >= 2:
        gk = gray_kernel_correspondence(n)
        ok = gk["hermitian_dim"] == gk["para_dim"] == gk["complex_rank"]
        rep.add("Gray kernel dimensions agree", ok, json.dumps(gk))
        rep.add("transferred Gray kernel satisfies the para-Gray identity", gk["images_satisfy_para_gray"])
        rep.add("real and imaginary parts span the para-Gray kernel", gk["parts_span_para_kernel"])
        details["gray_kernel"] = gk
    for k, v in ricci_commutation(n, samples, random.Random(seed)).items():
        rep.add(f"transfer commutes with {k}", v)
    rep.details = details
    rep.timing = time.perf_counter() - t0
    return rep


def suite_module_table(dim: int, kind: str = "para") -> Report:
    s = _structure(dim, kind)
    t0 = time.perf_counter()
    table = module_table(s)
    rep = Report("module-table", _descr(s))
    for k, v in table.checks.items():
        rep.add(k, v)
    rep.details = {
        "dims": table.dims(),
        "module_count": table.module_count(),
        "dim_A": table.space.dim,
        "notes": {k: v for k, v in table.notes.items()},
    }
    rep.timing = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paragray", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="write the JSON report to this path")
    common.add_argument("--format", choices=("json", "text"), default="text", help="standard output format")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-gray", parents=[common], help="realization and para-Gray suites")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--samples", type=int, help="random realization metrics (default depends on --dim)")
    p.add_argument("--points", type=int, default=DEFAULT_POINTS, help="random points per metric")

    p = sub.add_parser("verify-main", parents=[common], help="realizable subspace versus Gray kernel and W7")
    p.add_argument("--dim", type=int, required=True)

    p = sub.add_parser("catalog", parents=[common], help="evaluate an example metric against its table")
    p.add_argument("label", help="catalog label, alias, or 'all'")
    p.add_argument("--export", type=Path, help="write the curvature at the origin as a tensor file")

    p = sub.add_parser("metric", parents=[common], help="para-Gray checks for a polynomial metric JSON file")
    p.add_argument("file", type=Path)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--points", type=int, default=DEFAULT_POINTS, help="random nonsingular points")

    p = sub.add_parser("decompose", parents=[common], help="module components of a curvature tensor file")
    p.add_argument("file", type=Path)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--kind", choices=("para", "hermitian"), default="para")

    p = sub.add_parser("transfer", parents=[common], help="complexification checks")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--samples", type=int, default=5)

    p = sub.add_parser("module-table", parents=[common], help="curvature module table and its checks")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--kind", choices=("para", "hermitian"), default="para")
    return parser


def run(args: argparse.Namespace) -> Report:
    cmd = args.command
    if cmd == "verify-gray":
        return suite_verify_gray(args.dim, args.seed, args.samples, args.points)
    if cmd == "verify-main":
        return suite_verify_main(args.dim)
    if cmd == "catalog":
        return suite_catalog(args.label, args.export)
    if cmd in ("decompose", "metric"):
        try:
            text = args.file.read_text()
        except OSError as exc:
            raise ParseError(f"cannot read {args.file}: {exc}", 0) from exc
        if cmd == "metric":
            return suite_metric(text, args.seed, args.points)
        return suite_decompose(text, args.dim, args.kind)
    if cmd == "transfer":
        return suite_transfer(args.dim, args.seed, args.samples)
    return suite_module_table(args.dim, args.kind)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = run(args)
    except (ParagrayError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    payload = json.dumps(report.to_json(), indent=2, sort_keys=True)
    if args.out is not None:
        args.out.write_text(payload + "\n")
    print(payload if args.format == "json" else report.to_text())
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
