"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 argument error,
3 infeasible configuration.  Data goes to stdout (or ``-o``), diagnostics
to stderr.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from decimal import Decimal, InvalidOperation
from pathlib import Path

import numpy as np

from . import __version__
from ._accel import BACKEND
from .area import (
    SequencePair,
    area_constant_grid,
    brun_check,
    singular_series,
    triangle_identity_sides,
    verify_decomposition,
    verify_triangle_identity,
)
from .characters import (
    build_group,
    character_table,
    characters,
    column_orthogonality,
    orthogonality_pairs,
    row_orthogonality,
)
from .equidist import constant_estimate, measure, reports_to_csv, LABEL_FIELDS
from .errors import LatticePrimeError, PreconditionError
from .residues import admissible_classes, build_classes, class_size_bound, make_modulus, omega
from .sieve import MAX_BOUND, DEFAULT_SEGMENT, PrimeTable, build_table, load_table, save_table

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3
CACHE_ENV = "LATTICEPRIME_CACHE_DIR"


class UsageError(Exception):
    pass


def parse_int(text: str) -> int:
    """Integer from decimal or scientific notation ("1e6")."""
    try:
        d = Decimal(text.strip())
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not d.is_finite() or d != d.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(d)


def parse_grid(text: str) -> list[int]:
    return [parse_int(v) for v in text.split(",") if v.strip()]


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _default_cache(bound: int) -> Path | None:
    d = os.environ.get(CACHE_ENV)
    return Path(d) / f"primes_{bound}.lprb" if d else None


def get_table(bound: int, args, write_cache: bool = False) -> PrimeTable:
    if bound < 2 or bound > MAX_BOUND:
        raise UsageError(f"sieve bound must lie in [2, {MAX_BOUND}], got {bound}")
    path = Path(args.cache) if getattr(args, "cache", None) else _default_cache(bound)
    if path is not None and path.exists():
        t = load_table(path)
        if t.bound >= bound:
            _err(f"loaded prime table (bound {t.bound}) from {path}")
            return t
    t = build_table(bound, segment_size=args.segment_size, workers=args.workers)
    if path is not None and (write_cache or getattr(args, "cache", None)):
        path.parent.mkdir(parents=True, exist_ok=True)
        save_table(t, path)
        _err(f"wrote prime table cache {path}")
    return t


# -- sieve -------------------------------------------------------------------

def cmd_sieve(args) -> int:
    t = get_table(args.x, args, write_cache=True)
    print(f"pi({args.x}) = {t.pi(args.x)}")
    return EXIT_OK


# -- verify ------------------------------------------------------------------

class Check:
    def __init__(self, name: str):
        self.name = name
        self.instances = 0
        self.failures: list[str] = []

    def record(self, ok: bool, what: str) -> None:
        self.instances += 1
        if not ok:
            self.failures.append(what)

    def summary(self) -> dict:
        return {
            "name": self.name,
            "passed": not self.failures,
            "instances": self.instances,
            "failures": self.failures[:20],
        }


def _check_decomposition(trials: int, rng: random.Random) -> Check:
    ck = Check("decomposition_identity")
    for i in range(trials):
        x = rng.randint(2, 300)
        vals = [rng.randint(-1000, 1000) for _ in range(x)]
        lhs, rhs = verify_decomposition(vals, x)
        ck.record(lhs == rhs, f"trial {i}: x={x} lhs={lhs} rhs={rhs}")
    return ck


def _check_triangle(trials: int, rng: random.Random) -> Check:
    ck = Check("triangle_identity")
    for i in range(trials):
        n = rng.randint(1, 50)
        angle = rng.uniform(0.0, math.pi / 2)
        lengths = [rng.uniform(0.0, 10.0) for _ in range(n)]
        s = SequencePair(
            tuple(v * math.cos(angle) for v in lengths),
            tuple(v * math.sin(angle) for v in lengths),
        )
        residual = verify_triangle_identity(s)
        _, _, scale = triangle_identity_sides(s)
        ck.record(residual <= 1e-9 * max(scale, 1.0), f"trial {i}: n={n} residual={residual}")
    bad = SequencePair((1.0, 0.0), (0.0, 1.0))
    try:
        verify_triangle_identity(bad)
        ck.record(False, "inadmissible pair was not rejected")
    except PreconditionError:
        ck.record(True, "")
    return ck


def _check_counting(qs) -> list[Check]:
    classes, om, bound = Check("class_count_equals_phi"), Check("omega_formula"), Check("class_size_bound")
    for q in qs:
        m = make_modulus(q)
        u = m.units()
        prods = np.outer(u, u) % q
        classes.record(np.unique(prods).size == m.phi == len(build_classes(m)), f"q={q}")
        iu = np.triu_indices(u.size, k=1)
        om.record(iu[0].size == omega(m), f"q={q}: brute={iu[0].size} omega={omega(m)}")
        labels, sizes = np.unique(prods[iu], return_counts=True)
        cap = class_size_bound(m)
        worst = int(sizes.max()) if sizes.size else 0
        bound.record(worst <= cap, f"q={q}: largest class {worst} > {cap}")
    return [classes, om, bound]


def _check_admissible(qs, zmax: int = 30) -> Check:
    ck = Check("admissible_multiplicity_total")
    for q in qs:
        m = make_modulus(q)
        for z in range(1, zmax + 1):
            direct = sum(1 for a in range(q) if math.gcd(a, q) == 1 and math.gcd(a + z, q) == 1)
            ck.record(admissible_classes(z, m).total_multiplicity == direct, f"q={q} z={z}")
    return ck


def _check_characters(qs, fault: bool = False) -> list[Check]:
    count, pairs, rows, cols = (
        Check("character_count"),
        Check("orthogonality_over_classes"),
        Check("row_orthogonality"),
        Check("column_orthogonality"),
    )
    for q in qs:
        g = build_group(q)
        phi = g.modulus.phi
        chars, units, table = character_table(g)
        if fault and q == qs[-1] and table.shape[1] > 1:
            table = table.copy()
            table[-1, -1] = (table[-1, -1] + 1) % g.exponent
        count.record(len(chars) == phi, f"q={q}: {len(chars)} characters")
        for c in chars:
            v = orthogonality_pairs(c)
            pairs.record(v == (phi if c.is_principal else 0), f"q={q} chi={c.exponents}: {v}")
        want = np.where(np.eye(phi, dtype=bool), phi, 0)
        r = row_orthogonality(table, g.exponent)
        rows.record(bool((r == want).all()), f"q={q}: character table rows not orthogonal")
        c = column_orthogonality(table, g.exponent)
        cols.record(bool((c == want).all()), f"q={q}: character table columns not orthogonal")
    return [count, pairs, rows, cols]


def cmd_verify(args) -> int:
    if args.q_max < 2:
        raise UsageError(f"--q-max must be >= 2 (empty modulus range), got {args.q_max}")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    rng = random.Random(args.seed)
    qs = list(range(2, args.q_max + 1))
    checks = [_check_decomposition(args.trials, rng), _check_triangle(args.trials, rng)]
    checks += _check_counting(qs)
    checks.append(_check_admissible(qs[: max(1, min(len(qs), 199))]))
    checks += _check_characters(qs, fault=args.inject_fault)
    summary = {"passed": all(not c.failures for c in checks), "checks": [c.summary() for c in checks]}
    print(json.dumps(summary, indent=2))
    for c in checks:
        for f in c.failures[:5]:
            _err(f"FAIL {c.name}: {f}")
    return EXIT_OK if summary["passed"] else EXIT_FAIL


# -- equidist ----------------------------------------------------------------

def _format_table(reports) -> str:
    lines = []
    for r in reports:
        lines.append(f"# q={r.q} z={r.z} x={r.x} weight={r.weight} excluded={r.excluded_mass}")
        lines.append("  ".join(f"{h:>16}" for h in LABEL_FIELDS))
        for row in r.labels:
            cells = []
            for h in LABEL_FIELDS:
                v = getattr(row, h)
                cells.append(f"{v:>16.6g}" if isinstance(v, float) else f"{str(v):>16}")
            lines.append("  ".join(cells))
        lines.append(f"chi2_uniform={r.chi2_uniform} chi2_weighted={r.chi2_weighted} theta_hat={r.theta_hat:.6g}")
    return "\n".join(lines) + "\n"


def cmd_equidist(args) -> int:
    xs = sorted(set(args.x))
    if not xs or xs[0] < 2 or args.z < 1 or args.q < 2:
        raise UsageError("need x >= 2, z >= 1, q >= 2")
    m = make_modulus(args.q)
    adm = admissible_classes(args.z, m)
    if adm.admissible_count == 0:
        _err(
            f"no admissible class for z={args.z} mod q={args.q}: no residue a has both "
            f"a and a+{args.z} coprime to {args.q}, so only excluded pairs can occur"
        )
        return EXIT_INFEASIBLE
    t = get_table(xs[-1] + args.z, args)
    reports = [measure(args.z, m, x, t, args.weight) for x in xs]
    if args.format == "json":
        payload = reports[0].to_dict() if len(reports) == 1 else [r.to_dict() for r in reports]
        text = json.dumps(payload, indent=2) + "\n"
    elif args.format == "csv":
        text = reports_to_csv(reports)
    else:
        text = _format_table(reports)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    for r in reports:
        _err(f"x={r.x} uniform chi2={r.chi2_uniform} max|dev|={r.max_abs_rel_dev_uniform}")
        _err(f"x={r.x} weighted chi2={r.chi2_weighted} max|dev|={r.max_abs_rel_dev_weighted}")
    if len(reports) >= 3 and not any(r.degenerate for r in reports):
        est = constant_estimate(reports)
        _err(f"theta_hat uniform={est.theta_hat('uniform'):.6g} weighted={est.theta_hat('weighted'):.6g}")
    return EXIT_OK


# -- constants ---------------------------------------------------------------

def cmd_constants(args) -> int:
    if args.z < 1 or args.z % 2:
        raise UsageError(f"singular series needs an even positive gap, got z={args.z}")
    if args.cutoff < 100:
        raise UsageError("--cutoff must be >= 100")
    xs = sorted(set(args.x))
    if any(x < 100 for x in xs):
        raise UsageError("grid points must be >= 100")
    t = get_table(max(args.cutoff, xs[-1] + args.z), args)
    s = singular_series(args.z, args.cutoff, t)
    print(f"z = {args.z}")
    print(f"cutoff = {args.cutoff}")
    print(f"Pi2_partial = {s.pi2_partial:.10f}")
    print(f"singular_series = {s.value:.10f}")
    for row in brun_check(args.z, xs, t, s.value):
        print(f"brun x={row.x} pairs={row.pairs} ratio={row.ratio:.6f} ratio/singular={row.relative:.6f}")
    for weight in ("theta", "lambda"):
        for x, c in area_constant_grid(xs, args.z, weight, t):
            print(f"area_constant x={x} weight={weight} C={c:.6f}")
    return EXIT_OK


# -- entry point ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                        help="sieve threads (output does not depend on it)")
    common.add_argument("--segment-size", type=parse_int, default=DEFAULT_SEGMENT,
                        help="odd numbers per sieve segment")
    common.add_argument("--cache", help="prime table cache file (read if present)")

    p = argparse.ArgumentParser(prog="latticeprime", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sieve", parents=[common], help="build a prime table and print pi(x)")
    s.add_argument("--x", type=parse_int, required=True)
    s.set_defaults(func=cmd_sieve)

    v = sub.add_parser("verify", parents=[common], help="run the exact identity suites")
    v.add_argument("--q-max", type=parse_int, default=100, help="check every modulus 2..Q")
    v.add_argument("--trials", type=parse_int, default=50, help="random functions per identity suite")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("equidist", parents=[common], help="bucket prime pairs by lattice class")
    e.add_argument("--z", type=parse_int, required=True, help="pair gap")
    e.add_argument("--q", type=parse_int, required=True, help="modulus")
    e.add_argument("--x", type=parse_grid, action="extend", default=None,
                   help="bound(s); comma separated or repeated (default 1e4,1e5,1e6,1e7)")
    e.add_argument("--weight", choices=("lambda", "theta"), default="lambda",
                   help="pair weight for the Psi mass")
    e.add_argument("--format", choices=("json", "csv", "table"), default="table")
    e.add_argument("-o", "--output", help="write to a file instead of stdout")
    e.set_defaults(func=cmd_equidist)

    c = sub.add_parser("constants", parents=[common], help="singular series, Brun ratios, area constants")
    c.add_argument("--z", type=parse_int, required=True, help="even pair gap")
    c.add_argument("--cutoff", type=parse_int, default=10**7, help="prime cutoff for the product")
    c.add_argument("--x", type=parse_grid, action="extend", default=None,
                   help="grid for Brun ratios and area constants (default 1e4,1e5,1e6)")
    c.set_defaults(func=cmd_constants)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "x", None) is None:
        args.x = [10**4, 10**5, 10**6, 10**7] if args.command == "equidist" else [10**4, 10**5, 10**6]
    try:
        return args.func(args)
    except (UsageError, LatticePrimeError) as exc:
        _err(f"error: {exc}")
        return EXIT_USAGE
    except OSError as exc:
        _err(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
