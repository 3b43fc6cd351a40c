"""Command-line surface: exact counts, digit residues, expansions, verification.

Four subcommands share one executable:

  mary count    exact b(n) or c(n) with the residue mod m
  mary residue  the digit formulas alone, one record per n
  mary expand   both sides of an expansion identity, coefficient by coefficient
  mary verify   sweep a grid of (m, colours) points and compare formulas
                against the exact oracles

Exit codes: 0 for success or information, 1 for a mathematical mismatch,
2 for configuration or hypothesis errors.  Verification output on stdout
is byte-identical for a given configuration regardless of worker count;
timing goes to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .congruence import (
    decompose_gapfree,
    expand_b_product,
    expand_b_theorem,
    expand_c_product,
    expand_c_theorem,
    check_hypothesis,
    residue_b,
    residue_c,
    to_digits,
)
from .counting import (
    ColourSpec,
    EnumerationCapError,
    PartitionProblem,
    count_b_enum,
    count_b_series,
    count_c_enum,
    count_c_series,
)
from .series import CoprimalityError, smallest_prime_factor

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_CONFIG = 2

# Verification grid defaults: moduli to sweep, how many colour specs to
# sample per modulus (entries capped at 6), and the residue sweep bound.
GRID_MODULI = (2, 3, 5, 7, 9)
GRID_QUOTAS = {2: 2, 3: 14, 5: 14, 7: 14, 9: 10}
RESIDUE_SWEEP_LIMIT = 2000
MAX_COLOUR_ENTRY = 6
CHECK_KINDS = ("corollary-b", "corollary-c", "theorem-b", "theorem-c")
MISMATCH_RECORD_LIMIT = 100


@dataclass(frozen=True)
class JobConfig:
    """Validated run configuration shared by all subcommands."""

    command: str
    m: int | None = None
    colours: ColourSpec | None = None
    variant: str = "b"
    span: tuple[int, int] | None = None
    truncation: int | None = None
    fmt: str = "text"
    jobs: int = 1
    probe: bool = False
    use_enum: bool = False
    residue_limit: int = RESIDUE_SWEEP_LIMIT

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> JobConfig:
        m = getattr(ns, "m", None)
        if m is not None and m < 2:
            raise ValueError(f"--m must be at least 2, got {m}")
        colours = None
        if getattr(ns, "k", None) is not None:
            colours = ColourSpec.parse(ns.k)
        span = None
        if getattr(ns, "n", None) is not None:
            if ns.n < 0:
                raise ValueError(f"--n must be nonnegative, got {ns.n}")
            span = (ns.n, ns.n)
        elif getattr(ns, "range", None) is not None:
            span = _parse_span(ns.range)
        truncation = getattr(ns, "N", None)
        if truncation is not None and truncation < 0:
            raise ValueError(f"--N must be nonnegative, got {truncation}")
        jobs = getattr(ns, "jobs", 1) or 1
        if jobs < 1:
            raise ValueError(f"--jobs must be positive, got {jobs}")
        residue_limit = truncation if ns.command == "verify" and truncation is not None else RESIDUE_SWEEP_LIMIT
        return cls(
            command=ns.command,
            m=m,
            colours=colours,
            variant=getattr(ns, "variant", "b") or "b",
            span=span,
            truncation=truncation,
            fmt=getattr(ns, "fmt", "text"),
            jobs=jobs,
            probe=getattr(ns, "probe", False),
            use_enum=getattr(ns, "enum", False),
            residue_limit=residue_limit,
        )


@dataclass
class VerifyReport:
    """Aggregated outcome of a verification sweep.

    checked always equals matched + mismatched; skipped counts grid
    candidates dropped by the hypothesis filter.  Wall time is reported on
    stderr only, keeping stdout deterministic.
    """

    grid: dict
    checked: int = 0
    matched: int = 0
    mismatched: int = 0
    skipped_hypothesis: int = 0
    mismatches: list[dict] = field(default_factory=list)
    wall_time: float = 0.0


def _parse_span(text: str) -> tuple[int, int]:
    lo_text, sep, hi_text = text.partition("..")
    if not sep:
        raise ValueError(f"--range must look like 'a..b', got {text!r}")
    try:
        lo, hi = int(lo_text), int(hi_text)
    except ValueError:
        raise ValueError(f"--range must look like 'a..b', got {text!r}") from None
    if lo < 0 or hi < lo:
        raise ValueError(f"--range bounds must satisfy 0 <= a <= b, got {text!r}")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mary",
        description="Coloured m-ary partition counts and their residues modulo m.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_problem_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--m", type=int, required=True, help="base m, at least 2")
        p.add_argument(
            "--k",
            required=True,
            help="colour counts 'k0,k1,...;tail' (';tail' optional, defaults to the last entry)",
        )

    def add_span_args(p: argparse.ArgumentParser) -> None:
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--n", type=int, help="single n")
        group.add_argument("--range", help="inclusive range 'a..b'")

    def add_format_arg(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--format",
            dest="fmt",
            choices=("text", "json", "csv"),
            default="text",
            help="output format (default text)",
        )

    count = sub.add_parser("count", help="exact counts with their residues")
    add_problem_args(count)
    count.add_argument("--variant", choices=("b", "c"), required=True,
                       help="b = unrestricted, c = gap-free")
    add_span_args(count)
    count.add_argument("--enum", action="store_true",
                       help="use the enumeration oracle instead of the series oracle")
    add_format_arg(count)

    residue = sub.add_parser("residue", help="digit-formula residues")
    add_problem_args(residue)
    residue.add_argument("--variant", choices=("b", "c"), required=True,
                         help="b = unrestricted, c = gap-free")
    add_span_args(residue)
    add_format_arg(residue)

    expand = sub.add_parser("expand", help="both sides of an expansion identity")
    add_problem_args(expand)
    expand.add_argument("--variant", choices=("b", "c"), default="b",
                        help="b = unrestricted, c = gap-free (default b)")
    expand.add_argument("--N", type=int, help="truncation degree (default m**4)")
    add_format_arg(expand)

    verify = sub.add_parser("verify", help="sweep a verification grid")
    verify.add_argument("--m", type=int, help="restrict the grid to one base")
    verify.add_argument("--k", help="restrict the grid to one colour spec")
    verify.add_argument("--N", type=int,
                        help=f"residue sweep bound (default {RESIDUE_SWEEP_LIMIT})")
    verify.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    verify.add_argument("--probe", action="store_true",
                        help="diagnostic: run hypothesis-failing grid points instead")
    add_format_arg(verify)

    return parser


# ---------------------------------------------------------------------------
# record emission

def _emit(records: list[dict], fmt: str, fields: tuple[str, ...]) -> None:
    if fmt == "json":
        print(json.dumps(records, indent=1))
    elif fmt == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(fields)
        for record in records:
            writer.writerow([record[f] for f in fields])
    else:
        rows = [[str(record[f]) for f in fields] for record in records]
        widths = [
            max(len(name), *(len(row[i]) for row in rows)) if rows else len(name)
            for i, name in enumerate(fields)
        ]
        print("  ".join(name.ljust(w) for name, w in zip(fields, widths)).rstrip())
        for row in rows:
            print("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())


# ---------------------------------------------------------------------------
# count

def cmd_count(cfg: JobConfig) -> int:
    prob = PartitionProblem(cfg.m, cfg.colours)
    lo, hi = cfg.span
    records = []
    if cfg.use_enum:
        enum = count_b_enum if cfg.variant == "b" else count_c_enum
        for n in range(lo, hi + 1):
            if cfg.variant == "c" and n == 0:
                value = 0
            else:
                try:
                    value = enum(prob, n)
                except EnumerationCapError as exc:
                    print(f"error: {exc}", file=sys.stderr)
                    return EXIT_CONFIG
            records.append({"n": n, "count": str(value), "mod": value % prob.m})
    else:
        build = count_b_series if cfg.variant == "b" else count_c_series
        coeffs = build(prob, hi).coeffs
        for n in range(lo, hi + 1):
            records.append({"n": n, "count": str(coeffs[n]), "mod": coeffs[n] % prob.m})
    _emit(records, cfg.fmt, ("n", "count", "mod"))
    return EXIT_OK


# ---------------------------------------------------------------------------
# residue

def cmd_residue(cfg: JobConfig) -> int:
    prob = PartitionProblem(cfg.m, cfg.colours)
    lo, hi = cfg.span
    records = []
    for n in range(lo, hi + 1):
        if cfg.variant == "c" and n == 0:
            records.append({"n": n, "digits": "", "residue": "",
                            "note": "undefined for n = 0"})
            continue
        try:
            if cfg.variant == "b":
                value = residue_b(n, prob).value
                digits = to_digits(n, prob.m).digits
            else:
                value = residue_c(n, prob).value
                digits = to_digits(decompose_gapfree(n, prob.m).n, prob.m).digits
        except CoprimalityError as exc:
            records.append({"n": n, "digits": "", "residue": "",
                            "note": f"skipped: {exc}"})
            continue
        records.append({"n": n, "digits": ",".join(map(str, digits)),
                        "residue": value, "note": ""})
    _emit(records, cfg.fmt, ("n", "digits", "residue", "note"))
    return EXIT_OK


# ---------------------------------------------------------------------------
# expand

def cmd_expand(cfg: JobConfig) -> int:
    prob = PartitionProblem(cfg.m, cfg.colours)
    truncation = cfg.truncation if cfg.truncation is not None else prob.m ** 4
    try:
        if cfg.variant == "b":
            lhs = expand_b_product(prob, truncation)
            rhs = expand_b_theorem(prob, truncation)
        else:
            lhs = expand_c_product(prob, truncation)
            rhs = expand_c_theorem(prob, truncation)
    except CoprimalityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    records = [
        {"exponent": e, "lhs": left, "rhs": right, "match": left == right}
        for e, (left, right) in enumerate(zip(lhs.coeffs, rhs.coeffs))
    ]
    _emit(records, cfg.fmt, ("exponent", "lhs", "rhs", "match"))
    return EXIT_OK if all(r["match"] for r in records) else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# verify

def grid_colour_specs(m: int, quota: int, *, failing: bool = False) -> list[ColourSpec]:
    """Deterministic sample of colour specs for one grid base.

    Candidates have explicit entries and tails in [1, MAX_COLOUR_ENTRY],
    normalized so no two describe the same colour sequence, and are kept
    or dropped by the coprimality filter (inverted when failing=True).
    Single-entry specs are always kept first so the boundary k_0 = 1 and
    the all-ones spec appear; a seeded shuffle fills the rest of the quota.
    """
    p = smallest_prime_factor(m)

    def passes(spec: ColourSpec) -> bool:
        bound = max(spec.count(0) - 1, *spec.explicit[1:], spec.tail) \
            if len(spec.explicit) > 1 else max(spec.count(0) - 1, spec.tail)
        return p > bound

    singles = []
    longer = []
    entries = range(1, MAX_COLOUR_ENTRY + 1)
    for tail in entries:
        for k0 in entries:
            for extra in ((),) + tuple((a,) for a in entries) + tuple(
                (a, b) for a in entries for b in entries
            ):
                spec = ColourSpec((k0,) + extra, tail).normalized()
                if passes(spec) == failing:
                    continue
                target = singles if len(spec.explicit) == 1 and spec.tail == spec.explicit[0] else longer
                if spec not in target:
                    target.append(spec)
    singles.sort(key=lambda s: (s.explicit, s.tail))
    longer.sort(key=lambda s: (s.explicit, s.tail))
    chosen = singles[:quota]
    if len(chosen) < quota and longer:
        rng = random.Random(1009 * m + (1 if failing else 0))
        picks = rng.sample(longer, min(quota - len(chosen), len(longer)))
        chosen.extend(picks)
    chosen.sort(key=lambda s: (s.explicit, s.tail))
    return chosen


def default_grid(moduli=GRID_MODULI, *, failing: bool = False) -> list[PartitionProblem]:
    """The standard verification grid: hypothesis-passing points per base."""
    points = []
    for m in moduli:
        quota = GRID_QUOTAS.get(m, 10)
        for spec in grid_colour_specs(m, quota, failing=failing):
            points.append(PartitionProblem(m, spec))
    return points


def _verify_cell(task: tuple) -> tuple:
    """Run one (grid point, check kind) cell.  Must stay picklable."""
    kind, m, explicit, tail, residue_limit, probe = task
    prob = PartitionProblem(m, ColourSpec(explicit, tail))
    spec_text = str(prob.colours)
    checked = matched = 0
    mismatches = []

    def compare(n: int, oracle: int, formula: int) -> None:
        nonlocal checked, matched
        checked += 1
        if oracle == formula:
            matched += 1
        else:
            mismatches.append({"check": kind, "m": m, "k": spec_text, "n": n,
                               "oracle": oracle, "formula": formula})

    if kind == "corollary-b":
        coeffs = count_b_series(prob, residue_limit).coeffs
        for n in range(residue_limit + 1):
            formula = residue_b(n, prob, enforce_hypothesis=not probe).value
            compare(n, coeffs[n] % m, formula)
    elif kind == "corollary-c":
        coeffs = count_c_series(prob, residue_limit).coeffs
        for n in range(1, residue_limit + 1):
            formula = residue_c(n, prob, enforce_hypothesis=not probe).value
            compare(n, coeffs[n] % m, formula)
    elif kind == "theorem-b":
        truncation = m ** 4
        lhs = expand_b_product(prob, truncation)
        rhs = expand_b_theorem(prob, truncation, enforce_hypothesis=not probe)
        for e, (left, right) in enumerate(zip(lhs.coeffs, rhs.coeffs)):
            compare(e, left, right)
    else:
        truncation = m ** 4
        lhs = expand_c_product(prob, truncation)
        rhs = expand_c_theorem(prob, truncation, enforce_hypothesis=not probe)
        for e, (left, right) in enumerate(zip(lhs.coeffs, rhs.coeffs)):
            compare(e, left, right)

    return (checked, matched, mismatches)


def run_verification(cfg: JobConfig) -> VerifyReport:
    moduli = (cfg.m,) if cfg.m is not None else GRID_MODULI
    skipped = 0
    if cfg.colours is not None:
        points = []
        for m in moduli:
            prob = PartitionProblem(m, cfg.colours.normalized())
            admissible = bool(check_hypothesis(prob, len(cfg.colours.explicit) + 1))
            if admissible != cfg.probe:
                points.append(prob)
            else:
                skipped += 1
    else:
        points = default_grid(moduli, failing=cfg.probe)

    tasks = [
        (kind, prob.m, prob.colours.explicit, prob.colours.tail,
         cfg.residue_limit, cfg.probe)
        for prob in points
        for kind in CHECK_KINDS
    ]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_verify_cell, tasks))
    else:
        results = [_verify_cell(task) for task in tasks]

    report = VerifyReport(
        grid={
            "moduli": list(moduli),
            "points": len(points),
            "residue_limit": cfg.residue_limit,
            "probe": cfg.probe,
            "specs": [f"{p.m}:{p.colours}" for p in points],
        },
        skipped_hypothesis=skipped,
    )
    for checked, matched, mismatches in results:
        report.checked += checked
        report.matched += matched
        report.mismatched += checked - matched
        report.mismatches.extend(mismatches)
    report.mismatches.sort(key=lambda r: (r["m"], r["k"], r["n"], r["check"]))
    del report.mismatches[MISMATCH_RECORD_LIMIT:]
    return report


def cmd_verify(cfg: JobConfig) -> int:
    started = time.perf_counter()
    report = run_verification(cfg)
    report.wall_time = time.perf_counter() - started

    if cfg.fmt == "json":
        payload = {
            "grid": report.grid,
            "totals": {
                "checked": report.checked,
                "matched": report.matched,
                "mismatched": report.mismatched,
                "skipped_hypothesis": report.skipped_hypothesis,
            },
            "mismatches": report.mismatches,
        }
        print(json.dumps(payload, indent=1))
    elif cfg.fmt == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(("check", "m", "k", "n", "oracle", "formula"))
        for record in report.mismatches:
            writer.writerow([record[f] for f in ("check", "m", "k", "n", "oracle", "formula")])
    else:
        moduli_text = ",".join(str(m) for m in report.grid["moduli"])
        print(f"grid moduli={moduli_text} points={report.grid['points']} "
              f"residue_limit={report.grid['residue_limit']} "
              f"probe={'yes' if report.grid['probe'] else 'no'}")
        print(f"checked={report.checked} matched={report.matched} "
              f"mismatched={report.mismatched} "
              f"skipped_hypothesis={report.skipped_hypothesis}")
        for record in report.mismatches:
            print(f"mismatch check={record['check']} m={record['m']} "
                  f"k={record['k']} n={record['n']} "
                  f"oracle={record['oracle']} formula={record['formula']}")
        if cfg.probe:
            print("result: PROBE")
        else:
            print(f"result: {'PASS' if report.mismatched == 0 else 'FAIL'}")

    print(f"verify completed in {report.wall_time:.2f}s", file=sys.stderr)
    if cfg.probe:
        return EXIT_OK
    return EXIT_OK if report.mismatched == 0 else EXIT_MISMATCH


_DISPATCH = {
    "count": cmd_count,
    "residue": cmd_residue,
    "expand": cmd_expand,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse has already printed its message; fold --help into 0
        code = exc.code
        return code if isinstance(code, int) else EXIT_CONFIG
    try:
        cfg = JobConfig.from_args(ns)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return _DISPATCH[cfg.command](cfg)
    except CoprimalityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
