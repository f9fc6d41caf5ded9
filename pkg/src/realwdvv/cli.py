"""Command-line driver: ``realwdvv {gw,welschinger,verify,export}``.

Exit status is 0 on success, 1 when a verification or solve fails, and 2
for configuration problems (bad model file, bad bounds, unwritable paths).
Solved tables are cached under ``$REALWDVV_CACHE_DIR`` (default
``~/.cache/realwdvv``), keyed by model fingerprint, bounds and seeds.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import itertools
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

from . import thm3, trr
from .potentials import (COMPLEX, REAL, InvariantKey, InvariantTable, assemble_omega,
                         assemble_phi, assemble_phi_phi)
from .series import StructuralError, format_rational
from .target import ModelError, TargetModel, builtin, load_model
from .wdvv import (InconsistencyError, complex_seeds, cross_consistency, real_seeds,
                   residual_sweep, solve_complex, solve_real, _preimage_energy)

__all__ = ["main", "build_parser", "cache_dir", "atomic_write", "cached_solve"]

log = logging.getLogger("realwdvv")

CACHE_ENV = "REALWDVV_CACHE_DIR"
OK, FAILED, CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


# -- plumbing -----------------------------------------------------------------------

def cache_dir(override: str | None = None) -> Path:
    if override:
        return Path(override)
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else Path.home() / ".cache" / "realwdvv"


def atomic_write(path, text: str):
    """Write via a temporary file in the same directory and rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def resolve_model(name: str) -> TargetModel:
    try:
        return builtin(name)
    except (KeyError, ValueError):
        pass
    if not Path(name).exists():
        raise ConfigError(f"unknown target {name!r}: not a built-in name or a file")
    return load_model(name)


def _cache_key(model: TargetModel, sector: str, dmax: int, seeds: InvariantTable,
               extra=()) -> str:
    blob = json.dumps({"model": model.fingerprint(), "sector": sector, "dmax": dmax,
                       "seeds": seeds.to_records(), "extra": list(extra)}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _load_cached(path: Path, model: TargetModel):
    if not path.exists():
        return None
    try:
        doc = json.loads(path.read_text())
        table = InvariantTable.from_json(model, json.dumps(doc["table"]))
        return table, str(doc["report"])
    except Exception as exc:  # anything unreadable is recomputed
        log.warning("ignoring corrupted cache file %s (%s)", path, exc)
        return None


def _store_cached(path: Path, table: InvariantTable, report: str):
    try:
        doc = {"table": json.loads(table.to_json()), "report": report}
        atomic_write(path, json.dumps(doc, sort_keys=True))
    except OSError as exc:
        log.warning("could not write cache file %s (%s)", path, exc)


def cached_solve(model: TargetModel, sector: str, dmax: int, cache: Path | None,
                 complex_table: InvariantTable | None = None):
    """Solve (or load) a table; returns ``(table, report_text, ok)``."""
    seeds = complex_seeds(model) if sector == COMPLEX else real_seeds(model)
    path = None
    if cache is not None:
        path = cache / f"{sector}-{_cache_key(model, sector, dmax, seeds)}.json"
        hit = _load_cached(path, model)
        if hit is not None:
            log.info("cache hit %s", path)
            return hit[0], hit[1], True
    if sector == COMPLEX:
        table, report = solve_complex(model, dmax, seeds)
    else:
        table, report = solve_real(model, dmax, complex_table=complex_table, seeds=seeds)
    text = report.render(model)
    if report.ok and path is not None:
        _store_cached(path, table, text)
    return table, text, report.ok


def _complex_for_real(model, dmax, cache):
    # the parity check also wants the complex counts through dmax
    need = max(dmax, _preimage_energy(model, dmax + 2))
    table, _, ok = cached_solve(model, COMPLEX, need, cache)
    if not ok:
        raise InconsistencyError("complex input", 0)
    return table


def _emit(args, table: InvariantTable, report: str, summary: str):
    if args.out:
        atomic_write(args.out, table.to_json())
    if args.report:
        atomic_write(args.report, report)
    sys.stdout.write(summary)
    if args.show_report:
        sys.stdout.write(report)


def _table_lines(table: InvariantTable, sector: str) -> str:
    model = table.target
    lines = []
    for k in table.keys(sector):
        if not any(k.degree):
            continue
        lines.append(f"{k.describe(model)} = {format_rational(table[k])}")
    return "\n".join(lines) + "\n"


def _p2_count(complex_table: InvariantTable, d: int):
    m = complex_table.target
    ins = [0] * m.n
    ins[m.n - 1] = 3 * d - 1
    return complex_table.get(InvariantKey.complex((d,), ins))


# -- subcommands --------------------------------------------------------------------

def cmd_gw(args) -> int:
    model = resolve_model(args.target)
    table, report, ok = cached_solve(model, COMPLEX, args.dmax, args.cache)
    _emit(args, table, report, _table_lines(table, COMPLEX))
    return OK if ok else FAILED


def cmd_welschinger(args) -> int:
    model = resolve_model(args.target)
    if model.complex_dim != 2:
        raise ConfigError("the real solver handles real fourfolds (complex dimension 2) only")
    ctable = _complex_for_real(model, args.dmax, args.cache)
    table, report, ok = cached_solve(model, REAL, args.dmax, args.cache, ctable)
    out = [_table_lines(table, REAL)]
    if model.lattice_rank == 1 and model.n == 3:
        bad = []
        for k in table.keys(REAL):
            if not any(k.degree):
                continue
            n = _p2_count(ctable, k.degree[0])
            w = table[k]
            if n is None or (w - n) % 2 != 0 or abs(w) > n:
                bad.append(f"{k.describe(model)} = {w} vs complex count {n}")
        out.append("parity and bound check: " + ("ok" if not bad else "FAILED") + "\n")
        out.extend(f"  {b}\n" for b in bad)
        ok = ok and not bad
    if not args.no_cross_check:
        cc = cross_consistency(args.dmax, model, complex_table=ctable)
        report += cc.render(model)
        out.append(cc.render(model))
        ok = ok and cc.identical
    _emit(args, table, report, "".join(out))
    return OK if ok else FAILED


def cmd_verify(args) -> int:
    return {"wdvv": _verify_wdvv, "trr": _verify_trr, "thm3": _verify_thm3}[args.which](args)


def _verify_wdvv(args) -> int:
    model = resolve_model(args.target)
    T, E = args.max_degree, args.dmax
    if model.complex_dim == 2:
        ctable, ok = _complex_for_real(model, E, args.cache), True
    else:
        ctable, _, ok = cached_solve(model, COMPLEX, E, args.cache)
    results = residual_sweep(model, phi=assemble_phi(ctable, T + 1, E), families=("cwdvv",))
    if model.complex_dim == 2:
        rtable, _, rok = cached_solve(model, REAL, E, args.cache, ctable)
        ok = ok and rok
        results += residual_sweep(model, phi_phi=assemble_phi_phi(ctable, model, T + 1, E),
                                  omega=assemble_omega(rtable, T, E), families=("m12", "m03"))
    bad = [r for r in results if not r.series.is_zero()]
    counts = {}
    for r in results:
        counts[r.family] = counts.get(r.family, 0) + 1
    doc = {"target": model.name, "max_degree": T, "max_energy": E, "residuals": counts,
           "nonzero": [{"residual": r.label(), "series": r.series.render()} for r in bad]}
    for fam, n in sorted(counts.items()):
        nz = sum(1 for r in bad if r.family == fam)
        print(f"{fam}: {n} residuals, {nz} nonzero")
    for r in bad:
        print(f"  {r.label()} = {r.series.render()}")
    print("all residuals vanish" if not bad and ok else "FAILED")
    if args.json:
        atomic_write(args.json, json.dumps(doc, indent=1, sort_keys=True) + "\n")
    return OK if ok and not bad else FAILED


def _trr_cases(lmax: int, real_bound: int):
    for l in range(3, lmax + 1):
        for i, j in itertools.permutations(range(2, l + 1), 2):
            yield trr.derive_thm1(l, i, j)
    for k in range(0, real_bound + 1):
        for l in range(1, real_bound // 2 + 1):
            if k + 2 * l > real_bound or k + 2 * l < 3:
                continue
            if k >= 1:
                yield trr.derive_thm2(k, l)
            for i in range(2, l + 1):
                yield trr.derive_thm2(k, l, i)


def _verify_trr(args) -> int:
    if args.lmax < 3 or args.real_bound < 3:
        raise ConfigError("lmax and real bound must be at least 3")
    cases = [d.to_dict() for d in _trr_cases(args.lmax, args.real_bound)]
    pairings, bad_pairs = 0, []
    for l in range(4, args.lmax + 1):
        for i, j in itertools.permutations(range(2, l + 1), 2):
            for a in trr.exponent_vectors(l, l - 4):
                lhs, rhs = trr.pair_thm1(l, i, j, a)
                pairings += 1
                if lhs != rhs:
                    bad_pairs.append({"l": l, "i": i, "j": j, "exponents": list(a),
                                      "lhs": lhs, "rhs": rhs})
    bad = [c for c in cases if not c["match"]]
    print(f"derivations: {len(cases)}, mismatches: {len(bad)}")
    for c in bad:
        print(f"  {c['case']}: derived {c['derived']} stated {c['stated']}")
    print(f"psi pairings: {pairings}, mismatches: {len(bad_pairs)}")
    if args.json:
        doc = {"derivations": cases, "pairings": pairings, "pairing_failures": bad_pairs}
        atomic_write(args.json, json.dumps(doc, indent=1, sort_keys=True) + "\n")
    return OK if not bad and not bad_pairs else FAILED


def _verify_thm3(args) -> int:
    if args.trials < 1:
        raise ConfigError("trials must be positive")
    reports = [thm3.run_trials(n, args.trials, args.seed) for n in args.sizes]
    for r in reports:
        print(f"N={r.n}: {r.passed}/{r.trials} passed, "
              f"{r.trials - r.not_cancellable} with d_u^2 Omega != 0")
    print("note: the series-level conclusion also needs d_u^2 Omega to be a non-zero-divisor; "
          "this step is assumed, not checked")
    if args.json:
        doc = {"certificate": list(thm3.CERTIFICATE.coefficients),
               "non_zero_divisor_step": "assumed",
               "runs": [r.to_dict() for r in reports]}
        atomic_write(args.json, json.dumps(doc, indent=1, sort_keys=True) + "\n")
    return OK if all(not r.failures for r in reports) else FAILED


def cmd_export(args) -> int:
    model = resolve_model(args.target)
    if args.input:
        try:
            table = InvariantTable.load(model, args.input)
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"cannot read table {args.input}: {exc}") from exc
        ok = True
    elif args.sector == COMPLEX:
        table, _, ok = cached_solve(model, COMPLEX, args.dmax, args.cache)
    else:
        if model.complex_dim != 2:
            raise ConfigError("the real solver handles real fourfolds (complex dimension 2) only")
        ctable = _complex_for_real(model, args.dmax, args.cache)
        table, _, ok = cached_solve(model, REAL, args.dmax, args.cache, ctable)
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["sector", "degree", "insertions", "k", "spinTag", "value", "provenance"])
        for rec in table.to_records():
            ins = ";".join(f"{lab}^{c}" for lab, c in rec["insertions"].items())
            w.writerow([rec["sector"], " ".join(map(str, rec["degree"])), ins,
                        "" if rec["k"] is None else rec["k"], rec["spinTag"] or "",
                        rec["value"], rec["provenance"]])
        text = buf.getvalue()
    else:
        text = table.to_json()
    if args.out:
        atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return OK if ok else FAILED


# -- parser -----------------------------------------------------------------------------

def _positive(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _sizes(s: str) -> list[int]:
    return [_positive(x) for x in s.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="realwdvv",
                                description="Exact complex and real genus-0 invariants "
                                            "from WDVV-type equations.")
    p.add_argument("--cache-dir", help=f"cache directory (default ${CACHE_ENV} "
                                       "or ~/.cache/realwdvv)")
    p.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def outputs(sp):
        sp.add_argument("--target", default="p2", help="built-in name (p2, p3) or model JSON path")
        sp.add_argument("--dmax", type=_positive, default=3)
        sp.add_argument("--out", help="write the invariant table JSON here")
        sp.add_argument("--report", help="write the solve report here")
        sp.add_argument("--show-report", action="store_true", help="print the solve report")

    g = sub.add_parser("gw", help="solve the complex invariants")
    outputs(g)
    g.set_defaults(func=cmd_gw)

    w = sub.add_parser("welschinger", help="solve the real invariants of a real surface")
    outputs(w)
    w.add_argument("--no-cross-check", action="store_true",
                   help="skip the m12-only versus m03-only comparison")
    w.set_defaults(func=cmd_welschinger)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("which", choices=["wdvv", "trr", "thm3"])
    v.add_argument("--target", default="p2")
    v.add_argument("--dmax", type=_positive, default=4)
    v.add_argument("--max-degree", type=_positive, default=10,
                   help="truncation in t and u for the residual sweep")
    v.add_argument("--lmax", type=_positive, default=8)
    v.add_argument("--real-bound", type=_positive, default=8, help="bound on k + 2l")
    v.add_argument("--trials", type=_positive, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--sizes", type=_sizes, default=[1, 2, 3, 4])
    v.add_argument("--json", help="write a JSON report here")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("export", help="export a table as CSV or JSON")
    fmt = e.add_mutually_exclusive_group(required=True)
    fmt.add_argument("--csv", action="store_true")
    fmt.add_argument("--json", action="store_true")
    e.add_argument("--target", default="p2")
    e.add_argument("--sector", choices=[COMPLEX, REAL], default=COMPLEX)
    e.add_argument("--dmax", type=_positive, default=3)
    e.add_argument("--input", help="read this table JSON instead of solving")
    e.add_argument("--out")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return CONFIG if exc.code else OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    args.cache = None if args.no_cache else cache_dir(args.cache_dir)
    try:
        return args.func(args)
    except ModelError as exc:
        print("invalid model:", file=sys.stderr)
        for v in getattr(exc, "violations", None) or [str(exc)]:
            print(f"  - {v}", file=sys.stderr)
        return CONFIG
    except (ConfigError, StructuralError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return CONFIG
    except InconsistencyError as exc:
        print(f"solve failed: {exc}", file=sys.stderr)
        if exc.report is not None:
            print(exc.report.render(), file=sys.stderr)
        return FAILED
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return CONFIG


if __name__ == "__main__":
    sys.exit(main())
