"""Command-line front end: build codewords from JSON specs, analyse them,
emit deterministic JSON reports, and run the verification suites.

Commands
--------
geom-info   print the theta/Delta/W/U table and regime flags for (n, p, h)
analyze     analyse a codeword spec file (weight, decomposition, spectrum,
            minimality, oracle) and emit a JSON report
verify      run a named verification suite with per-check timing
fixture     emit the expanded spec of a named fixture

Codeword spec files are JSON:  {"n":..,"p":..,"h":..,"terms":[[H, coef],..]}
where H is either a hyperplane index or a dual coordinate list, or
{"fixture": "szonyi"|"pencil"|"no-hole-line"|"random-j", "n":.., "p":..,
"h":.., "j":.., "seed":..}.

Exit codes: 0 success, 1 error or failed check, 2 completed with
out-of-regime warnings (suppress with --no-regime-exit).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from typing import Optional

import numpy as np

from . import __version__, bounds, codes, minimality
from .bounds import BoundContext
from .ff import field_make
from .geometry import ProjectiveSpace, space_make
from .minimality import NoDecompositionError


def _emit(report: dict, out: Optional[str]):
    text = json.dumps(report, sort_keys=True, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _meta(input_bytes: bytes, flags) -> dict:
    return {
        "version": __version__,
        "input_sha256": hashlib.sha256(input_bytes).hexdigest(),
        "regime_flags": list(flags),
    }


# ---------------------------------------------------------------------------
# geom-info
# ---------------------------------------------------------------------------

def cmd_geom_info(args) -> int:
    ctx = BoundContext(args.n, args.p, args.h)
    q = ctx.q
    report = {
        "n": ctx.n, "p": ctx.p, "h": ctx.h, "q": q,
        "theta": [[m, bounds.theta(m, q)] for m in range(ctx.n + 1)],
    }
    flags = bounds.regime_flags(ctx)
    if ctx.h >= 2:
        report["delta"] = [[i, bounds.delta(i, ctx)] for i in range(ctx.n + 1)]
        report["W"] = [[i, bounds.weight_bound_W(i, ctx)] for i in range(ctx.n + 1)]
        report["U"] = [[i, bounds.thick_bound_U(i, ctx)] for i in range(1, ctx.n + 1)]
    else:
        report["delta"] = report["W"] = report["U"] = None
    key = f"geom-info:{ctx.n}:{ctx.p}:{ctx.h}".encode()
    report["meta"] = _meta(key, flags)
    _emit(report, args.out)
    if flags and not args.no_regime_exit:
        return 2
    return 0


# ---------------------------------------------------------------------------
# codeword specs and fixtures
# ---------------------------------------------------------------------------

def _space_from_params(n: int, p: int, h: int, cap_points: Optional[int]) -> ProjectiveSpace:
    return space_make(n, field_make(p, h), max_points=cap_points)


def _build_from_spec(spec: dict, cap_points: Optional[int]):
    """Returns (space, codeword, fixture_info) for a codeword spec dict."""
    n, p, h = int(spec["n"]), int(spec["p"]), int(spec["h"])
    space = _space_from_params(n, p, h, cap_points)
    fixture = spec.get("fixture")
    if fixture is None:
        terms = []
        for hspec, coef in spec.get("terms", []):
            hidx = space.hyperplane_index(hspec) if isinstance(hspec, list) else int(hspec)
            terms.append((hidx, int(coef)))
        cw, _ = codes.combine(space, terms)
        return space, cw, None
    if fixture == "szonyi":
        cw, info = minimality.szonyi_example(space)
    elif fixture in ("pencil", "no-hole-line"):
        cw, info = minimality.p2_fixtures(space, fixture)
    elif fixture == "random-j":
        j = int(spec["j"])
        rng = np.random.default_rng(int(spec.get("seed", 0)))
        cw, d = minimality.random_combination(space, j, rng)
        info = {"terms": d.to_json()["terms"], "seed": int(spec.get("seed", 0))}
    else:
        raise ValueError(f"unknown fixture {fixture!r}")
    return space, cw, info


def cmd_fixture(args) -> int:
    spec = {"n": args.n, "p": args.p, "h": args.h, "fixture": args.name}
    if args.name == "random-j":
        spec["j"] = args.j
        spec["seed"] = args.seed
    space, cw, info = _build_from_spec(spec, args.cap_points)
    d = minimality.decompose(cw) if codes.weight(cw) else None
    expanded = {
        "n": args.n, "p": args.p, "h": args.h,
        "terms": [[list(space.hyperplane(hidx).dual_coords), coef]
                  for hidx, coef in (d.terms.items() if d else [])],
        "meta": {"fixture": args.name, "info": info, "version": __version__},
    }
    _emit(expanded, args.out)
    return 0


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def cmd_analyze(args) -> int:
    with open(args.spec, "rb") as fh:
        raw = fh.read()
    spec = json.loads(raw.decode("utf-8"))
    space, cw, info = _build_from_spec(spec, args.cap_points)
    ctx = bounds.context_for(cw)
    wt = codes.weight(cw)
    flags = bounds.regime_flags(ctx, weight=wt) if ctx.h >= 2 else \
        bounds.regime_flags(ctx)
    report = {
        "space": {"n": space.n, "p": space.field.p, "h": space.field.h,
                  "q": space.q, "num_points": space.num_points},
        "weight": wt,
        "support_size": wt,
        "meta": _meta(raw, flags),
    }
    if info is not None:
        report["fixture"] = info

    rc = 0
    try:
        if args.decompose or args.minimality or args.oracle:
            d = minimality.decompose(cw) if wt else None
            if args.decompose:
                report["decomposition"] = d.to_json() if d else {"terms": []}
        if args.spectrum:
            spec_obj = bounds.secant_spectrum(cw, max_lines=args.cap_lines,
                                              threads=args.threads)
            report["spectrum"] = spec_obj.to_json()
            if ctx.h >= 2:
                w1 = bounds.weight_bound_W(1, ctx)
                u1 = bounds.thick_bound_U(1, ctx)
                thin = sum(k for s, k in spec_obj.histogram.items() if s <= w1)
                thick = sum(k for s, k in spec_obj.histogram.items()
                            if s > w1 and s >= u1)
                neither = spec_obj.total_lines - thin - thick
                report["thin_thick_lines"] = {"thin": thin, "thick": thick,
                                              "neither": neither}
        if args.minimality or args.oracle:
            rep = minimality.verdict(cw, ctx, with_oracle=args.oracle,
                                     oracle_cap=args.cap_oracle,
                                     decomposition=d)
            report["minimality"] = rep.to_json()
    except (NoDecompositionError, ValueError) as exc:
        report["error"] = str(exc)
        rc = 1
    _emit(report, args.out)
    if rc:
        return rc
    if flags and not args.no_regime_exit:
        return 2
    return 0


# ---------------------------------------------------------------------------
# verify suites
# ---------------------------------------------------------------------------

def _check(name: str, fn) -> bool:
    t0 = time.time()
    try:
        fn()
        ok = True
        msg = ""
    except AssertionError as exc:
        ok = False
        msg = f" ({exc})"
    dt = time.time() - t0
    print(f"{'PASS' if ok else 'FAIL'} {name} [{dt:.2f}s]{msg}")
    return ok


def _suite_bounds(args) -> list[tuple[str, callable]]:
    def prop_thick_lower_bound():
        for n in range(2, 9):
            for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
                h = 2
                while p ** h <= 1024:
                    ctx = BoundContext(n, p, h)
                    q = ctx.q
                    dn = bounds.delta(n, ctx)
                    for i in range(1, n + 1):
                        lhs = bounds.theta(i, q) - dn * q ** (i - 1) + 1
                        u = bounds.thick_bound_U(i, ctx)
                        assert lhs <= u, (n, p, h, i)
                        if i == 1:
                            assert lhs == u, (n, p, h)
                    h += 1

    def theta_recursion():
        for q in (4, 5, 32, 64, 125):
            for n in range(1, 6):
                assert q * bounds.theta(n - 1, q) + 1 == bounds.theta(n, q)

    def delta_halving():
        for (n, p, h) in ((3, 2, 6), (3, 5, 3), (4, 2, 8), (3, 11, 2)):
            ctx = BoundContext(n, p, h)
            assert 2 * bounds.delta(n, ctx) <= bounds.delta(n - 1, ctx)

    return [("prop-thick-lower-bound", prop_thick_lower_bound),
            ("theta-recursion", theta_recursion),
            ("delta-halving", delta_halving)]


def _suite_secants(args) -> list[tuple[str, callable]]:
    def gap_and_dichotomy():
        space = _space_from_params(args.n, args.p, args.h, args.cap_points)
        ctx = BoundContext(args.n, args.p, args.h)
        dn = bounds.delta(space.n, ctx)
        w1 = bounds.weight_bound_W(1, ctx)
        u1 = bounds.thick_bound_U(1, ctx)
        rng = np.random.default_rng(args.seed)
        for _ in range(args.trials):
            j = int(rng.integers(1, max(2, dn - 1)))
            cw, _ = minimality.random_combination(space, j, rng)
            spec = bounds.secant_spectrum(cw, max_lines=args.cap_lines,
                                          threads=args.threads)
            for s, k in spec.histogram.items():
                if k == 0:
                    continue
                assert not (dn + 1 <= s <= space.q - dn + 1), f"{s}-secant in gap"
                assert s <= w1 or s >= u1, f"{s}-secant neither thin nor thick"

    return [("secant-gap-and-dichotomy", gap_and_dichotomy)]


def _suite_roundtrip(args) -> list[tuple[str, callable]]:
    def roundtrip():
        space = _space_from_params(args.n, args.p, args.h, args.cap_points)
        ctx = BoundContext(args.n, args.p, args.h)
        dn = bounds.delta(space.n, ctx)
        rng = np.random.default_rng(args.seed)
        theta_h = space.theta(space.n - 1)
        for _ in range(args.trials):
            j = int(rng.integers(1, max(2, dn)))
            cw, d_true = minimality.random_combination(space, j, rng)
            d = minimality.decompose(cw, ctx)
            assert d.terms == d_true.terms, "terms not recovered"
            assert d.m == -(-codes.weight(cw) // theta_h), "term count mismatch"

    return [("decompose-roundtrip", roundtrip)]


def _suite_minimality(args) -> list[tuple[str, callable]]:
    def seven_line():
        space = _space_from_params(2, 5, 3, args.cap_points)
        cw, info = minimality.szonyi_example(space)
        rep = minimality.verdict(cw, with_oracle=True, oracle_cap=args.cap_oracle)
        expected = {frozenset(info["r"] + [info["s_prime"]]),
                    frozenset(info["s"] + [info["r_prime"]]),
                    frozenset([info["t"]])}
        assert set(rep.fixpoint.blocks) == expected
        assert set(rep.exceptional_holes) == {info["R"], info["S"]}
        assert rep.verdict == minimality.VERDICT_UNDETERMINED
        assert rep.oracle.minimal is True

    def char2_fixtures():
        space = _space_from_params(2, 2, 5, args.cap_points)
        for kind in ("pencil", "no-hole-line"):
            cw, _ = minimality.p2_fixtures(space, kind)
            rep = minimality.verdict(cw, with_oracle=True, oracle_cap=args.cap_oracle)
            assert rep.verdict == minimality.VERDICT_NOT_MINIMAL, kind
            w = rep.witness
            assert w is not None
            assert not np.any((w.values != 0) & (cw.values == 0)), "support escape"
            assert not minimality._is_scalar_multiple(
                w.values, cw.values, space.field.p), "witness proportional"
            assert rep.oracle.minimal is False, kind

    return [("seven-line-example", seven_line),
            ("char2-fixtures", char2_fixtures)]


def cmd_verify(args) -> int:
    suites = {
        "bounds": _suite_bounds,
        "secants": _suite_secants,
        "roundtrip": _suite_roundtrip,
        "minimality": _suite_minimality,
    }
    names = list(suites) if args.suite == "all" else [args.suite]
    all_ok = True
    for name in names:
        for check_name, fn in suites[name](args):
            all_ok &= _check(f"{name}:{check_name}", fn)
    print("OK" if all_ok else "FAILED")
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _add_common_caps(sub):
    sub.add_argument("--threads", type=int, default=1)
    sub.add_argument("--cap-points", type=int, default=None)
    sub.add_argument("--cap-lines", type=int, default=None)
    sub.add_argument("--cap-oracle", type=int, default=minimality.DEFAULT_ORACLE_CAP)
    sub.add_argument("--out", default=None, help="write the report to a file")
    sub.add_argument("--no-regime-exit", action="store_true",
                     help="exit 0 instead of 2 on out-of-regime warnings")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pgcodes",
        description="Hyperplane incidence codes of PG(n,q): analysis tools")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("geom-info", help="theta/Delta/W/U table for (n, p, h)")
    g.add_argument("n", type=int)
    g.add_argument("p", type=int)
    g.add_argument("h", type=int)
    _add_common_caps(g)
    g.set_defaults(func=cmd_geom_info)

    a = sub.add_parser("analyze", help="analyse a codeword spec file")
    a.add_argument("spec", help="path to a codeword spec JSON file")
    a.add_argument("--decompose", action="store_true")
    a.add_argument("--spectrum", action="store_true")
    a.add_argument("--minimality", action="store_true")
    a.add_argument("--oracle", action="store_true")
    _add_common_caps(a)
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=["bounds", "secants", "roundtrip",
                                     "minimality", "all"])
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--n", type=int, default=2)
    v.add_argument("--p", type=int, default=2)
    v.add_argument("--h", type=int, default=5)
    _add_common_caps(v)
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("fixture", help="emit the expanded spec of a named fixture")
    f.add_argument("name", choices=["szonyi", "pencil", "no-hole-line", "random-j"])
    f.add_argument("--n", type=int, default=2)
    f.add_argument("--p", type=int, default=5)
    f.add_argument("--h", type=int, default=3)
    f.add_argument("--j", type=int, default=3)
    f.add_argument("--seed", type=int, default=0)
    _add_common_caps(f)
    f.set_defaults(func=cmd_fixture)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
