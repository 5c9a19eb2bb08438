"""Command-line front end.

Exit codes: 0 = success/verified, 1 = verification failed or search
unsuccessful, 2 = usage or domain error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import algebra, analysis, catalogue, constructions, io, search
from .core import DEFAULT_TOL, MubforgeError


def _parse_params(text: str) -> dict:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if "=" not in item:
            raise MubforgeError(f"malformed parameter {item!r}; expected key=value")
        key, val = item.split("=", 1)
        try:
            out[key.strip()] = float(val)
        except ValueError:
            out[key.strip()] = val.strip()
    return out


def _print_table(rows, header=None):
    cols = len(rows[0]) if rows else (len(header) if header else 0)
    widths = [0] * cols
    data = ([header] if header else []) + [[str(c) for c in r] for r in rows]
    for r in data:
        for i, c in enumerate(r):
            widths[i] = max(widths[i], len(str(c)))
    for r in data:
        print("  ".join(str(c).ljust(widths[i]) for i, c in enumerate(r)))


def cmd_construct(args) -> int:
    method = args.method
    params = _parse_params(args.params or "")
    if method in constructions.COMPLETE_METHODS:
        mubs = constructions.construct_complete(method, args.d)
    elif method == "tensor_product":
        factors = [int(x) for x in str(args.factors).split(",")]
        sets = []
        for f in factors:
            choices = constructions.applicable_methods(f)
            if not choices:
                raise MubforgeError(f"factor {f} is not a prime power")
            sets.append(constructions.construct_complete(choices[0], f))
        mubs = constructions.tensor_product_mubs(sets)
    elif method == "latin_square":
        s = int(params.pop("s", int(np.sqrt(args.d)) if args.d else 0))
        mols, _, _ = algebra.mols_generate(s)
        mubs = constructions.latin_square_mubs(s, mols, catalogue.fourier(s).matrix)
    elif method == "weighted_design":
        mubs = constructions.weighted_design(args.d)
    elif method == "approx":
        p = params.pop("p", None)
        mubs, max_overlap, bound = constructions.approx_mub(args.d, int(p) if p else None)
        print(f"max squared cross-overlap {max_overlap:.6f} (bound sqrt(p)/d = {bound:.6f})")
    elif method == "product_family_d6":
        which = str(params.pop("which", "T0"))
        mubs = constructions.product_family_d6(which, params)
    else:
        raise MubforgeError(f"unknown method {args.method!r}")
    report = analysis.check_mu_set(mubs.bases)
    _print_table(
        [
            ["dimension", mubs.dim],
            ["bases", len(mubs)],
            ["max MU deviation", f"{report.max_mu_deviation:.3e}"],
            ["max orth deviation", f"{report.max_orth_deviation:.3e}"],
            ["f value", f"{report.f_value:.3e}"],
        ]
    )
    if args.out:
        io.save(io.document_for_mubset(mubs), args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_catalogue(args) -> int:
    params = _parse_params(args.params or "")
    if args.family == "zauner_triple":
        x = float(params.pop("x", 0.0))
        E1, E2 = catalogue.zauner_triple(x)
        bases = [np.eye(6, dtype=complex), E1.matrix, E2.matrix]
        rep = analysis.check_mu_set(bases)
        mubs = constructions.MUBSet(6, bases, "zauner_triple", {"x": x})
        print(f"Zauner triple at x={x}: MU deviation {rep.max_mu_deviation:.3e}")
        if args.out:
            io.save(io.document_for_mubset(mubs), args.out)
            print(f"wrote {args.out}")
        return 0
    if "alpha_re" in params or "alpha_im" in params:
        params["alpha"] = complex(params.pop("alpha_re", 0.0), params.pop("alpha_im", 0.0))
    if args.d is not None:
        params.setdefault("d", args.d)
    H = catalogue.generate(args.family, **params)
    rep = H.check()
    flags = catalogue.structure_flags(H)
    dreport = catalogue.defect(H)
    _print_table(
        [
            ["family", args.family],
            ["order", H.dim],
            ["unitarity deviation", f"{rep.unitarity_deviation:.3e}"],
            ["modulus deviation", f"{rep.modulus_deviation:.3e}"],
            ["defect", dreport.defect],
            ["butson order", flags["butson_order"]],
            ["circulant", flags["is_circulant"]],
            ["H2-reducible", flags["h2_reducible"]],
        ]
    )
    if args.out:
        io.save(io.document_for_matrix(H, {"family": args.family}), args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_verify(args) -> int:
    doc = io.load(args.infile)
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    ok = True
    rows = []
    if doc.kind == "matrix":
        M = io.matrix_of(doc)
        for check in checks:
            if check == "hadamard":
                rep = analysis.check_mu_set([np.eye(doc.dim, dtype=complex), M])
                good = rep.max_mu_deviation < DEFAULT_TOL.eps_mu
                rows.append(["hadamard", f"{rep.max_mu_deviation:.3e}", "pass" if good else "FAIL"])
                ok &= good
            elif check == "defect":
                rows.append(["defect", catalogue.defect(M).defect, "pass"])
            elif check == "flags":
                rows.append(["flags", catalogue.structure_flags(M), "pass"])
            elif check == "h0":
                val = analysis.delsarte_h0(M)
                good = abs(val) < 1e-10
                rows.append(["h0", f"{val:.3e}", "pass" if good else "FAIL"])
                ok &= good
            else:
                raise MubforgeError(f"unknown matrix check {check!r}")
    elif doc.kind == "mubset":
        bases = io.bases_of(doc)
        d = doc.dim
        for check in checks:
            if check == "mu":
                rep = analysis.check_mu_set(bases)
                good = rep.is_mu()
                rows.append(["mu", f"dev {rep.max_mu_deviation:.3e}  F {rep.f_value:.3e}", "pass" if good else "FAIL"])
                ok &= good
            elif check == "welch":
                rep = analysis.welch_and_design_check(bases)
                t1, t2 = d * (d + 1) ** 2, 2 * d * (d + 1)
                good = abs(rep.welch_k1 - t1) < 1e-9 * t1 and abs(rep.welch_k2 - t2) < 1e-9 * t2
                rows.append(["welch", f"k1 {rep.welch_k1:.6f} (= {t1})  k2 {rep.welch_k2:.6f} (= {t2})", "pass" if good else "FAIL"])
                ok &= good
            elif check == "design":
                weights = doc.metadata.get("weights")
                rep = analysis.welch_and_design_check(bases, weights)
                good = rep.two_design_deviation < 1e-9
                rows.append(["design", f"deviation {rep.two_design_deviation:.3e}", "pass" if good else "FAIL"])
                ok &= good
            elif check == "qrac":
                rows.append(["qrac", f"{analysis.qrac_probability(bases):.9f}", "pass"])
            else:
                raise MubforgeError(f"unknown mubset check {check!r}")
    else:
        raise MubforgeError(f"no checks defined for document kind {doc.kind!r}")
    _print_table(rows, header=["check", "result", "status"])
    return 0 if ok else 1


_PAIR_FAMILIES = {
    "fourier6": lambda: catalogue.fourier(6),
    "tao": catalogue.tao_s6,
    "bjorck": catalogue.bjorck_c6,
    "dita0": lambda: catalogue.dita_slice(0.0),
}


def cmd_search(args) -> int:
    cfg = search.SearchConfig(seed=args.seed, restarts=args.restarts)
    if args.constellation:
        parts = tuple(int(x) for x in args.constellation.split(","))
        spec = search.ConstellationSpec(args.d, parts)
        result = search.constellation_search(spec, cfg)
        _print_table(
            [
                ["constellation", "{" + args.constellation + "}_" + str(args.d)],
                ["parameters", spec.param_count],
                ["successes", f"{result.successes}/{result.attempts}"],
                ["best residual", f"{result.best_residual:.3e}"],
            ]
        )
        if args.out:
            doc = io.document_for_report(
                args.d,
                {
                    "constellation": list(parts),
                    "successes": result.successes,
                    "attempts": result.attempts,
                    "best_residual": result.best_residual,
                    "found": result.found,
                },
                {"seed": args.seed},
            )
            io.save(doc, args.out)
            print(f"wrote {args.out}")
        return 0 if result.found else 1
    if args.pair:
        if args.pair in _PAIR_FAMILIES:
            H = _PAIR_FAMILIES[args.pair]().matrix
        else:
            H = io.matrix_of(io.load(args.pair))
        sol = search.mu_vectors_to_pair(H, cfg)
        bases = search.group_into_bases(sol) if sol.distinct <= search.MAX_CLIQUE_VERTICES else []
        rows = [
            ["vectors (with multiplicity)", sol.count],
            ["distinct vectors", sol.distinct],
            ["bases (cliques)", len(bases)],
            ["max residual", f"{sol.residuals.max():.3e}" if sol.distinct else "n/a"],
            ["continuum detected", sol.continuum_detected],
            ["coverage warning", sol.coverage_warning],
        ]
        _print_table(rows)
        if args.out:
            io.save(io.document_for_solutions(sol, {"seed": args.seed, "restarts": args.restarts, "bases": len(bases)}), args.out)
            print(f"wrote {args.out}")
        return 0 if sol.distinct > 0 else 1
    raise MubforgeError("search requires --pair or --constellation")


def cmd_equiv(args) -> int:
    A = io.matrix_of(io.load(args.infile))
    B = io.matrix_of(io.load(args.infile2))
    ha, hb = catalogue.haagerup_set(A), catalogue.haagerup_set(B)
    da, db = catalogue.defect(A).defect, catalogue.defect(B).defect
    differs = []
    if da != db:
        differs.append(f"defect {da} != {db}")
    if len(ha) != len(hb) or np.abs(ha - hb).max() > 1e-6:
        differs.append(f"Haagerup sets differ ({len(ha)} vs {len(hb)} values)")
    if differs:
        print("INEQUIVALENT: " + "; ".join(differs))
        return 0
    print("inconclusive: invariants agree (defect %d, |Haagerup| = %d)" % (da, len(ha)))
    return 1


def cmd_export(args) -> int:
    doc = io.load(args.infile)
    io.save(doc, args.out)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mubforge", description=__doc__)
    sub = ap.add_subparsers(dest="verb", required=True)

    c = sub.add_parser("construct", help="build a MUB set")
    c.add_argument("--method", required=True)
    c.add_argument("--d", type=int, default=None)
    c.add_argument("--factors", default=None, help="comma list for tensor_product")
    c.add_argument("--params", default=None, help="key=value,key=value")
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_construct)

    g = sub.add_parser("catalogue", help="generate a catalogue Hadamard matrix")
    g.add_argument("--family", required=True)
    g.add_argument("--d", type=int, default=None)
    g.add_argument("--params", default=None)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_catalogue)

    v = sub.add_parser("verify", help="run checks against a saved document")
    v.add_argument("--in", dest="infile", required=True)
    v.add_argument("--checks", default="mu")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="MU vector or constellation search")
    s.add_argument("--pair", default=None, help="fourier6|tao|bjorck|dita0 or a matrix document path")
    s.add_argument("--constellation", default=None, help="comma list, e.g. 5,3,3,1")
    s.add_argument("--d", type=int, default=6)
    s.add_argument("--restarts", type=int, default=200_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_search)

    e = sub.add_parser("equiv", help="invariant-based inequivalence certificate")
    e.add_argument("--in", dest="infile", required=True)
    e.add_argument("--in2", dest="infile2", required=True)
    e.set_defaults(func=cmd_equiv)

    x = sub.add_parser("export", help="round-trip a document")
    x.add_argument("--in", dest="infile", required=True)
    x.add_argument("--out", required=True)
    x.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        return args.func(args)
    except MubforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
