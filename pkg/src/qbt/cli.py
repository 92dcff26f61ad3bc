"""Batch front door: parse input files, dispatch to library operations,
emit deterministic text or JSON reports.

Exit codes: 0 success / all facts match; 1 mismatch or verification
failure; 2 usage or parse error; 3 resource-cap infeasibility.  All
randomness derives from --seed (default 0) and is echoed in the output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import InfeasibleError, ParseError, QbtError
from .fields import QQ_FIELD, field_from_spec
from .groebner import Ideal, eliminate, irrelevant_ideal, saturate, saturate_irrelevant
from .hilbert import (
    binomial_list_to_str,
    dim_degree_genus,
    graded_piece_dim,
    hilbert_poly_to_str,
    hilbert_polynomial,
)
from .numerology import (
    Inadmissible,
    Inconsistent,
    Underdetermined,
    admissible_cases,
    blowup_degree_identities,
    chern_segre_3fold,
    dims_from,
    double_point_solve,
    hilbert_poly_from_constraints,
)
from .orders import order_from_spec
from .ratmap import RationalMap, base_locus, find_inverse, image_ideal, verify_birational_pair
from .rings import PolyRing, poly_from_str, poly_to_str
from .varieties import quadric_rank, secant_ideal, singular_locus_dim
from . import corpus as corpus_mod


def _load_input(path: str, field):
    from .corpus import FixtureContext, parse_fixture

    fx = parse_fixture(Path(path).read_text())
    return FixtureContext(fx, field)


def _emit(args, payload: dict, text_lines):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _the_ideal(ctx, name=None):
    if name:
        ring, forms = ctx.form_lists[name][0].ring, ctx.form_lists[name]
        return Ideal(forms[0].ring, forms)
    if len(ctx.form_lists) == 1:
        forms = next(iter(ctx.form_lists.values()))
        return Ideal(forms[0].ring, forms)
    raise ParseError("input file must declare exactly one ideal/forms block (or pass --name)")


def _the_map(ctx, name=None):
    if name:
        return ctx.maps[name]
    if len(ctx.maps) == 1:
        return next(iter(ctx.maps.values()))
    raise ParseError("input file must declare exactly one map (or pass --name)")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="qbt",
                                 description="exact workbench for quadratic birational "
                                             "transformations into hypersurfaces")
    ap.add_argument("--field", default=None, help="qq or fp:<p> (overrides input default)")
    ap.add_argument("--order", default="grevlex", help="lex | grevlex")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--exact", action="store_true", help="force exact rationals")
    ap.add_argument("--budget", type=int, default=2_000_000, help="S-pair budget")
    ap.add_argument("--json", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    for name, need_file in [
        ("gb", True), ("nf", True), ("elim", True), ("saturate", True),
        ("image", True), ("base-locus", True), ("invert", True),
        ("verify-pair", True), ("hilbert", True), ("quadric-rank", True),
        ("sing-dim", True), ("secant", True),
    ]:
        p = sub.add_parser(name)
        p.add_argument("input", help="input file (ring/ideal/map lines)")
        p.add_argument("--name", default=None, help="which declared object to use")
        if name == "nf":
            p.add_argument("--poly", required=True)
        if name == "elim":
            p.add_argument("--keep", required=True, help="comma-separated variable names")
        if name == "saturate":
            p.add_argument("--by", default=None, help="name of the saturating ideal block")
        if name == "sing-dim":
            p.add_argument("--codim", type=int, required=True)
        if name == "verify-pair":
            p.add_argument("--inverse", required=True, help="forms block name")
            p.add_argument("--image-name", default=None, help="image forms block name")
        if name == "invert":
            p.add_argument("--degree-cap", type=int, default=4)

    p = sub.add_parser("dims")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--delta", type=int, required=True, help="degree of the image hypersurface")

    p = sub.add_parser("classify")
    p.add_argument("--d-max", type=int, required=True)
    p.add_argument("--delta-max", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)

    p = sub.add_parser("hpsolve")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--i", type=int, required=True)

    p = sub.add_parser("chern")
    p.add_argument("--lam", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--chi", type=int, default=None)

    p = sub.add_parser("corpus")
    p.add_argument("action", choices=["list", "run"])
    p.add_argument("items", nargs="*", help="item names (or --all)")
    p.add_argument("--all", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--fixtures", default=None, help="override fixture directory")

    p = sub.add_parser("report")
    p.add_argument("input", help="JSON report file to render as text")

    args = ap.parse_args(argv)

    try:
        return _dispatch(args)
    except (ParseError, FileNotFoundError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except InfeasibleError as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return 3
    except QbtError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def _field_of(args, default_spec="qq"):
    if args.exact:
        return QQ_FIELD
    return field_from_spec(args.field or default_spec)


def _dispatch(args) -> int:
    cmd = args.cmd
    if cmd == "dims":
        got = dims_from(args.n, args.d, args.delta)
        if isinstance(got, Inadmissible):
            _emit(args, {"inadmissible": got.reason}, [f"inadmissible: {got.reason}"])
            return 1
        r, delta, rp = got
        _emit(args, {"r": r, "delta": delta, "r_prime": rp, "seed": args.seed},
              [f"r = {r}, delta = {delta}, r' = {rp}"])
        return 0
    if cmd == "classify":
        profs = admissible_cases(args.d_max, args.delta_max, args.n_max)
        rows = [p.as_dict() for p in profs]
        lines = ["r  n  Delta  d  delta  flags"]
        for p in profs:
            fl = "; ".join(p.flags)
            lines.append(f"{p.r}  {p.n}  {p.Delta}  {p.d}  {p.delta}  {fl}")
        _emit(args, {"profiles": rows, "seed": args.seed}, lines)
        return 0
    if cmd == "hpsolve":
        res = hilbert_poly_from_constraints(args.r, args.n, args.i)
        if isinstance(res, Inconsistent):
            _emit(args, {"result": "inconsistent"}, ["inconsistent"])
            return 1
        if isinstance(res, Underdetermined):
            _emit(args, {"result": "underdetermined", "dim": res.dim},
                  [f"underdetermined (solution space dimension {res.dim})"])
            return 1
        coeffs = res.binomial_coefficients()
        _emit(args, {"binomial_basis": coeffs, "polynomial": hilbert_poly_to_str(res)},
              [binomial_list_to_str(coeffs)])
        return 0
    if cmd == "chern":
        rec = chern_segre_3fold(args.lam, args.g, args.d, args.delta, args.chi)
        payload = {"s1": rec.s1, "s2": rec.s2, "s3": rec.s3,
                   "c1": rec.c1, "c2": rec.c2, "c3": rec.c3}
        lines = [f"s1 = {rec.s1}, s2 = {rec.s2}, s3 = {rec.s3}",
                 f"c1 = {rec.c1}, c2 = {rec.c2}, c3 = {rec.c3}"]
        if rec.K_S_squared is not None:
            payload["K_S^2"] = rec.K_S_squared
            lines.append(f"K_S^2 = {rec.K_S_squared}")
        dd, ddeg = blowup_degree_identities(rec.s1, rec.s2, rec.s3, args.lam)
        payload["d*Delta"] = dd
        payload["deg*Delta"] = ddeg
        lines.append(f"d*Delta = {dd}, deg(map)*Delta = {ddeg}")
        _emit(args, payload, lines)
        return 0
    if cmd == "corpus":
        return _corpus(args)
    if cmd == "report":
        data = json.loads(Path(args.input).read_text())
        for line in _render_report_lines(data):
            print(line)
        return 0 if all(r["ok"] for r in data) else 1

    # file-based commands
    field = _field_of(args)
    ctx = _load_input(args.input, field)
    order = order_from_spec(args.order)

    if cmd == "gb":
        I = _the_ideal(ctx, args.name)
        gb = I.gb(order, budget=args.budget)
        lines = [poly_to_str(g) for g in gb.elements]
        _emit(args, {"groebner_basis": lines, "order": repr(order)}, lines)
        return 0
    if cmd == "nf":
        I = _the_ideal(ctx, args.name)
        ring = I.ring
        from .groebner import normal_form

        f = poly_from_str(ring, args.poly)
        r = normal_form(f, I.gb(order, budget=args.budget))
        _emit(args, {"normal_form": poly_to_str(r)}, [poly_to_str(r)])
        return 0
    if cmd == "elim":
        I = _the_ideal(ctx, args.name)
        keep_names = [s.strip() for s in args.keep.split(",")]
        keep = [I.ring._index[nm] for nm in keep_names]
        E = eliminate(I, keep, budget=args.budget)
        lines = [poly_to_str(g) for g in E.gens]
        _emit(args, {"elimination": lines}, lines)
        return 0
    if cmd == "saturate":
        I = _the_ideal(ctx, None if args.by else args.name)
        if args.by:
            forms = ctx.form_lists[args.by]
            S = saturate(I, Ideal(I.ring, forms), budget=args.budget)
        else:
            S = saturate_irrelevant(I, budget=args.budget, seed=args.seed)
        lines = [poly_to_str(g) for g in S.gens]
        _emit(args, {"saturation": lines}, lines)
        return 0
    if cmd == "image":
        phi = _the_map(ctx, args.name)
        img = image_ideal(phi, budget=args.budget, seed=args.seed)
        lines = [poly_to_str(g) for g in img.gens]
        _emit(args, {"image_ideal": lines}, lines)
        return 0
    if cmd == "base-locus":
        phi = _the_map(ctx, args.name)
        B = base_locus(phi, budget=args.budget, seed=args.seed)
        lines = [poly_to_str(g) for g in B.gens]
        h0 = graded_piece_dim(B, phi.degree)
        _emit(args, {"base_locus": lines, "h0_in_map_degree": h0},
              lines + [f"# h0(I({phi.degree})) = {h0}"])
        return 0
    if cmd == "invert":
        phi = _the_map(ctx, args.name)
        img = image_ideal(phi, budget=args.budget, seed=args.seed)
        cert = find_inverse(phi, img, degree_cap=args.degree_cap, budget=args.budget)
        lines = [poly_to_str(g) for g in cert.inverse]
        _emit(args, {"inverse": lines, "types": list(cert.types)},
              lines + [f"# type {cert.types}"])
        return 0
    if cmd == "verify-pair":
        phi = _the_map(ctx, args.name)
        G = ctx.form_lists[args.inverse]
        if args.image_name:
            I_img = Ideal(phi.target, ctx.form_lists[args.image_name])
        else:
            I_img = image_ideal(phi, budget=args.budget, seed=args.seed)
        try:
            cert = verify_birational_pair(phi, G, I_img)
        except ValueError as e:
            _emit(args, {"verified": False, "reason": str(e)}, [f"FAIL: {e}"])
            return 1
        _emit(args, {"verified": True, "types": list(cert.types)},
              [f"verified: type {cert.types}"])
        return 0
    if cmd == "hilbert":
        I = _the_ideal(ctx, args.name)
        P = hilbert_polynomial(I)
        payload = {"hilbert_polynomial": hilbert_poly_to_str(P)}
        lines = [hilbert_poly_to_str(P)]
        if not P.is_zero():
            payload["binomial_basis"] = P.binomial_coefficients()
            r, lam, g = dim_degree_genus(I)
            payload.update({"dim": r, "degree": lam, "sectional_genus": g})
            lines.append(binomial_list_to_str(P.binomial_coefficients()))
            lines.append(f"dim = {r}, degree = {lam}, sectional genus = {g} "
                         f"(arithmetic, difference method)")
        _emit(args, payload, lines)
        return 0
    if cmd == "quadric-rank":
        I = _the_ideal(ctx, args.name)
        r = quadric_rank(I.gens[0])
        _emit(args, {"rank": r}, [str(r)])
        return 0
    if cmd == "sing-dim":
        I = _the_ideal(ctx, args.name)
        d = singular_locus_dim(I, codim=args.codim, budget=args.budget)
        _emit(args, {"singular_locus_dim": d}, [str(d)])
        return 0
    if cmd == "secant":
        I = _the_ideal(ctx, args.name)
        S = secant_ideal(I, budget=args.budget, seed=args.seed)
        lines = [poly_to_str(g) for g in S.gens] or ["0  # secant fills the ambient space"]
        _emit(args, {"secant_ideal": [poly_to_str(g) for g in S.gens]}, lines)
        return 0
    raise ParseError(f"unknown command {cmd!r}")


def _corpus(args) -> int:
    if args.action == "list":
        items = corpus_mod.list_items(args.fixtures)
        if args.json:
            print(json.dumps({"items": items}, indent=2))
        else:
            for nm in items:
                print(nm)
        return 0
    names = corpus_mod.list_items(args.fixtures) if args.all else args.items
    if not names:
        print("error: no items named (use --all)", file=sys.stderr)
        return 2
    field = QQ_FIELD if args.exact else (field_from_spec(args.field) if args.field else None)
    reports = []
    if args.jobs > 1:
        import multiprocessing as mp

        with mp.Pool(args.jobs) as pool:
            results = pool.starmap(
                _run_one, [(nm, args.field, args.seed, args.budget, args.exact,
                            args.fixtures) for nm in names])
        reports = sorted(results, key=lambda r: r["item"])
    else:
        for nm in names:
            reports.append(_run_one(nm, args.field, args.seed, args.budget, args.exact,
                                    args.fixtures))
    ok = all(r["ok"] for r in reports)
    if args.json:
        print(json.dumps(reports, indent=2, sort_keys=True))
    else:
        for line in _render_report_lines(reports):
            print(line)
    return 0 if ok else 1


def _run_one(name, field_spec, seed, budget, exact, fixtures):
    field = None
    if exact:
        field = QQ_FIELD
    elif field_spec:
        field = field_from_spec(field_spec)
    rep = corpus_mod.run_item(name, field=field, seed=seed, budget=budget,
                              exact=exact, override_dir=fixtures)
    return rep.as_dict()


def _render_report_lines(reports):
    lines = []
    width = max((len(r["item"]) for r in reports), default=10)
    for r in reports:
        status = "ok" if r["ok"] else "FAIL"
        lines.append(f"{r['item']:<{width}}  {status:<4} field={r['field']} "
                     f"seed={r['seed']} {r['seconds']}s")
        for f in r["facts"]:
            mark = {"match": "+", "probabilistic-match": "~",
                    "skipped": "s", "mismatch": "X"}[f["status"]]
            extra = f"  [expected {f['expected']}]" if f["status"] == "mismatch" else ""
            note = f"  ({f['note']})" if f.get("note") else ""
            lines.append(f"  {mark} {f['key']} = {f['got'] or f['expected']}{extra}{note}")
    n_ok = sum(1 for r in reports if r["ok"])
    lines.append(f"{n_ok}/{len(reports)} items ok")
    return lines


if __name__ == "__main__":
    sys.exit(main())
