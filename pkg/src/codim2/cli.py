"""Command-line entry point: deterministic, scriptable, file-based.

Verbs: gb, nf, quotient, saturate, hilbert, resolve, betti, cohomology,
make-module, construct, link, build-z, invariants, catalog-audit,
smooth.  A single --seed feeds named substreams, so identical
invocations produce identical bytes.  Exit codes: 0 success, 2
genericity retries exhausted, 1 hard errors.
"""

import argparse
import json
import os
import sys

from .graded import GradedIdeal
from .groebner import dim_codim, hilbert_data, ideal_gb, ideal_quotient, normal_form, saturate
from .invariants import (
    InvariantError,
    audit_summary,
    catalog_audit,
    segre_pencil_intersections,
    surface_K2,
    threefold_K_products,
)
from .kernel import AmbientSpace, GradedFreeModule, PolyMatrix, PrimeField, parse_poly
from .modfactory import GenericityError, generic_module, four_lines_module
from .resolutions import cohomology_table, resolve_quotient, scheme_invariants


def read_ideal_file(path):
    """Parse the ideal interchange format: a ring header line
    `ring: p=<char> n=<dim>` followed by one generator per line."""
    space = None
    gens = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("ring:"):
                fields = dict(tok.split("=") for tok in line[5:].split())
                space = AmbientSpace(int(fields["n"]), PrimeField(int(fields["p"])))
            else:
                if space is None:
                    raise ValueError("%s: ring header must precede generators" % path)
                gens.append(parse_poly(space, line))
    if space is None:
        raise ValueError("%s: missing ring header" % path)
    return space, gens


def write_ideal_text(space, gens):
    lines = ["ring: p=%d n=%d" % (space.p, space.n)]
    for g in gens:
        lines.append(str(g))
    return "\n".join(lines) + "\n"


def emit(args, payload, text):
    if args.format == "json":
        out = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        out = text if text.endswith("\n") else text + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _space(args, default_n=None):
    n = args.ambient if args.ambient is not None else default_n
    if n is None:
        raise ValueError("this verb needs --ambient n")
    return AmbientSpace(n, PrimeField(args.char))


def cmd_gb(args):
    space, gens = read_ideal_file(args.ideal)
    gb = ideal_gb(space, gens, degree_cap=args.degree_cap)
    polys = gb.polys()
    payload = {"ring": {"p": space.p, "n": space.n}, "gens": [str(f) for f in polys]}
    emit(args, payload, write_ideal_text(space, polys))


def cmd_nf(args):
    space, gens = read_ideal_file(args.ideal)
    f = parse_poly(space, args.poly)
    gb = ideal_gb(space, gens)
    r = normal_form(space, f, gb)
    emit(args, {"normal_form": str(r)}, str(r))


def cmd_quotient(args):
    space, gens = read_ideal_file(args.ideal)
    _, by = read_ideal_file(args.by)
    out = ideal_quotient(space, gens, by)
    payload = {"ring": {"p": space.p, "n": space.n}, "gens": [str(f) for f in out]}
    emit(args, payload, write_ideal_text(space, out))


def cmd_saturate(args):
    space, gens = read_ideal_file(args.ideal)
    out = saturate(space, gens, seed=args.seed)
    payload = {"ring": {"p": space.p, "n": space.n}, "gens": [str(f) for f in out]}
    emit(args, payload, write_ideal_text(space, out))


def cmd_hilbert(args):
    space, gens = read_ideal_file(args.ideal)
    hd = hilbert_data(space, gens)
    pd, codim = dim_codim(space, gens)
    payload = {
        "hf": hd.hf_window(0, max(6, max(hd.numerator, default=0) + 2)),
        "hp": [str(c) for c in hd.hp_coeffs()],
        "dim": hd.proj_dim,
        "codim": codim,
        "degree": hd.degree,
    }
    emit(args, payload, str(hd))


def _betti_payload(res):
    return {"betti": res.betti().to_records()}


def cmd_resolve(args):
    space, gens = read_ideal_file(args.ideal)
    res = resolve_quotient(space, gens)
    res.audit_compose_zero()
    res.audit_minimal()
    inv = scheme_invariants(space, res.hilbert_polynomial())
    payload = _betti_payload(res)
    payload["modules"] = [str(F) for F in res.modules]
    payload["invariants"] = inv
    text = "%s\n%s\n%s" % (res, res.betti(), inv)
    emit(args, payload, text)


def cmd_betti(args):
    space, gens = read_ideal_file(args.ideal)
    res = resolve_quotient(space, gens)
    emit(args, _betti_payload(res), str(res.betti()))


def cmd_cohomology(args):
    space, gens = read_ideal_file(args.ideal)
    ideal = GradedIdeal(space, gens)
    res = resolve_quotient(space, gens)
    lo, hi = (int(t) for t in args.window.split(","))
    table = cohomology_table(ideal, res, window=range(lo, hi + 1))
    emit(args, {"cohomology": table.to_records()}, str(table))


def cmd_make_module(args):
    hf = tuple(int(t) for t in args.hf.split(","))
    space = _space(args, default_n=5)
    pres, res = generic_module(space, hf, seed=args.seed)
    payload = _betti_payload(res)
    payload["presentation"] = {
        "target": pres.target.twists,
        "source": pres.source.twists,
        "rows": [[str(e) for e in row] for row in pres.entries],
    }
    text = "%s\n%s" % (pres, res.betti())
    emit(args, payload, text)


def cmd_construct(args):
    from . import determinantal as det

    recipes = {
        "bordiga": (det.bordiga, 4),
        "ex1.6": (det.example_1_6, 5),
        "ex4.9": (det.example_4_9, 4),
        "ex6.1": (det.example_6_1, 5),
    }
    if args.from_map:
        space, phi = read_map_file(args.from_map)
        from .determinantal import BundleMap, BundleRep, LineBundle, construct_variety

        F = BundleRep(space, [LineBundle(a) for a in phi.source.twists])
        G = BundleRep(space, [LineBundle(a) for a in phi.target.twists])
        out = construct_variety(BundleMap(F, G, phi))
    else:
        fn, n = recipes[args.recipe]
        space = _space(args, default_n=n)
        if space.n != n:
            raise ValueError("recipe %s needs ambient P^%d" % (args.recipe, n))
        out = fn(space, seed=args.seed)
    payload = {
        "ring": {"p": space.p, "n": space.n},
        "gens": [str(g) for g in out.ideal_gens],
        "twist": out.twist_m,
        "invariants": out.invariants,
        "betti": out.betti().to_records(),
    }
    text = "%s\n# twist m = %d\n# invariants: %s\n%s" % (
        write_ideal_text(space, out.ideal_gens).rstrip(),
        out.twist_m,
        out.invariants,
        out.betti(),
    )
    emit(args, payload, text)


def read_map_file(path):
    """Map file: ring header, `source:`/`target:` twist lists, then
    rows of semicolon-separated entries."""
    space = None
    source = target = None
    rows = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("ring:"):
                fields = dict(tok.split("=") for tok in line[5:].split())
                space = AmbientSpace(int(fields["n"]), PrimeField(int(fields["p"])))
            elif line.startswith("source:"):
                source = [int(t) for t in line[7:].replace(",", " ").split()]
            elif line.startswith("target:"):
                target = [int(t) for t in line[7:].replace(",", " ").split()]
            else:
                rows.append([parse_poly(space, tok) for tok in line.split(";")])
    src = GradedFreeModule(space, source)
    tgt = GradedFreeModule(space, target)
    return space, PolyMatrix(src, tgt, rows)


def cmd_link(args):
    from .liaison import LinkSpec, link

    space, gens = read_ideal_file(args.ideal)
    r, s = (int(t) for t in args.degrees.split(","))
    spec = LinkSpec(gens, r, s, seed=args.seed)
    out = link(spec, space)
    payload = {
        "ring": {"p": space.p, "n": space.n},
        "gens": [str(g) for g in out.ideal_gens],
        "invariants": out.invariants,
        "empty": out.empty,
        "report": {
            k: v for k, v in out.report.items() if k != "empty"
        },
    }
    if out.resolution is not None:
        payload["betti"] = out.betti().to_records()
    lines = [write_ideal_text(space, out.ideal_gens).rstrip()]
    lines.append("# invariants: %s" % out.invariants)
    for key in ("degree_relation", "genus_relation"):
        if key in out.report:
            got, want, ok = out.report[key]
            lines.append("# %s: %s = %s %s" % (key, got, want, "PASS" if ok else "FAIL"))
    if out.resolution is not None:
        lines.append(str(out.betti()))
    emit(args, payload, "\n".join(lines))


def cmd_build_z(args):
    from .liaison import build_Z_config

    space = _space(args, default_n=5)
    gens, maps, lines = build_Z_config(space, seed=args.seed)
    ideal = GradedIdeal(space, gens)
    ladder = [ideal.dim(q) for q in (3, 4, 5)]
    payload = {
        "ring": {"p": space.p, "n": space.n},
        "gens": [str(g) for g in gens],
        "h0_ladder": ladder,
        "lines": lines,
    }
    text = "%s\n# h0 J_Z(3..5) = %s" % (
        write_ideal_text(space, gens).rstrip(),
        ladder,
    )
    emit(args, payload, text)


def cmd_invariants(args):
    if args.surface:
        d, pi, chi = (int(t) for t in args.surface.split(","))
        hk, k2 = surface_K2(d, pi, chi)
        payload = {"HK": hk, "K2": k2}
        text = "HK=%d K2=%d" % (hk, k2)
    elif args.threefold:
        d, pi, chix, chis = (int(t) for t in args.threefold.split(","))
        h2k, hk2, k3, plur = threefold_K_products(d, pi, chix, chis)
        payload = {"H2K": h2k, "HK2": hk2, "K3": k3, "pluridegrees": plur}
        text = "H2K=%d HK2=%d K3=%d" % (h2k, hk2, k3)
    elif args.segre_pencils:
        table = segre_pencil_intersections()
        payload = table
        text = " ".join("%s=%d" % (k, v) for k, v in table.items())
    else:
        raise ValueError("need --surface d,pi,chi or --threefold d,pi,chiX,chiS")
    emit(args, payload, text)


def cmd_catalog_audit(args):
    checks = catalog_audit()
    summary = audit_summary(checks)
    lines = []
    for c in checks:
        name = c.get("edge", c.get("check", ""))
        lines.append("%-8s %-40s %s" % (c["row"], name, c["status"]))
    lines.append("summary: %s" % summary)
    emit(args, {"checks": checks, "summary": summary}, "\n".join(lines))


def cmd_smooth(args):
    from .smoothness import check_smooth

    space, gens = read_ideal_file(args.ideal)
    method = "full" if args.full else "auto"
    rep = check_smooth(space, gens, method=method, seed=args.seed)
    payload = {"verdict": rep.verdict, "method": rep.method, "detail": rep.detail}
    emit(args, payload, str(rep))


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--char", type=int, default=int(os.environ.get("CODIM2_CHAR", 31991))
    )
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--output")
    common.add_argument("-n", "--ambient", type=int, default=None)
    ap = argparse.ArgumentParser(
        prog="codim2",
        description="constructions of codimension-2 subvarieties via syzygies",
        parents=[common],
    )
    sub = ap.add_subparsers(dest="verb", required=True)

    def add_parser(name):
        return sub.add_parser(name, parents=[common])

    p = add_parser("gb");  p.add_argument("--ideal", required=True)
    p.add_argument("--degree-cap", type=int, default=None)
    p.set_defaults(fn=cmd_gb)
    p = add_parser("nf");  p.add_argument("--ideal", required=True)
    p.add_argument("--poly", required=True); p.set_defaults(fn=cmd_nf)
    p = add_parser("quotient"); p.add_argument("--ideal", required=True)
    p.add_argument("--by", required=True); p.set_defaults(fn=cmd_quotient)
    p = add_parser("saturate"); p.add_argument("--ideal", required=True)
    p.set_defaults(fn=cmd_saturate)
    p = add_parser("hilbert"); p.add_argument("--ideal", required=True)
    p.set_defaults(fn=cmd_hilbert)
    p = add_parser("resolve"); p.add_argument("--ideal", required=True)
    p.set_defaults(fn=cmd_resolve)
    p = add_parser("betti"); p.add_argument("--ideal", required=True)
    p.set_defaults(fn=cmd_betti)
    p = add_parser("cohomology"); p.add_argument("--ideal", required=True)
    p.add_argument("--window", default="-2,5"); p.set_defaults(fn=cmd_cohomology)
    p = add_parser("make-module"); p.add_argument("--hf", required=True)
    p.set_defaults(fn=cmd_make_module)
    p = add_parser("construct")
    p.add_argument("--recipe", choices=("bordiga", "ex1.6", "ex4.9", "ex6.1"))
    p.add_argument("--from-map")
    p.set_defaults(fn=cmd_construct)
    p = add_parser("link"); p.add_argument("--ideal", required=True)
    p.add_argument("--degrees", required=True); p.set_defaults(fn=cmd_link)
    p = add_parser("build-z"); p.set_defaults(fn=cmd_build_z)
    p = add_parser("invariants")
    p.add_argument("--surface"); p.add_argument("--threefold")
    p.add_argument("--segre-pencils", action="store_true")
    p.set_defaults(fn=cmd_invariants)
    p = add_parser("catalog-audit"); p.set_defaults(fn=cmd_catalog_audit)
    p = add_parser("smooth"); p.add_argument("--ideal", required=True)
    p.add_argument("--full", action="store_true"); p.set_defaults(fn=cmd_smooth)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        args.fn(args)
        return 0
    except GenericityError as exc:
        sys.stderr.write("genericity retries exhausted: %s\n" % exc)
        return 2
    except (ValueError, InvariantError, ArithmeticError, OSError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
