"""Command-line harness: generate corpus files and run named checks.

    stresslab gen boundary_crosspolytope 3 -o octa.facets
    stresslab check lefschetz octa.facets --k 1 --seed 7 --json out.json

Exit status is 0 when every check passes, 1 when any fails and 2 on bad
input.  Reports are deterministic in (command, seed, field); wall-clock
timings are only included with --timings.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time
from fractions import Fraction
from math import comb
from pathlib import Path

import numpy as np

from . import __version__
from .artinian import build
from .complex import (GENERATORS, SimplicialComplex, boundary_crosspolytope, generate, moebius_torus_7,
                      icosahedron, parse_facets)
from .exactla import QQ
from .inequalities import (NOT_APPLICABLE, crossing_bound, g_vector, gks_check, is_m_sequence,
                           kuhnel_check)
from .lefschetz import (biased_pd_check, hodge_riemann_form, kappa_monotonicity_check, kazhdan_example,
                        lefschetz_check, perturbation_check, poincare_pairing, random_linear,
                        random_transversal_pair)
from .realization import (TAG_ELEMENT, TAG_SCALAR, Realization, circle_example, random_realization,
                          realization_from_json, resolve_field, rng_for,
                          special_realization_bad_reduction)
from .rigidity import lefschetz_rigidity_check, parse_edges
from .stress import cone_lemma_check, partition_of_unity_check

SCHEMA = "stresslab/1"
CHECKS = ("pd", "lefschetz", "hall-laman", "biased-pd", "kappa", "gks", "kuhnel", "crossing", "laman",
          "socle", "partition", "cone", "m-sequence", "kazhdan", "perturbation")


class InputError(Exception):
    pass


# ------------------------------------------------------------ inputs

def _builtin(name: str, field):
    """Named inputs that come with fixed coordinates or a canonical subcomplex."""
    if name == "bad_reduction":
        c, r, tet = special_realization_bad_reduction(field)
        return c, r, {"intersection": c.intersection(tet)}
    if name == "circle":
        c, r = circle_example(field)
        return c, r, {}
    if name == "torus":
        return moebius_torus_7(), None, {}
    if name in ("icosahedron", "octahedron"):
        return (icosahedron() if name == "icosahedron" else boundary_crosspolytope(3)), None, {}
    return None


def load_complex(spec: str, field):
    """Complex, optional fixed realization, named subcomplexes."""
    got = _builtin(spec, field)
    if got is not None:
        return got
    path = Path(spec)
    if not path.exists():
        raise InputError(f"no such input: {spec}")
    try:
        return parse_facets(path.read_text()), None, {}
    except (ValueError, KeyError, json.JSONDecodeError) as e:
        raise InputError(f"malformed facet file {spec}: {e}") from None


def _labels(c: SimplicialComplex, text: str) -> list:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        v = int(tok) if tok.lstrip("-").isdigit() else tok
        if v not in c.index:
            raise InputError(f"unknown vertex {tok!r}")
        out.append(v)
    return out


def parse_subcomplex(c: SimplicialComplex, desc: str, named: dict,
                     r: Realization | None) -> SimplicialComplex:
    """Descriptors: a named one, star:V, link:V, deletion:V, vertices:a,b,..,
    antipodal, adjacent, or file:PATH."""
    if desc in named:
        return named[desc]
    kind, _, arg = desc.partition(":")
    if kind == "star":
        return c.star({_labels(c, arg)[0]})
    if kind == "link":
        return c.link({_labels(c, arg)[0]})
    if kind == "deletion":
        return c.deletion(set(_labels(c, arg)))
    if kind == "vertices":
        return c.induced(_labels(c, arg))
    if kind == "file":
        try:
            sub = parse_facets(Path(arg).read_text())
        except OSError as e:
            raise InputError(str(e)) from None
        if not sub.is_subcomplex_of(c):
            raise InputError("subcomplex file is not contained in the complex")
        return sub
    if kind == "antipodal":
        v0 = c.vertices[0]
        if r is not None:
            col = r.column(v0)
            opp = [v for v in c.vertices if np.array_equal(r.field.neg(col), r.column(v))]
            if opp:
                return SimplicialComplex([{v0}, {opp[0]}])
        return SimplicialComplex([{v0}, {c.vertices[c.n // 2]}])
    if kind == "adjacent":
        v0 = c.vertices[0]
        nb = sorted(c.link({v0}).vertices, key=str)
        if not nb:
            raise InputError("first vertex has no neighbour")
        return SimplicialComplex([{v0}, {nb[0]}])
    raise InputError(f"unknown subcomplex descriptor {desc!r}")


def _digest(spec: str) -> str | None:
    p = Path(spec)
    if p.is_file():
        return hashlib.sha256(p.read_bytes()).hexdigest()
    return None


# ------------------------------------------------------------ checks

def _realization(args, c, fixed, fld) -> Realization:
    if args.coords:
        try:
            return realization_from_json(c, Path(args.coords).read_text(), fld)
        except (OSError, ValueError, KeyError) as e:
            raise InputError(f"bad coordinate file: {e}") from None
    if fixed is not None:
        return fixed
    return random_realization(c, c.dim + 1, args.seed, field=fld)


def _need_input(args):
    if not args.input:
        raise InputError(f"check {args.check} needs an input")
    return args.input


def _field(args):
    try:
        return resolve_field(args.field, args.seed)
    except ValueError as e:
        raise InputError(str(e)) from None


def _item(name, passed, details) -> dict:
    return {"item": name, "passed": bool(passed), "details": details}


def _degrees(args, d: int, upto: int) -> list[int]:
    return [args.k] if args.k is not None else list(range(0, upto + 1))


def run_pd(args):
    fld = _field(args)
    c, fixed, _ = load_complex(_need_input(args), fld)
    r = _realization(args, c, fixed, fld)
    alg = build(c, r, check=False)
    quotient = not c.is_homology_sphere()
    out = []
    for k in _degrees(args, alg.d, alg.d):
        rep = poincare_pairing(alg, k, quotient=quotient)
        out.append(_item(f"k={k}", rep.nondegenerate, {k_: v for k_, v in rep.to_dict().items() if k_ != "gram"}))
    return out


def run_lefschetz(args):
    fld = _field(args)
    c, fixed, _ = load_complex(_need_input(args), fld)
    d = c.dim + 1
    realization = None
    if args.coords or fixed is not None:
        realization = _realization(args, c, fixed, fld)
    out = []
    for k in _degrees(args, d, d // 2):
        cert = lefschetz_check(c, k, trials=args.trials, seed=args.seed, field=fld,
                               realization=realization, recertify=args.recertify)
        out.append(_item(f"k={k}", cert.passed, cert.to_dict()))
    return out


def run_hall_laman(args):
    fld = _field(args)
    c, fixed, named = load_complex(_need_input(args), fld)
    k = 1 if args.k is None else args.k
    subs = ([(args.subcomplex, parse_subcomplex(c, args.subcomplex, named, fixed))] if args.subcomplex
            else [(f"star:{v}", c.star({v})) for v in c.vertices])
    quotient = not c.is_homology_sphere()
    out = []
    for name, sub in subs:
        for kind in ("ideal", "annihilator"):
            rep = None
            for t in range(args.trials):
                r = fixed if fixed is not None else random_realization(c, c.dim + 1, args.seed, field=fld, trial=t)
                alg = build(c, r, check=False)
                ell = random_linear(fld, c.n, rng_for(args.seed, TAG_ELEMENT, t))
                rep = hodge_riemann_form(alg, ell, k, (kind, sub), quotient=quotient)
                rep.trial = t
                if rep.nondegenerate:
                    break
            d = rep.to_dict()
            d.pop("gram")
            out.append(_item(f"{kind}@{name}", rep.nondegenerate, d))
    return out


def _sub_required(args, c, named, r):
    if not args.subcomplex:
        raise InputError(f"check {args.check} needs --subcomplex")
    return parse_subcomplex(c, args.subcomplex, named, r)


def run_biased_pd(args):
    fld = _field(args)
    c, fixed, named = load_complex(_need_input(args), fld)
    r = _realization(args, c, fixed, fld) if (args.coords or fixed is not None) else None
    sub = _sub_required(args, c, named, r)
    k = 1 if args.k is None else args.k
    rep = biased_pd_check(c, sub, k, trials=args.trials, seed=args.seed, field=fld, realization=r)
    d = rep.to_dict()
    d.pop("gram")
    return [_item(args.subcomplex, rep.nondegenerate, d)]


def run_kappa(args):
    fld = _field(args)
    c, fixed, named = load_complex(_need_input(args), fld)
    r = _realization(args, c, fixed, fld)
    sub = _sub_required(args, c, named, r)
    k = 1 if args.k is None else args.k
    res = kappa_monotonicity_check(build(c, r, check=False), sub, k, rng=rng_for(args.seed, TAG_ELEMENT))
    return [_item(args.subcomplex, res.passed, res.details)]


def run_gks(args):
    fld = _field(args)
    c, fixed, named = load_complex(_need_input(args), fld)
    if args.subcomplex:
        sub = parse_subcomplex(c, args.subcomplex, named, fixed)
        d = c.dim // 2 if args.k is None else args.k
        rep = gks_check(sub.skeleton(d), d, ambient=c, realization=fixed, seed=args.seed, field=fld)
        ok = rep.passed and rep.details.get("agrees", True)
    else:
        d = c.dim if args.k is None else args.k
        rep = gks_check(c.skeleton(d), d)
        ok = rep.passed
    return [_item("gks", ok, {**rep.to_row(), **rep.details})]


def run_kuhnel(args):
    c, _, _ = load_complex(_need_input(args), QQ)
    return [_item(f"j={r.details['j']}", r.passed, r.to_row() | {"b": r.details["b"]})
            for r in kuhnel_check(c)]


def run_crossing(args):
    spec = _need_input(args)
    d = 1 if args.k is None else args.k
    if "," in spec and not Path(spec).exists():
        try:
            fd, fd1 = (int(x) for x in spec.split(","))
        except ValueError:
            raise InputError("crossing input must be 'f_d,f_(d-1)' or a facet file") from None
    else:
        c, _, _ = load_complex(spec, QQ)
        fd, fd1 = c.f(d), c.f(d - 1)
    val = crossing_bound(fd, fd1, d)
    return [_item("crossing", True, {"f_d": fd, "f_d1": fd1, "d": d, "bound": str(val),
                                     "applicable": val != NOT_APPLICABLE})]


def run_laman(args):
    spec = _need_input(args)
    try:
        g = parse_edges(Path(spec).read_text())
    except OSError as e:
        raise InputError(str(e)) from None
    except ValueError as e:
        raise InputError(f"malformed edge list: {e}") from None
    if g.e != 2 * g.n - 3:
        raise InputError(f"graph has {g.e} edges, need 2n - 3 = {2 * g.n - 3}")
    b = lefschetz_rigidity_check(g, seed=args.seed, trials=args.trials, field=_field(args))
    return [_item("laman", b.consistent, b.to_dict())]


def run_socle(args):
    fld = _field(args)
    c, fixed, _ = load_complex(_need_input(args), fld)
    r = _realization(args, c, fixed, fld)
    alg = build(c, r, check=False)
    betti = c.betti(QQ)
    q = alg.gorenstein_quotient()
    out = []
    for k in _degrees(args, alg.d, alg.d - 1):
        soc = alg.interior_socle(k).dim if k < alg.d else 0
        want = comb(alg.d, k) * betti[k] if k >= 1 else 0  # reduced b_{k-1}
        out.append(_item(f"k={k}", soc == want, {"dim_A": alg.dim(k), "socle": soc, "expected": want,
                                                 "dim_B": q.dim(k)}))
    return out


def run_partition(args):
    fld = _field(args)
    c, fixed, _ = load_complex(_need_input(args), fld)
    r = _realization(args, c, fixed, fld)
    quotient = not c.is_homology_sphere()
    ks = [args.k] if args.k is not None else list(range(1, c.dim + 1))
    return [(lambda res: _item(f"k={k}", res.passed, res.details))(partition_of_unity_check(c, r, k, quotient))
            for k in ks]


def run_cone(args):
    fld = _field(args)
    c, fixed, _ = load_complex(_need_input(args), fld)
    r = _realization(args, c, fixed, fld)
    ks = [args.k] if args.k is not None else list(range(0, c.dim + 1))
    out = []
    for v in c.vertices:
        for k in ks:
            res = cone_lemma_check(c, r, v, k)
            out.append(_item(f"v={v},k={k}", res.passed, res.details))
    return out


def run_m_sequence(args):
    spec = _need_input(args)
    if not Path(spec).exists() and _builtin(spec, QQ) is None:
        try:
            g = [int(x) for x in spec.split(",")]
        except ValueError:
            raise InputError("m-sequence input must be comma-separated integers or a complex") from None
        return [_item("m-sequence", is_m_sequence(g), {"g": g})]
    fld = _field(args)
    c, _, _ = load_complex(spec, fld)
    cert = lefschetz_check(c, 1, trials=args.trials, seed=args.seed, field=fld)
    if not cert.passed:
        return [_item("m-sequence", False, {"error": "no Lefschetz witness"})]
    g = list(g_vector(c, cert))
    return [_item("m-sequence", is_m_sequence(g) and min(g) >= 0, {"g": g})]


def run_kazhdan(args):
    rep = kazhdan_example(n=args.n, seed=args.seed)
    return [_item("symmetric", rep.symmetric, {"n": rep.n}),
            _item("isotropic", rep.isotropic, {"n": rep.n}),
            _item("expansion", rep.expands, {"samples": [list(x) for x in rep.expansion]})]


def run_perturbation(args):
    fld = _field(args)
    rng = rng_for(args.seed, TAG_SCALAR)
    out = []
    for i in range(args.count):
        a, b = random_transversal_pair(fld, rng)
        res = perturbation_check(a, b, samples=5, rng=rng)
        out.append(_item(f"pair={i}", res.passed, {k: v for k, v in res.details.items() if k != "samples"}))
    return out


RUNNERS = {
    "pd": run_pd, "lefschetz": run_lefschetz, "hall-laman": run_hall_laman, "biased-pd": run_biased_pd,
    "kappa": run_kappa, "gks": run_gks, "kuhnel": run_kuhnel, "crossing": run_crossing,
    "laman": run_laman, "socle": run_socle, "partition": run_partition, "cone": run_cone,
    "m-sequence": run_m_sequence, "kazhdan": run_kazhdan, "perturbation": run_perturbation,
}


# ------------------------------------------------------------ commands

def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, Fraction):
        return str(x)
    return str(x)


def cmd_check(args) -> int:
    t0 = time.perf_counter()
    items = RUNNERS[args.check](args)
    elapsed = time.perf_counter() - t0
    passed = all(i["passed"] for i in items)
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "command": ["check", args.check] + ([args.input] if args.input else []),
        "options": {"field": args.field, "seed": args.seed, "trials": args.trials, "k": args.k,
                    "subcomplex": args.subcomplex, "coords": args.coords},
        "inputs": {s: _digest(s) for s in (args.input, args.coords) if s},
        "results": items,
        "passed": passed,
    }
    if args.timings:
        report["timings"] = {"wall_seconds": elapsed}
    text = json.dumps(report, sort_keys=True, indent=2, default=_jsonable) + "\n"
    if args.json:
        Path(args.json).write_text(text)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["check", "item", "passed", "details"])
            for i in items:
                w.writerow([args.check, i["item"], i["passed"],
                            json.dumps(i["details"], sort_keys=True, default=_jsonable)])
    for i in items:
        print(f"{args.check} {i['item']}: {'pass' if i['passed'] else 'FAIL'}")
    print(f"{args.check}: {'pass' if passed else 'FAIL'}")
    return 0 if passed else 1


def cmd_gen(args) -> int:
    fld = QQ
    if args.kind in ("bad_reduction", "circle"):
        c, r, *_ = (special_realization_bad_reduction(fld) if args.kind == "bad_reduction"
                    else circle_example(fld))
        outputs = {"facets": c.to_text(), "coords": r.to_json() + "\n"}
    else:
        if args.kind not in GENERATORS:
            raise InputError(f"unknown generator {args.kind!r}; known: {', '.join(sorted(GENERATORS))}")
        try:
            params = [int(p) for p in args.params]
            c = generate(args.kind, *params)
        except (TypeError, ValueError) as e:
            raise InputError(f"bad parameters for {args.kind}: {e}") from None
        outputs = {"facets": c.to_text()}
    if args.out is None:
        sys.stdout.write(outputs["facets"])
        if "coords" in outputs:
            sys.stdout.write(outputs["coords"])
        return 0
    try:
        Path(args.out).write_text(outputs["facets"])
        if "coords" in outputs:
            Path(str(args.out) + ".coords.json").write_text(outputs["coords"])
    except OSError as e:
        raise InputError(f"cannot write {args.out}: {e}") from None
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stresslab", description="Face-ring Lefschetz and pairing checks.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a facet file for a named complex")
    g.add_argument("kind")
    g.add_argument("params", nargs="*")
    g.add_argument("-o", "--out")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("check", help="run a named check")
    c.add_argument("check", choices=CHECKS)
    c.add_argument("input", nargs="?")
    c.add_argument("--field", default="fp:random", help="q, fp:<prime> or fp:random")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--trials", type=int, default=5)
    c.add_argument("--k", type=int)
    c.add_argument("--n", type=int, default=8, help="ambient dimension for kazhdan")
    c.add_argument("--count", type=int, default=20, help="number of random pairs for perturbation")
    c.add_argument("--subcomplex")
    c.add_argument("--coords")
    c.add_argument("--recertify", action="store_true", help="re-run passing prime-field witnesses over Q")
    c.add_argument("--json")
    c.add_argument("--csv")
    c.add_argument("--timings", action="store_true")
    c.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
