"""Batch front door: list indecomposables, hunt for generator sets, apply
the pair functors, and run the verification suite to a certificate file.

Exit codes: 0 success, 1 a check row failed, 2 bad input (unparsable spec
file, unknown module name, violated hypothesis), 3 an enumeration or
search cap was exceeded.
"""

import argparse
import json
import re
import sys
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import checks as ck
from . import cluster as cl
from . import functcat as fc
from . import linalg as la
from . import modcat as mc
from . import morphcat as mo
from .algebra import build_algebra, load_spec
from .errors import (EnumerationCapExceeded, SearchCapExceeded,
                     SpecFileError, TiltbenchError)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_CAP = 3

FUNCTORS = ("upsilon", "phi", "psi", "theta", "psi_prime", "sigma", "tau_n")

_MONO_FUNCTORS = ("upsilon", "phi", "psi")
_EPI_FUNCTORS = ("theta", "psi_prime")


class _InputError(Exception):
    """Bad request that is the caller's fault; message goes to stderr."""


@dataclass
class RunConfig:
    """One resolved invocation: spec path, instance selection, caps."""

    algebra: str
    n: int
    generators: str
    p: int
    caps: ck.Caps
    out: str

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be at least 2, got {self.n}")


def _config_from_args(args):
    caps = ck.Caps(max_ind=args.max_ind, max_dim=args.max_dim,
                   mult_cap=args.mult_cap, deep_check=args.deep_check,
                   seed=args.seed)
    return RunConfig(algebra=args.algebra, n=args.n,
                     generators=args.generators, p=args.p, caps=caps,
                     out=args.out)


def _load_algebra(config):
    pres = load_spec(config.algebra, p=config.p)
    return build_algebra(pres)


def _named_indecs(A, caps):
    indecs = mc.all_indecs(A, caps.max_ind, caps.max_dim)
    names, aliases = mc.standard_names(A, indecs)
    return indecs, names, aliases


def _resolve_subcat(A, config):
    """The (algebra, n, add(M)) instance the flags describe."""
    indecs, names, aliases = _named_indecs(A, config.caps)
    sel = config.generators.strip()
    if sel.lower() == "auto":
        hits = cl.search_cluster_tilting(A, config.n,
                                         max_count=config.caps.max_ind,
                                         max_dim=config.caps.max_dim)
        if not hits:
            raise _InputError(
                f"no {config.n}-cluster-tilting subcategory found over "
                f"{A.name}; pass --generators explicitly")
        sub = hits[0]
    else:
        keys = [t for t in re.split(r"[,\s]+", sel) if t]
        if not keys:
            raise _InputError("--generators must name at least one module")
        gens = []
        for key in keys:
            if key not in aliases:
                known = ", ".join(sorted(aliases))
                raise _InputError(
                    f"unknown module name {key!r}; known: {known}")
            gens.append(aliases[key])
        sub = cl.ClusterSubcat(A, config.n, gens, name="M")
    return sub, names, aliases


def _module_display_name(A, names, X):
    """Match X against the named enumeration, falling back to dims."""
    for R in mc.all_indecs(A):
        if id(R) in names and mc.is_isomorphic(X, R) is not None:
            return names[id(R)]
    return f"dim{X.dim}"


def _dim_vector(X):
    return "(" + ",".join(str(d) for d in X.vertex_dims()) + ")"


def _write_json(path, payload):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# indecs


def cmd_indecs(config, args):
    A = _load_algebra(config)
    indecs, names, _ = _named_indecs(A, config.caps)
    labels = ",".join(A.idempotent_labels)
    print(f"{len(indecs)} indecomposable modules over {A.name} "
          f"(p={A.p}, vertices {labels})")
    rows = []
    for X in indecs:
        nm = names[id(X)]
        print(f"  {nm:6s} dim {X.dim:3d}  {_dim_vector(X)}")
        rows.append({"name": nm, "dim": X.dim,
                     "dim_vector": list(map(int, X.vertex_dims()))})
    if config.out:
        _write_json(config.out, {"algebra": A.name, "p": A.p,
                                 "vertices": list(A.idempotent_labels),
                                 "modules": rows})
    return EXIT_OK


# ---------------------------------------------------------------------------
# search


def cmd_search(config, args):
    A = _load_algebra(config)
    hits = cl.search_cluster_tilting(A, config.n,
                                     max_count=config.caps.max_ind,
                                     max_dim=config.caps.max_dim)
    base_si = mc.is_self_injective(A)
    print(f"{len(hits)} {config.n}-cluster-tilting "
          f"subcategor{'y' if len(hits) == 1 else 'ies'} over {A.name}")
    rows = []
    for i, sub in enumerate(hits, 1):
        gens = ck.generator_names(sub)
        nz = sub.is_nZ()
        print(f"  {i}: generators [{', '.join(gens)}]  "
              f"nZ={'yes' if nz else 'no'}  "
              f"self_injective_base={'yes' if base_si else 'no'}")
        rows.append({"generators": gens, "nZ": bool(nz),
                     "self_injective_base": bool(base_si)})
    if config.out:
        _write_json(config.out, {"algebra": A.name, "n": config.n,
                                 "subcategories": rows})
    return EXIT_OK


# ---------------------------------------------------------------------------
# apply


def _combo_map(H, index, p, shape):
    """The index-th nonzero F_p combination of the hom basis, lex order."""
    total = p ** len(H) - 1
    if index >= total:
        raise _InputError(
            f"map index {index} out of range; the hom space has "
            f"{total} nonzero elements (indices 0..{total - 1})")
    f = np.zeros(shape, dtype=np.int64)
    for k, coeffs in enumerate(c for c in product(range(p), repeat=len(H))
                               if any(c)):
        if k == index:
            for c, h in zip(coeffs, H):
                f = (f + c * np.asarray(h, dtype=np.int64)) % p
            return f
    raise AssertionError("unreachable")


def _parse_pair(sub, aliases, text, kind):
    """Read 'X -> Y' (optionally '@ k') into a mono or epi pair."""
    m = re.fullmatch(r"\s*(\w+)\s*->\s*(\w+)\s*(?:@\s*(\d+)\s*)?", text)
    if not m:
        raise _InputError(
            f"cannot parse {text!r}; expected \"X -> Y\" or \"X -> Y @ k\"")
    xkey, ykey, idx = m.group(1), m.group(2), m.group(3)
    for key in (xkey, ykey):
        if key not in aliases:
            raise _InputError(f"unknown module name {key!r}; known: "
                              + ", ".join(sorted(aliases)))
    X, Y = aliases[xkey], aliases[ykey]
    for key, Z in ((xkey, X), (ykey, Y)):
        if not sub.contains(Z):
            raise _InputError(f"{key} is not in add(M)")
    p = sub.algebra.p
    H = mc.hom_basis(X, Y)
    if not H:
        raise _InputError(f"Hom({xkey},{ykey}) = 0; no maps to pick")
    if idx is None and len(H) > 1:
        raise _InputError(
            f"Hom({xkey},{ykey}) is {len(H)}-dimensional; disambiguate "
            f"with \"{xkey} -> {ykey} @ k\", k in 0..{p ** len(H) - 2}")
    f = _combo_map(H, int(idx or 0), p, (X.dim, Y.dim))
    name = f"{xkey} -> {ykey}"
    rank = la.rank(f, p)
    if kind == "mono":
        if rank != X.dim:
            raise _InputError(f"the map {name!r} is not one-to-one; "
                              "this functor takes mono pairs")
        return mo.MonoPair(sub, X, Y, f, name=name)
    if rank != Y.dim:
        raise _InputError(f"the map {name!r} is not onto; "
                          "this functor takes epi pairs")
    return mo.EpiPair(sub, X, Y, f, name=name)


def _functor_catalog(sub, flavor, variance):
    """Named carrier modules to match functor summands against: restricted
    hom functors of every named indecomposable, plus the Ext functors on
    the flavors where those live."""
    A = sub.algebra
    aus = fc.auslander_algebra(sub, flavor)
    indecs, names, _ = _named_indecs(A, ck.Caps())
    hom_word = {"plain": "Hom", "stable": "stHom",
                "costable": "costHom"}[flavor]
    homs, exts = [], []
    for X in indecs:
        lab = names[id(X)]
        E = fc.eval_module(aus, X, variance)
        if E.dim:
            nm = (f"{hom_word}(-,{lab})|M" if variance == "contra"
                  else f"{hom_word}({lab},-)|M")
            homs.append((nm, E))
        if (flavor, variance) in (("stable", "contra"), ("costable", "co")):
            F = fc.ext_functor(sub, sub.n, X, variance)
            if F.dim:
                nm = (f"Ext{sub.n}(-,{lab})|M" if variance == "contra"
                      else f"Ext{sub.n}({lab},-)|M")
                exts.append((nm, F.carrier))
    if variance == "co":
        return exts + homs
    return homs + exts


def _describe_functor(sub, F):
    labels = ck.generator_names(sub)
    dims = F.value_dims()
    values = " ".join(f"{lab}:{d}" for lab, d in zip(labels, dims))
    print(f"{F.name}: values {values}")
    if F.dim == 0:
        print("  the zero functor")
        return
    catalog = _functor_catalog(sub, F.aus.flavor, F.variance)
    parts = []
    for S, _, _ in mc.decompose(F.carrier):
        for nm, C in catalog:
            if mc.is_isomorphic(S, C) is not None:
                parts.append(nm)
                break
        else:
            parts.append(f"<indecomposable of dim {S.dim}>")
    print("  = " + " + ".join(parts))


def cmd_apply(config, args):
    A = _load_algebra(config)
    sub, names, aliases = _resolve_subcat(A, config)
    functor, argument = args.functor, args.argument
    if functor == "tau_n":
        if "->" in argument:
            raise _InputError("tau_n takes a module name, not a map")
        key = argument.strip()
        if key not in aliases:
            raise _InputError(f"unknown module name {key!r}; known: "
                              + ", ".join(sorted(aliases)))
        T = mo.tau_n(sub, aliases[key], deep_check=config.caps.deep_check)
        print(f"tau_{sub.n}({key}) = {_module_display_name(A, names, T)}, "
              f"dim vector {_dim_vector(T)}")
        return EXIT_OK
    if functor == "sigma":
        if "->" in argument:
            x = _parse_pair(sub, aliases, argument, "mono")
            F = mo.psi(x, deep_check=config.caps.deep_check)
        else:
            key = argument.strip()
            if key not in aliases:
                raise _InputError(f"unknown module name {key!r}; known: "
                                  + ", ".join(sorted(aliases)))
            aus = fc.auslander_algebra(sub, "stable")
            F = fc.yoneda(aus, aliases[key], "contra")
            F.name = f"stHom(-,{key})"
        G = mo.sigma(F)
        _describe_functor(sub, G)
        return EXIT_OK
    kind = "mono" if functor in _MONO_FUNCTORS else "epi"
    x = _parse_pair(sub, aliases, argument, kind)
    fn = getattr(mo, functor)
    if functor in ("psi", "psi_prime"):
        F = fn(x, deep_check=config.caps.deep_check)
    else:
        F = fn(x)
    _describe_functor(sub, F)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def cmd_verify(config, args):
    A = _load_algebra(config)
    sub, _, _ = _resolve_subcat(A, config)
    ids = list(args.checks)
    for cid in ids:
        if cid not in ck.CHECK_IDS:
            raise _InputError(f"unknown check id {cid!r}; known: "
                              + ", ".join(ck.CHECK_IDS))
    if ids:
        reports = [ck.run_check(cid, sub, config.caps) for cid in ids]
    else:
        reports = ck.run_all(sub, config.caps)
    cert = ck.certificate(sub, reports, config.caps)
    summary_stream = sys.stdout if config.out else sys.stderr
    rows = [r for r in reports if r.check_id != "summary"]
    for r in rows:
        note = ""
        if r.status == "skipped" and "hypothesis" in r.witnesses:
            note = "  (" + r.witnesses["hypothesis"] + ")"
        if r.status == "fail":
            note = "  " + json.dumps(r.witnesses, default=str)
        print(f"  {r.check_id:18s} {r.status:7s} {r.timing:6.2f}s{note}",
              file=summary_stream)
    tally = {"pass": 0, "fail": 0, "skipped": 0}
    for r in rows:
        tally[r.status] += 1
    print(f"{rows[0].instance}: {tally['pass']} passed, "
          f"{tally['fail']} failed, {tally['skipped']} skipped",
          file=summary_stream)
    if tally["pass"] == tally["fail"] == 0:
        print("warning: every check was skipped; the hypotheses of this "
              "instance support none of them", file=sys.stderr)
    if config.out:
        _write_json(config.out, cert)
        print(f"certificate written to {config.out}", file=summary_stream)
    else:
        sys.stdout.write(json.dumps(cert, indent=2, sort_keys=True) + "\n")
    return EXIT_CHECK_FAILED if tally["fail"] else EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", required=True, metavar="FILE",
                        help="algebra spec file")
    common.add_argument("--n", type=int, default=2,
                        help="length of the Ext-vanishing window (>= 2)")
    common.add_argument("--generators", default="auto",
                        metavar="NAMES|auto",
                        help="comma-separated module names, or 'auto' to "
                             "search and take the first hit")
    common.add_argument("--p", type=int, default=None,
                        help="field characteristic; overrides the spec file")
    common.add_argument("--max-dim", type=int, default=64, dest="max_dim",
                        help="dimension cap for enumerations")
    common.add_argument("--max-ind", type=int, default=512, dest="max_ind",
                        help="cap on the number of indecomposables")
    common.add_argument("--mult-cap", type=int, default=2, dest="mult_cap",
                        help="multiplicity cap for pair sweeps")
    common.add_argument("--deep-check", action="store_true",
                        dest="deep_check",
                        help="recompute via non-minimal routes and compare")
    common.add_argument("--out", default=None, metavar="FILE",
                        help="write the JSON result here")
    common.add_argument("--seed", type=int, default=0,
                        help="seed recorded in certificates")

    top = argparse.ArgumentParser(
        prog="tiltbench",
        description="Exact workbench for cluster-tilting subcategories "
                    "and their functor categories over F_p.")
    subs = top.add_subparsers(dest="command", required=True)
    pi = subs.add_parser("indecs", parents=[common],
                         help="list the indecomposable modules")
    pi.set_defaults(handler=cmd_indecs)
    ps = subs.add_parser("search", parents=[common],
                         help="find n-cluster-tilting generator sets")
    ps.set_defaults(handler=cmd_search)
    pa = subs.add_parser("apply", parents=[common],
                         help="apply a functor to a map or module")
    pa.add_argument("functor", choices=FUNCTORS)
    pa.add_argument("argument", metavar="ARG",
                    help="\"X -> Y\" (optionally \"@ k\") or a module name")
    pa.set_defaults(handler=cmd_apply)
    pv = subs.add_parser("verify", parents=[common],
                         help="run check rows and write a certificate")
    pv.add_argument("checks", nargs="*", metavar="CHECK_ID",
                    help="subset of check ids (default: all)")
    pv.set_defaults(handler=cmd_verify)
    return top


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.handler(config, args)
    except SpecFileError as exc:
        print(f"{config.algebra}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (EnumerationCapExceeded, SearchCapExceeded) as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TiltbenchError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
