"""Command line: analyze, ap, mu, fault, cohomology, render, selftest.

Reports are JSON (canonical: sorted keys, exact rationals as strings) with a
human-readable text rendering layered on top.  Exit codes: 0 success,
1 validation failure, 2 undetermined classification, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .abelian import poly_str, recognize
from .ap_complex import border_forcing, collar, graph_h1
from .documents import bundled_document, bundled_names, load_document
from .dpv import cohomology
from .errors import (
    FaultlineError,
    ResourceCapError,
    UndeterminedError,
    ValidationError,
)
from .fault import boundary_trace, classify_boundary, discrepancy_growth, offset_statistics
from .render import emit_svg, generate_patch, overlay_boundaries
EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_UNDETERMINED = 2
EXIT_RESOURCE = 3

_ENV_CAPS = {
    "FAULTLINE_MAX_WORD_LEN": "max_word_len",
    "FAULTLINE_MAX_TILES": "max_tiles",
    "FAULTLINE_ROUNDS": "rounds",
}


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------

def _decimal12(q):
    q = Fraction(q)
    scaled = q * 10 ** 12
    n = scaled.numerator // scaled.denominator
    if scaled - n >= Fraction(1, 2):
        n += 1
    sign = "-" if n < 0 else ""
    whole, frac = divmod(abs(n), 10 ** 12)
    return f"{sign}{whole}.{frac:012d}"


def alg_json(x):
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return {"coeffs": [str(x)], "poly": "x", "interval": [str(x), str(x)],
                "decimal": _decimal12(x)}
    iv = x.interval(Fraction(1, 2 ** 48))
    return {
        "poly": poly_str(x.field.poly),
        "coeffs": [str(c) for c in x.coeffs],
        "interval": [str(iv.lo), str(iv.hi)],
        "decimal": _decimal12(iv.midpoint()),
    }


def group_json(expr):
    if expr is None:
        return None
    return {
        "expr": expr.canonical(),
        "rank": expr.rank(),
        "det": expr.det_class(),
        "presentation": [list(r) for r in map(tuple, expr.presentation_matrix())],
    }


def dlg_json(g):
    return {
        "n": g.n,
        "a": [list(r) for r in g.a],
        "r": g.r,
        "a_prime": [list(r) for r in g.a_prime],
        "charpoly": poly_str(g.charpoly_prime),
        "det": g.det_prime,
        "recognized": recognize(g).canonical(),
    }


def complex_json(cx):
    slots = lambda cls: sorted(f"{cx.edge_names[e]}.{side}" for e, side in cls)
    return {
        "edges": list(cx.edge_names),
        "collared_left": cx.collared_left,
        "collared_right": cx.collared_right,
        "edge_map": {
            cx.edge_names[i]: [cx.edge_names[j] for j in img]
            for i, img in enumerate(cx.edge_map)
        },
        "edge_matrix": [list(map(int, row)) for row in cx.edge_matrix],
        "vertices": [slots(cls) for cls in cx.vertices],
        "vertex_map": list(cx.vertex_map),
        "transitions": [[cx.edge_names[e], cx.edge_names[f]] for e, f in cx.transitions],
    }


def essential_json(ev):
    n = ev.n
    return {
        "eventual": list(ev.eventual),
        "n": list(n) if isinstance(n, tuple) else n,
        "vertices": [
            {
                "vertex": vb.vertex,
                "lower": vb.lower,
                "upper": vb.upper,
                "lower_core": vb.lower_core,
                "upper_core": vb.upper_core,
                "class": vb.kind.value,
                "cycle_length": vb.cycle_length,
                "top_sigmas": list(vb.top_sigmas),
                "bottom_sigmas": list(vb.bottom_sigmas),
            }
            for vb in ev.vertices
        ],
    }


def dump_report(report, fmt, out):
    if fmt == "json":
        out.write(json.dumps(report, sort_keys=True, indent=2))
        out.write("\n")
    else:
        _dump_text(report, out)


def _dump_text(node, out, indent=0):
    pad = "  " * indent
    if isinstance(node, dict):
        for k in sorted(node):
            v = node[k]
            if isinstance(v, (dict, list)):
                out.write(f"{pad}{k}:\n")
                _dump_text(v, out, indent + 1)
            else:
                out.write(f"{pad}{k}: {v}\n")
    elif isinstance(node, list):
        for v in node:
            if isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
                out.write(f"{pad}- [{', '.join(str(x) for x in v)}]\n")
            elif isinstance(v, (dict, list)):
                _dump_text(v, out, indent)
                out.write("\n" if indent == 0 else "")
            else:
                out.write(f"{pad}- {v}\n")
    else:
        out.write(f"{pad}{node}\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _load(args):
    if args.input is None:
        raise ValidationError("--input is required (a path or bundled:<name>)")
    if args.input.startswith("bundled:"):
        return bundled_document(args.input.split(":", 1)[1])
    return load_document(args.input)


def _apply_env(options):
    for var, key in _ENV_CAPS.items():
        if var in os.environ:
            try:
                options[key] = int(os.environ[var])
            except ValueError:
                raise ValidationError(f"{var} must be an integer")
    return options


def _options(doc, args):
    """Effective options: document options, then environment caps, then
    command-line flags."""
    opts = _apply_env(dict(doc.options))
    for key in ("rounds", "max_word_len", "precision_bits"):
        val = getattr(args, key, None)
        if val is not None:
            opts[key] = val
    return opts


def cmd_analyze(args):
    doc = _load(args)
    opts = _options(doc, args)
    names = [args.name] if args.name else sorted(doc.substitutions)
    report = {"command": "analyze", "substitutions": {}}
    for name in names:
        s = doc.substitution(name)
        pd = s.perron()
        sc = s.spectral_class(precision_bits=opts["precision_bits"])
        entry = {
            "alphabet": list(s.alphabet),
            "rules": {l.name: s.text(r) for l, r in zip(s.letters, s.rules)},
            "matrix": [list(map(int, row)) for row in s.matrix()],
            "charpoly": poly_str(pd.charpoly),
            "perron_root": alg_json(pd.root),
            "primitive": pd.primitive,
            "spectral_class": sc.kind.value,
            "second_eigenvalue_modulus": [str(sc.second_eigenvalue_modulus[0]),
                                          str(sc.second_eigenvalue_modulus[1])],
            "degenerate": bool(pd.root.is_rational() and pd.root.as_fraction() == 1),
        }
        if pd.primitive:
            entry["tile_lengths"] = {
                l.name: alg_json(x) for l, x in zip(s.letters, s.tile_lengths())
            }
        report["substitutions"][name] = entry
    return report, EXIT_OK


def cmd_ap(args):
    doc = _load(args)
    s = doc.substitution(args.name)
    _, cx = collar(s)
    data = graph_h1(cx)
    right, left = border_forcing(s)
    report = {
        "command": "ap",
        "substitution": args.name,
        "border_forcing": {"right_forced_in": right, "left_forced_in": left},
        "complex": complex_json(cx),
        "h1": {
            "rank": data.h1_rank,
            "basis": [list(r) for r in data.h1_basis],
            "induced": [list(r) for r in data.induced_h1],
        },
    }
    return report, EXIT_OK


def cmd_mu(args):
    doc = _load(args)
    s = doc.substitution(args.name)
    from .dpv import _h1_limit

    expr, dl, cx, data, note = _h1_limit(s)
    report = {
        "command": "mu",
        "substitution": args.name,
        "h1_of_tiling_space": group_json(expr),
        "limit": dlg_json(dl),
        "complex_h1_rank": data.h1_rank,
        "note": note["detail"],
    }
    return report, EXIT_OK


def cmd_fault(args):
    doc = _load(args)
    opts = _options(doc, args)
    top = doc.substitution(args.top)
    bottom = doc.substitution(args.bottom)
    rounds = opts["rounds"]
    seed = args.seed or top.alphabet[0]
    modulus = None
    if opts.get("modulus_letter") is not None:
        modulus = top.word([opts["modulus_letter"]])[0]
    trace = boundary_trace(top, bottom, seed, rounds, modulus=modulus,
                           max_word_len=opts["max_word_len"])
    growth = discrepancy_growth(trace)
    stats = offset_statistics(trace)
    cls = classify_boundary(top, bottom, cap=rounds, modulus=modulus,
                            max_word_len=opts["max_word_len"])
    rows = []
    prev_max = None
    for st in trace.steps:
        gap = None
        if len(st.offsets) > 1:
            gap = min(b - a for a, b in zip(st.offsets, st.offsets[1:]))
        step_ratio = None
        if prev_max not in (None, 0):
            step_ratio = _decimal12(Fraction(st.max_abs_discrepancy, prev_max))
        prev_max = st.max_abs_discrepancy
        rows.append({
            "round": st.round,
            "top": top.text(st.top) if len(st.top) <= 80 else top.text(st.top[:77]) + "...",
            "bottom": bottom.text(st.bottom) if len(st.bottom) <= 80
                      else bottom.text(st.bottom[:77]) + "...",
            "max_discrepancy": st.max_abs_discrepancy,
            "distinct_offsets": len(st.offsets),
            "min_gap": alg_json(gap) if gap is not None else None,
            "growth_step": step_ratio,
            "offsets": [alg_json(o) for o in st.offsets] if len(st.offsets) <= 12 else None,
        })
    report = {
        "command": "fault",
        "top": args.top,
        "bottom": args.bottom,
        "seed": seed,
        "rounds": rows,
        "growth_ratio": [str(growth[0]), str(growth[1])],
        "distinct_offsets_total": stats.distinct_count,
        "min_offset_gap": alg_json(stats.min_gap) if stats.min_gap is not None else None,
        "classification": cls.kind.value,
        "spectral_class": cls.spectral_kind.value,
    }
    code = EXIT_UNDETERMINED if cls.kind.value == "Undetermined" else EXIT_OK
    return report, code


def _cohomology_report(doc, opts):
    rep = cohomology(doc.dpv, cap=opts["rounds"], max_word_len=opts["max_word_len"])
    body = {
        "H0": group_json(rep.h0),
        "H1": group_json(rep.h1),
        "H2": group_json(rep.h2),
        "H3": group_json(rep.h3),
        "H_above_3": rep.hk_above_3.canonical(),
        "mu": group_json(rep.mu),
        "mu_presentation": [list(r) for r in rep.mu_group.a_prime],
        "nu": group_json(rep.nu),
        "nu_presentation": [list(r) for r in rep.nu_group.a_prime],
        "d0": dlg_json(rep.d0),
        "d1": dlg_json(rep.d1),
        "d1_recognized": rep.d1_recognized.canonical(),
        "essential_vertices": essential_json(rep.essential),
        "hypotheses": list(rep.hypothesis_log),
    }
    if rep.variants:
        body["variants"] = [
            {"n": n, "H2": group_json(h2), "H3": group_json(h3)} for (n, h2, h3) in rep.variants
        ]
    return rep, body


def cmd_cohomology(args):
    doc = _load(args)
    if doc.dpv is None:
        raise ValidationError("document has no dpv section")
    opts = _options(doc, args)
    rep, body = _cohomology_report(doc, opts)
    body["command"] = "cohomology"
    body["complex"] = complex_json(collar(doc.dpv.vertical)[1])
    code = EXIT_OK if rep.determinate else EXIT_UNDETERMINED
    return body, code


def cmd_render(args):
    doc = _load(args)
    if doc.dpv is None:
        raise ValidationError("document has no dpv section")
    opts = _options(doc, args)
    d = doc.dpv
    if args.seed:
        if "," not in args.seed:
            raise ValidationError("--seed must be '<vertical>,<horizontal>'")
        vn, hn = args.seed.split(",", 1)
        seed = (d.vertical.word([vn])[0], d.horizontal[0].word([hn])[0])
    else:
        seed = (0, 0)
    k = args.rounds if args.rounds is not None else 3
    patch = generate_patch(d, seed, k, max_tiles=opts["max_tiles"])
    overlay = ()
    if args.overlay is not None:
        overlay = overlay_boundaries(d, seed, k, args.overlay)
    colors = {}
    if args.colors:
        for part in args.colors.split(";"):
            tile, _, color = part.partition("=")
            vn, hn = tile.split(",", 1)
            colors[(d.vertical.word([vn])[0], d.horizontal[0].word([hn])[0])] = color
    svg = emit_svg(patch, colors=colors, overlay=overlay)
    out = args.output or "-"
    if out == "-":
        sys.stdout.write(svg)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(svg)
    return None, EXIT_OK


# ---------------------------------------------------------------------------
# selftest: the three bundled examples against their expected reports
# ---------------------------------------------------------------------------

_MU = "Z[1/L:x^2-x-3]"
_EXPECTED = {
    "doubling_swap": {
        "H0": "Z",
        "H1": "Z[1/2]",
        "H2": f"{_MU} (x) Z[1/2]",
        "H2_rank": 2,
        "H2_presentation": [[2, 2], [6, 0]],
        "H3": f"{_MU} (x) {_MU}",
        "H3_rank": 4,
        "mu": _MU,
        "mu_presentation": [[1, 1], [3, 0]],
        "nu": "Z[1/2]",
        "n": 1,
        "eventual": 1,
        "d1_recognized": "Z[1/2]",
    },
    "period_doubling": {
        "H0": "Z",
        "H1": "Z[1/2] (+) Z",
        "H2": f"{_MU}^2 (+) ({_MU} (x) Z[1/2])",
        "H3": f"({_MU} (x) {_MU})^2",
        "mu": _MU,
        "nu": "Z[1/2] (+) Z",
        "n": 2,
        "eventual": 2,
        "edges": 3,
        "vertices": 2,
        "d1_recognized": "Z[1/2] (+) Z^2",
    },
    "row_thirds": {
        "H0": "Z",
        "H1": "Z[1/2]",
        "H2": f"{_MU} (x) Z[1/2]",
        "H3": f"{_MU} (x) {_MU}",
        "mu": _MU,
        "nu": "Z[1/2]",
        "n": 1,
        "eventual": 3,
        "fault_junction_cores": ("ga", "al"),
    },
}


def _check_example(name, out):
    doc = bundled_document(name)
    opts = _apply_env(dict(doc.options))
    rep, _ = _cohomology_report(doc, opts)
    exp = _EXPECTED[name]
    failures = []

    def check(label, got, want):
        if got != want:
            failures.append(f"{label}: got {got!r}, want {want!r}")

    check("H0", rep.h0.canonical(), exp["H0"])
    check("H1", rep.h1.canonical(), exp["H1"])
    check("H2", rep.h2.canonical() if rep.h2 else None, exp["H2"])
    check("H3", rep.h3.canonical() if rep.h3 else None, exp["H3"])
    check("mu", rep.mu.canonical(), exp["mu"])
    check("nu", rep.nu.canonical(), exp["nu"])
    check("n", rep.essential.n, exp["n"])
    check("eventual", len(rep.essential.eventual), exp["eventual"])
    check("d1", rep.d1_recognized.canonical(), exp.get("d1_recognized", rep.d1_recognized.canonical()))
    if "H2_rank" in exp:
        check("H2 rank", rep.h2.rank(), exp["H2_rank"])
    if "H2_presentation" in exp:
        check("H2 presentation",
              [list(r) for r in map(tuple, rep.h2.presentation_matrix())],
              exp["H2_presentation"])
    if "H3_rank" in exp:
        check("H3 rank", rep.h3.rank(), exp["H3_rank"])
    if "mu_presentation" in exp:
        check("mu presentation", [list(r) for r in rep.mu_group.a_prime], exp["mu_presentation"])
    if "edges" in exp or "vertices" in exp:
        _, cx = collar(doc.dpv.vertical)
        if "edges" in exp:
            check("edges", cx.n_edges, exp["edges"])
        if "vertices" in exp:
            check("vertices", cx.n_vertices, exp["vertices"])
    if "fault_junction_cores" in exp:
        faults = [
            (vb.lower_core, vb.upper_core)
            for vb in rep.essential.vertices if vb.kind.value == "RegularFault"
        ]
        check("fault junctions", tuple(faults), (exp["fault_junction_cores"],))

    if failures:
        out.write(f"FAIL {name}\n")
        for f in failures:
            out.write(f"  {f}\n")
        return False
    out.write(f"PASS {name}\n")
    return True


def cmd_selftest(args):
    out = sys.stdout
    ok = 0
    names = bundled_names()
    for name in names:
        if _check_example(name, out):
            ok += 1
    out.write(f"{ok}/{len(names)} examples pass\n")
    return None, (EXIT_OK if ok == len(names) else EXIT_VALIDATION)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(
        prog="faultline",
        description="Fault lines and Cech cohomology of DPV substitution tiling spaces",
    )
    p.add_argument("--version", action="version", version=f"faultline {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_input=True):
        if needs_input:
            sp.add_argument("--input", "-i", help="input document path or bundled:<name>")
        sp.add_argument("--output", "-o", help="output path (default stdout)")
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--rounds", type=int, help="iteration cap override")
        sp.add_argument("--precision-bits", type=int, dest="precision_bits",
                        help="interval refinement precision override")
        sp.add_argument("--max-word-len", type=int, dest="max_word_len",
                        help="word length guard override")

    sp = sub.add_parser("analyze", help="spectral report for substitutions")
    common(sp)
    sp.add_argument("--name", help="substitution to analyze (default: all)")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("ap", help="Anderson-Putnam complex of a substitution")
    common(sp)
    sp.add_argument("--name", required=True)
    sp.set_defaults(func=cmd_ap)

    sp = sub.add_parser("mu", help="H^1 of a substitution tiling space as a direct limit")
    common(sp)
    sp.add_argument("--name", required=True)
    sp.set_defaults(func=cmd_mu)

    sp = sub.add_parser("fault", help="boundary trace and classification for a pair")
    common(sp)
    sp.add_argument("--top", required=True, help="substitution above the boundary")
    sp.add_argument("--bottom", required=True, help="substitution below the boundary")
    sp.add_argument("--seed", help="seed letter (default: first letter)")
    sp.set_defaults(func=cmd_fault)

    sp = sub.add_parser("cohomology", help="H^0..H^3 of the DPV tiling space")
    common(sp)
    sp.set_defaults(func=cmd_cohomology)

    sp = sub.add_parser("render", help="SVG patch of the DPV tiling")
    common(sp)
    sp.add_argument("--seed", help="seed tile as '<vertical>,<horizontal>'")
    sp.add_argument("--overlay", type=int, help="draw boundaries of order-j supertile rows")
    sp.add_argument("--colors", help="tile colors: 'v,h=#rrggbb;...'")
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("selftest", help="run the bundled examples against expected reports")
    common(sp, needs_input=False)
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except UndeterminedError as exc:
        print(f"undetermined: {exc}", file=sys.stderr)
        return EXIT_UNDETERMINED
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except FaultlineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if report is not None:
        if args.output and args.output != "-":
            with open(args.output, "w", encoding="utf-8") as fh:
                dump_report(report, args.format, fh)
        else:
            dump_report(report, args.format, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
