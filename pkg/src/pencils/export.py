"""JSON and DOT renderings of roots, trees and reports.

Complex numbers become ``{"re": ..., "im": ...}`` decimal strings at the
working precision and rationals become ``"p/q"`` strings, so every output is
lossless and byte-identical across runs with the same configuration.
"""

from __future__ import annotations

import json
from fractions import Fraction

import mpmath

from .series import INF
from .uni import render, to_mpc

__all__ = [
    "complex_json",
    "rational_json",
    "poly_json",
    "series_json",
    "tree_json",
    "eggers_json",
    "tree_dot",
    "eggers_dot",
    "dumps",
]


def _dec(x):
    x = mpmath.mpf(x)
    if x == 0:
        return "0"
    return mpmath.nstr(x, mpmath.mp.dps, strip_zeros=True)


def complex_json(v):
    v = to_mpc(v)
    return {"re": _dec(v.real), "im": _dec(v.imag)}


def rational_json(q):
    if q is None:
        return None
    if q == INF:
        return "inf"
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def poly_json(p):
    if p is None:
        return None
    return {"coefficients": [complex_json(c) for c in p.coeffs], "text": render(p)}


def series_json(s):
    """``{denom, terms: [{num, den, re, im}], trunc, cycle, mult}``."""
    return {
        "denom": s.index,
        "terms": [
            {"num": e.numerator, "den": e.denominator, **complex_json(c)} for e, c in s.terms
        ],
        "trunc": None if s.trunc == INF else rational_json(s.trunc),
        "cycle": s.cycle,
        "mult": s.mult,
    }


def tree_json(tree):
    nodes = []
    for b in tree.nodes:
        nodes.append({
            "index": b.index,
            "height": rational_json(b.height),
            "q": rational_json(b.q),
            "F": poly_json(b.F),
            "stem": series_json(b.stem) if b.finite else None,
            "members": list(b.members),
            "parent": b.parent,
            "children": list(b.children),
            "support": None if b.support is None else complex_json(b.support),
        })
    return {
        "roots": [series_json(a) for a in tree.roots],
        "nodes": nodes,
        "placements": [
            {"beta": p.beta_index, "node": p.node,
             "lc": None if p.lc is None else complex_json(p.lc), "repeated": p.repeated}
            for p in tree.placements
        ],
    }


def eggers_json(eggers):
    return {
        "classes": [
            {
                "index": c.index,
                "members": list(c.members),
                "height": rational_json(c.height),
                "q": rational_json(c.q),
                "N": c.N,
                "n": c.n,
                "G": poly_json(c.G),
                "t": c.t,
                "parent": c.parent,
                "children": list(c.children),
            }
            for c in eggers.classes
        ],
        "leaf_count": eggers.leaf_count,
    }


def _short(v, digits=8):
    v = to_mpc(v)
    if v.imag == 0:
        return mpmath.nstr(v.real, digits)
    return mpmath.nstr(v, digits)


def _bar_label(h, q, F, tag="F"):
    text = f"h={rational_json(h)}  q={rational_json(q)}"
    if F is not None:
        text += f"\\n{tag}={render(F, digits=8)}"
    return text


def tree_dot(tree, name="kuolu"):
    """Bars for finite-height balls, points for leaves; edges carry the support ``c``."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [fontname=\"monospace\"];"]
    for b in tree.nodes:
        if b.finite:
            lines.append(f"  n{b.index} [shape=box, height=0.1, style=filled, fillcolor=black, "
                         f"fontcolor=white, label=\"{_bar_label(b.height, b.q, b.F)}\"];")
        else:
            r = tree.roots[b.members[0]]
            lines.append(f"  n{b.index} [shape=point, xlabel=\"alpha{b.members[0]} (cycle {r.cycle})\"];")
    for b in tree.nodes:
        if b.parent is not None:
            label = "" if b.support is None else _short(b.support)
            lines.append(f"  n{b.index} -> n{b.parent} [arrowhead=none, label=\"{label}\"];")
    for k, p in enumerate(tree.placements):
        tag = f"beta{p.beta_index}" + (" (multiple root of f)" if p.repeated else "")
        lines.append(f"  d{k} [shape=circle, width=0.1, label=\"\", xlabel=\"{tag}\"];")
        lines.append(f"  d{k} -> n{p.node} [arrowhead=none, style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def eggers_dot(eggers, name="eggers"):
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [fontname=\"monospace\"];"]
    for c in eggers.classes:
        if c.finite:
            label = _bar_label(c.height, c.q, c.G, "G") + f"\\nn={c.n}  t={c.t}"
            lines.append(f"  c{c.index} [shape=box, height=0.1, style=filled, fillcolor=black, "
                         f"fontcolor=white, label=\"{label}\"];")
        else:
            lines.append(f"  c{c.index} [shape=point, xlabel=\"branch {c.index}\"];")
    for c in eggers.classes:
        if c.parent is not None:
            lines.append(f"  c{c.index} -> c{c.parent} [arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True)
