#!/usr/bin/env python3
"""Regenerates the bundled example models in models/.

Each model is a finite-dimensional Poisson BV site datum: a graded space L
with basis labels, its pairing-dual L', brackets ell_k of degree +1 that
strictly drop the weight grading, and Taylor components Pi^(r) of a degree-+1
bivector whose coefficients depend only on directions absent from its legs
(so the Schouten bracket vanishes identically).
"""

import json
import os
import sys

OUT = os.path.join(os.path.dirname(__file__), os.pardir, "models")


def basis(*elts):
    return [{"label": l, "degree": d, "weight": w} for (l, d, w) in elts]


def dual_basis(*elts):
    return [{"label": l, "degree": d} for (l, d) in elts]


def pairing(*entries):
    return [{"dual": d, "field": f, "coeff": c} for (d, f, c) in entries]


def ell(k, *comps):
    return {str(k): [{"inputs": list(i), "output": o, "coeff": c} for (i, o, c) in comps]}


def pi(r, *comps):
    return {
        str(r): [
            {"inputs": list(i), "dual_input": d, "output": o, "coeff": c}
            for (i, d, o, c) in comps
        ]
    }


def merged(*dicts):
    out = {}
    for d in dicts:
        for k, v in d.items():
            out.setdefault(k, []).extend(v)
    return out


# Symplectic point: two generators with an invertible constant bivector and no
# brackets.  The interior complex is the mapping cone of an isomorphism.
symplectic_point = {
    "name": "symplectic_point",
    "sites": 1,
    "truncation": 3,
    "space": {
        "L": basis(("p", 0, 0), ("q", 1, 0)),
        "Ldual": dual_basis(("p'", 0), ("q'", -1)),
    },
    "pairing": pairing(("p'", "p", "1"), ("q'", "q", "1")),
    "ell": {},
    "pi": merged(
        pi(0, ([], "p'", "q", "1"), ([], "q'", "p", "-1")),
    ),
}

# Odd line with a Taylor-expanded bivector: three generators x, y, z with
# bivector (1 + z^2) dx^dy (coefficients depend only on z, whose direction is
# absent from the legs) and one bracket ell_2(z, z) = y.
odd_line_tpm = {
    "name": "odd_line_tpm",
    "sites": 1,
    "truncation": 3,
    "space": {
        "L": basis(("x", 0, 0), ("y", 1, 1), ("z", 0, 1)),
        "Ldual": dual_basis(("x'", 0), ("y'", -1), ("z'", 0)),
    },
    "pairing": pairing(("x'", "x", "1"), ("y'", "y", "1"), ("z'", "z", "1")),
    "ell": ell(2, (["z", "z"], "y", "1")),
    "pi": merged(
        pi(0, ([], "x'", "y", "1"), ([], "y'", "x", "-1")),
        pi(2, (["z", "z"], "x'", "y", "1"), (["z", "z"], "y'", "x", "-1")),
    ),
}

# Two-site variant: bivector (1 + w) du^dv plus brackets of arity 2 and 3.
two_site = {
    "name": "two_site",
    "sites": 2,
    "truncation": 3,
    "space": {
        "L": basis(("u", 0, 0), ("v", 1, 1), ("w", 0, 1)),
        "Ldual": dual_basis(("u'", 0), ("v'", -1), ("w'", 0)),
    },
    "pairing": pairing(("u'", "u", "1"), ("v'", "v", "1"), ("w'", "w", "1")),
    "ell": merged(
        ell(2, (["w", "w"], "v", "1")),
        ell(3, (["w", "w", "w"], "v", "1")),
    ),
    "pi": merged(
        pi(0, ([], "u'", "v", "1"), ([], "v'", "u", "-1")),
        pi(1, (["w"], "u'", "v", "1"), (["w"], "v'", "u", "-1")),
    ),
}


def main():
    os.makedirs(OUT, exist_ok=True)
    for m in (symplectic_point, odd_line_tpm, two_site):
        path = os.path.join(OUT, m["name"] + ".json")
        with open(path, "w") as f:
            json.dump(m, f, indent=2)
            f.write("\n")
        print("wrote", os.path.relpath(path))


if __name__ == "__main__":
    sys.exit(main())
