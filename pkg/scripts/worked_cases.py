#!/usr/bin/env python3
"""Walk the four homogeneous 4-team triangularizations and print every
intermediate object: the lifted residues, the change of basis, the
conjugated upper-triangular forms, the joint spectrum, and the full
prediction table over all label subsets.

Run from the repository root:

    python3 scripts/worked_cases.py
    python3 scripts/worked_cases.py --mu 1/6 --family "{0,1};{2,3};{0,1,2,3}"
"""

from __future__ import annotations

import argparse
from fractions import Fraction

from kzmc import (
    addition,
    canonical_order,
    convolve,
    kappa,
    parse_family,
    predicted_A_I_K,
    predicted_joint_spectrum,
    render_family,
    serialize_member,
    system_from_json,
    tilde_A,
    triangularize,
)

WORKED_FAMILIES = (
    "{0,1};{0,1,2};{0,1,2,3}",
    "{1,2};{0,1,2};{0,1,2,3}",
    "{1,2};{1,2,3};{0,1,2,3}",
    "{0,1};{2,3};{0,1,2,3}",
)


def homogeneous_probe():
    """Rank-1 4-team system with distinct residues and zero full-set sum."""
    import json

    scalars = {
        "0,1": "1/2",
        "0,2": "1/3",
        "0,3": "1/5",
        "1,2": "1/7",
        "1,3": "1/11",
        "2,3": "1/13",
    }
    payload = {
        "n": 4,
        "rank": 1,
        "residues": {key: [[value]] for key, value in scalars.items()},
    }
    base = system_from_json(json.dumps(payload))
    return addition(base, 2, 3, -kappa(base))


def grid(matrix, indent="    "):
    cells = [[str(x) for x in row] for row in matrix.entries()]
    widths = [
        max(len(cells[r][c]) for r in range(len(cells)))
        for c in range(len(cells[0]))
    ]
    return "\n".join(
        indent + "[" + "  ".join(cell.rjust(w) for cell, w in zip(row, widths)) + "]"
        for row in cells
    )


def subset_name(subset):
    return "A_" + serialize_member(subset)


def walk_family(system, mu, family):
    ordered = canonical_order(family)
    conv = convolve(system, mu)
    cert = triangularize(conv, family)
    print(render_family(family, winner=0))
    print(f"member order: {', '.join(serialize_member(m) for m in ordered.order)}")
    print(f"flag dimensions: {cert.flag_dimensions()}")
    print("change of basis U:")
    print(grid(cert.U))
    print("inverse:")
    print(grid(cert.U_inverse))
    for member in ordered.order:
        print(f"lifted residue for {serialize_member(member)}:")
        print(grid(tilde_A(conv, member)))
        print("conjugated (upper triangular):")
        print(grid(cert.conjugated_for(member)))
    print(f"joint spectrum: {predicted_joint_spectrum(system, family, mu)}")
    print("prediction table (rows: family members; columns: subsets;")
    print("the full-set column doubles as the value at infinity):")
    columns = list(ordered.order) + [frozenset({j}) for j in range(1, system.n)]
    header = ["member"] + [subset_name(c) for c in columns]
    rows = []
    for member in ordered.order:
        row = [serialize_member(member)]
        for column in columns:
            value = predicted_A_I_K(system, member, column, mu)
            scalar = value.scalar_value()
            row.append(str(scalar) if scalar is not None else repr(value))
        rows.append(row)
    widths = [
        max(len(header[c]), max(len(r[c]) for r in rows))
        for c in range(len(header))
    ]
    print("    " + "  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for row in rows:
        print("    " + "  ".join(cell.ljust(w) for cell, w in zip(row, widths)))
    print()


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--mu", type=Fraction, default=Fraction(1, 4), help="lift parameter"
    )
    parser.add_argument(
        "--family",
        action="append",
        help="walk only this family (repeatable; default: all four)",
    )
    args = parser.parse_args(argv)
    system = homogeneous_probe()
    print(f"probe residues (rank 1, full-set sum 0), mu = {args.mu}")
    for (i, j), matrix in system.pairs():
        print(f"  A_{{{i},{j}}} = {matrix.entries()[0][0]}")
    print()
    for text in args.family or WORKED_FAMILIES:
        walk_family(system, args.mu, parse_family(text, 4))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
