"""Shared helpers for the test suite."""

from __future__ import annotations

import json
from fractions import Fraction

from kzmc import RationalMatrix, residue_A, system_from_json


def rational_matrix(grid):
    """Exact matrix from a grid of ints / Fractions / rational strings."""
    return RationalMatrix([[Fraction(x) for x in row] for row in grid])


def rank1(n, scalars):
    """Rank-1 system from a map "i,j" -> rational string or number."""
    residues = {key: [[str(value)]] for key, value in scalars.items()}
    payload = {"n": n, "rank": 1, "residues": residues}
    return system_from_json(json.dumps(payload))


def scalar_of(system, labels):
    """Scalar value of a generalized residue; asserts it is scalar."""
    value = residue_A(system, labels).scalar_value()
    assert value is not None, f"residue over {labels} is not scalar"
    return value


def fam(text, n=None):
    """Parse a family literal; import kept local to avoid cycles."""
    from kzmc import parse_family

    return parse_family(text, n)
