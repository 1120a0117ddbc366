"""Resolution charts for coordinate differences along a tournament family.

Every family yields local coordinates, one variable per member except the
full set, in which each difference x_i - x_j factors as a monomial times
a polynomial with constant term +-1.  This module provides the exact
integer-polynomial engine, the difference-basis coefficients, the chart
factorization, and the logarithmic residue data attached to the chart
variables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractError
from .exact_linalg import rref
from .kz_system import residue_A
from .tournament_core import (
    MaximalCommutingFamily,
    canonical_order,
    players,
    serialize_member,
)


class IntPolynomial:
    """Sparse multivariate polynomial with integer coefficients.

    Terms are kept canonically ordered (ascending total degree, then
    descending exponents) whenever iterated or rendered.
    """

    __slots__ = ("num_vars", "_terms")

    def __init__(self, num_vars, terms):
        num_vars = int(num_vars)
        table = {}
        for exps, coeff in dict(terms).items():
            exps = tuple(int(e) for e in exps)
            coeff = int(coeff)
            if len(exps) != num_vars:
                raise ContractError("exponent vector length mismatch")
            if any(e < 0 for e in exps):
                raise ContractError("negative exponent")
            if coeff:
                table[exps] = table.get(exps, 0) + coeff
        table = {e: c for e, c in table.items() if c}
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "_terms", table)

    def __setattr__(self, name, value):
        raise AttributeError("IntPolynomial is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def constant(cls, num_vars, value):
        return cls(num_vars, {(0,) * num_vars: int(value)})

    @classmethod
    def variable(cls, num_vars, index):
        """The polynomial X_index (1-based variable index)."""
        if not 1 <= index <= num_vars:
            raise ContractError(f"variable index {index} out of range")
        exps = tuple(1 if v == index - 1 else 0 for v in range(num_vars))
        return cls(num_vars, {exps: 1})

    # -- inspection -------------------------------------------------------

    @staticmethod
    def _term_key(item):
        exps, _ = item
        return (sum(exps), tuple(-e for e in exps))

    def terms(self):
        """Canonically ordered (exponents, coefficient) pairs."""
        return sorted(self._terms.items(), key=self._term_key)

    def is_zero(self):
        return not self._terms

    @property
    def constant_term(self):
        return self._terms.get((0,) * self.num_vars, 0)

    def degree(self):
        return max((sum(e) for e in self._terms), default=0)

    # -- arithmetic -------------------------------------------------------

    def _same_ring(self, other):
        if not isinstance(other, IntPolynomial):
            other = IntPolynomial.constant(self.num_vars, other)
        elif other.num_vars != self.num_vars:
            raise ContractError("polynomials over different variable sets")
        return other

    def __add__(self, other):
        other = self._same_ring(other)
        merged = dict(self._terms)
        for e, c in other._terms.items():
            merged[e] = merged.get(e, 0) + c
        return IntPolynomial(self.num_vars, merged)

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial(self.num_vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._same_ring(other))

    def __rsub__(self, other):
        return (-self) + self._same_ring(other)

    def __mul__(self, other):
        other = self._same_ring(other)
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return IntPolynomial(self.num_vars, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            raise ContractError("negative power")
        result = IntPolynomial.constant(self.num_vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def evaluate(self, values):
        """Value at a point given as one number per variable."""
        values = [Fraction(v) for v in values]
        if len(values) != self.num_vars:
            raise ContractError("wrong number of values")
        total = Fraction(0)
        for exps, coeff in self._terms.items():
            term = Fraction(coeff)
            for v, e in zip(values, exps):
                term *= v**e
            total += term
        return total

    def compose(self, substitutions):
        """Substitute one polynomial per variable (ring homomorphism)."""
        substitutions = list(substitutions)
        if len(substitutions) != self.num_vars:
            raise ContractError("wrong number of substitutions")
        if substitutions:
            target_vars = substitutions[0].num_vars
        else:
            target_vars = 0
        out = IntPolynomial.constant(target_vars, 0)
        for exps, coeff in self._terms.items():
            term = IntPolynomial.constant(target_vars, coeff)
            for sub, e in zip(substitutions, exps):
                term = term * sub**e
            out = out + term
        return out

    # -- monomial factorization ------------------------------------------

    def monomial_gcd(self):
        """Componentwise minimum exponent vector over all terms."""
        if not self._terms:
            raise ContractError("monomial content of the zero polynomial")
        exps = list(self._terms)
        return tuple(min(e[v] for e in exps) for v in range(self.num_vars))

    def divide_by_monomial(self, exps):
        exps = tuple(int(e) for e in exps)
        out = {}
        for e, c in self._terms.items():
            shifted = tuple(a - b for a, b in zip(e, exps))
            if any(x < 0 for x in shifted):
                raise ContractError("polynomial is not divisible by the monomial")
            out[shifted] = c
        return IntPolynomial(self.num_vars, out)

    # -- comparison / rendering -------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self.num_vars == other.num_vars and self._terms == other._terms

    def __hash__(self):
        return hash((self.num_vars, tuple(self.terms())))

    def to_str(self, names=None):
        if names is None:
            names = [f"X{v + 1}" for v in range(self.num_vars)]
        if not self._terms:
            return "0"
        parts = []
        for exps, coeff in self.terms():
            factors = []
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if factors:
                body = "*".join(factors)
                if coeff == 1:
                    text = body
                elif coeff == -1:
                    text = f"-{body}"
                else:
                    text = f"{coeff}*{body}"
            else:
                text = str(coeff)
            if parts and not text.startswith("-"):
                parts.append("+" + text)
            else:
                parts.append(text)
        return "".join(parts)

    def __repr__(self):
        return f"IntPolynomial({self.to_str()})"


# ---------------------------------------------------------------------------
# difference basis


def _oriented_players(family, loser_map, member):
    """(losing player, winning player) of a game: the x difference for the
    member is x[loser] - x[winner]."""
    pair = players(family, loser_map, member)
    losing = pair & loser_map.loser(member)
    if len(losing) != 1:
        raise ContractError("loser side does not contain exactly one player")
    (n_i,) = losing
    (n_prime,) = pair - losing
    return n_i, n_prime


def epsilon_coefficients(family, loser_map, i, j):
    """Integer coordinates of x_i - x_j in the member-difference basis.

    Each member I contributes the difference x[n_I] - x[n'_I] of its two
    players, oriented so that n_I is on the losing side.  The expansion is
    unique; all coefficients are integers."""
    i, j = int(i), int(j)
    if i == j or i not in family.labels or j not in family.labels:
        raise ContractError("need two distinct labels of the family")
    labels = sorted(family.labels)
    index = {x: t for t, x in enumerate(labels)}
    members = sorted(family.members, key=lambda m: (len(m), sorted(m)))
    columns = []
    for member in members:
        n_i, n_prime = _oriented_players(family, loser_map, member)
        col = [Fraction(0)] * len(labels)
        col[index[n_i]] = Fraction(1)
        col[index[n_prime]] = Fraction(-1)
        columns.append(col)
    target = [Fraction(0)] * len(labels)
    target[index[i]] = Fraction(1)
    target[index[j]] = Fraction(-1)
    augmented = [
        [columns[c][r] for c in range(len(members))] + [target[r]]
        for r in range(len(labels))
    ]
    reduced, pivots = rref(augmented)
    if len(members) in pivots:
        raise ContractError("difference is outside the member-difference span")
    solution = {}
    for row, p in enumerate(pivots):
        value = reduced[row][-1]
        if value.denominator != 1:
            raise ContractError("non-integer expansion coefficient")
        solution[members[p]] = int(value)
    out = {}
    for c, member in enumerate(members):
        out[member] = solution.get(member, 0)
    return out


# ---------------------------------------------------------------------------
# charts


@dataclass(frozen=True)
class PairFactorization:
    """x_i - x_j = (product of chart variables in `monomial`) * poly."""

    i: int
    j: int
    monomial: tuple  # ascending 1-based variable indices, each at most once
    poly: IntPolynomial


@dataclass(frozen=True)
class BlowupChart:
    """A family's local coordinates and every difference's factorization."""

    family: MaximalCommutingFamily
    order: tuple  # members, full set moved last
    loser_map: object
    flipped: frozenset
    variables: tuple  # members carrying variables: order without the full set
    orientation: tuple  # ((member, (n_I, n'_I)), ...) aligned with `order`
    pairs: tuple  # ((i, j), PairFactorization) for all label pairs i < j

    def variable_index(self, member):
        """1-based chart variable of a member (the full set has none)."""
        member = frozenset(member)
        try:
            return self.variables.index(member) + 1
        except ValueError:
            raise ContractError(
                f"{set(member)} carries no chart variable"
            ) from None

    def factorization(self, i, j):
        i, j = sorted((int(i), int(j)))
        for (a, b), data in self.pairs:
            if (a, b) == (i, j):
                return data
        raise ContractError(f"no pair ({i},{j}) in the chart")


def chart_order(family):
    """Members in canonical order with the full set moved to the end."""
    ordered = canonical_order(family)
    full = family.labels
    return tuple([m for m in ordered.order if m != full] + [full])


def blowup_chart(family, loser_map, flip=frozenset()):
    """Factor every coordinate difference in the family's chart.

    `flip` reverses the orientation of the listed members' differences
    (sign-only override used to match alternative printed conventions).
    The factorization invariants — forced monomial support and constant
    term +-1 — are verified and violations raise immediately."""
    flip = frozenset(frozenset(m) for m in flip)
    for member in flip:
        if member not in family.members:
            raise ContractError(f"flip target {set(member)} is not a member")
    order = chart_order(family)
    full = family.labels
    variables = order[:-1]
    num_vars = len(variables)
    var_of = {member: v + 1 for v, member in enumerate(variables)}
    orientation = []
    for member in order:
        n_i, n_prime = _oriented_players(family, loser_map, member)
        if member in flip:
            n_i, n_prime = n_prime, n_i
        orientation.append((member, (n_i, n_prime)))
    member_exponents = {}
    for member in order:
        exps = [0] * num_vars
        for sup in variables:
            if member <= sup:
                exps[var_of[sup] - 1] = 1
        member_exponents[member] = tuple(exps)
    pair_rows = []
    for i, j in itertools.combinations(sorted(family.labels), 2):
        eps = epsilon_coefficients(family, loser_map, i, j)
        terms = {}
        for member, coeff in eps.items():
            if member in flip:
                coeff = -coeff
            if coeff:
                e = member_exponents[member]
                terms[e] = terms.get(e, 0) + coeff
        total = IntPolynomial(num_vars, terms)
        smallest = min(
            (m for m in family.members if i in m and j in m), key=len
        )
        forced = tuple(
            1 if (smallest <= v and v != full) else 0
            for v in variables
        )
        if total.is_zero() or total.monomial_gcd() != forced:
            raise ContractError(
                f"difference ({i},{j}) does not carry the forced monomial "
                f"of {serialize_member(smallest)}"
            )
        poly = total.divide_by_monomial(forced)
        if poly.constant_term not in (1, -1):
            raise ContractError(
                f"difference ({i},{j}): unit part has constant term "
                f"{poly.constant_term}"
            )
        monomial = tuple(v + 1 for v, e in enumerate(forced) if e)
        pair_rows.append(((i, j), PairFactorization(i, j, monomial, poly)))
    return BlowupChart(
        family=family,
        order=order,
        loser_map=loser_map,
        flipped=flip,
        variables=tuple(variables),
        orientation=tuple(orientation),
        pairs=tuple(pair_rows),
    )


def local_residues(system, family):
    """Residue matrix attached to each chart variable: the grouped residue
    of the member the variable belongs to."""
    if system.n != len(family.labels):
        raise ContractError("system size and family labels disagree")
    variables = chart_order(family)[:-1]
    return {
        v + 1: residue_A(system, member) for v, member in enumerate(variables)
    }
