"""Integrable residue systems on configuration-space coordinates.

A system of rank N on n coordinates stores one N x N rational matrix per
unordered coordinate pair.  On top of that this module provides grouped
residues A_I (sums over pairs inside a subset, including the derived
infinity residues), integrability checking, scalar shifts (additions),
coordinate permutations, joint spectra over every tournament family, the
pseudo-singular-infinity test, and systems extended by fixed singular
points.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractError, IntegrabilityError, ParseError
from .exact_linalg import JointSpectrum, RationalMatrix, _frac, joint_spectrum
from .tournament_core import (
    INFINITY,
    MaximalCommutingFamily,
    canonical_order,
    enumerate_families,
    parse_family,
    serialize_family,
)


def _pair_key(i, j):
    i, j = int(i), int(j)
    if i == j:
        raise ContractError("a residue pair needs two distinct coordinates")
    return frozenset((i, j))


class KzSystem:
    """Rank-N system of pairwise residue matrices on coordinates 0..n-1."""

    __slots__ = ("n", "rank", "_residues")

    def __init__(self, n, rank, residues, check=True):
        n = int(n)
        rank = int(rank)
        if n < 2:
            raise ContractError("a system needs at least 2 coordinates")
        if rank < 1:
            raise ContractError("rank must be >= 1")
        table = {}
        for key, mat in dict(residues).items():
            if isinstance(key, str):
                a, b = key.split(",")
                key = (int(a), int(b))
            i, j = sorted(key)
            pk = _pair_key(i, j)
            if not (0 <= i < j < n):
                raise ContractError(f"pair ({i},{j}) out of range for n={n}")
            if pk in table:
                raise ContractError(f"pair ({i},{j}) given twice")
            if not isinstance(mat, RationalMatrix):
                mat = RationalMatrix(mat)
            if mat.rows != rank or mat.cols != rank:
                raise ContractError(
                    f"residue for ({i},{j}) is {mat.rows}x{mat.cols}, "
                    f"expected {rank}x{rank}"
                )
            table[pk] = mat
        zero = RationalMatrix.zero(rank, rank)
        for i, j in itertools.combinations(range(n), 2):
            table.setdefault(_pair_key(i, j), zero)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "_residues", table)
        if check:
            violations = check_integrability(self)
            if violations:
                raise IntegrabilityError(violations)

    def __setattr__(self, name, value):
        raise AttributeError("KzSystem is immutable")

    def pair(self, i, j):
        """The residue matrix of the unordered pair {i,j}."""
        return self._residues[_pair_key(i, j)]

    def pairs(self):
        """Sorted ((i,j), matrix) items over all coordinate pairs."""
        return [
            ((i, j), self._residues[_pair_key(i, j)])
            for i, j in itertools.combinations(range(self.n), 2)
        ]

    @property
    def labels(self):
        return frozenset(range(self.n))

    def __eq__(self, other):
        if not isinstance(other, KzSystem):
            return NotImplemented
        return (
            self.n == other.n
            and self.rank == other.rank
            and self._residues == other._residues
        )

    def __hash__(self):
        return hash((self.n, self.rank, tuple(sorted(
            (tuple(sorted(k)), v) for k, v in self._residues.items()
        ))))

    def __repr__(self):
        return f"KzSystem(n={self.n}, rank={self.rank})"


def is_homogeneous(system):
    """True when the residue of the full coordinate set vanishes."""
    return residue_A(system, range(system.n)).is_zero()


def residue_A(system, subset):
    """Grouped residue A_I = sum of pair residues inside I.

    I may contain the INFINITY sentinel: A_{i,inf} is derived as
    -sum_nu A_{i,nu}; larger infinity-containing sets reduce through the
    complement identity, which needs a homogeneous system.
    """
    elems = set(subset)
    if INFINITY in elems:
        finite = elems - {INFINITY}
        finite = {int(x) for x in finite}
        _check_range(system, finite)
        if not finite:
            return RationalMatrix.zero(system.rank, system.rank)
        if len(finite) == 1:
            (i,) = finite
            total = RationalMatrix.zero(system.rank, system.rank)
            for nu in range(system.n):
                if nu != i:
                    total = total + system.pair(i, nu)
            return -total
        if is_homogeneous(system):
            complement = set(range(system.n)) - finite
            return residue_A(system, complement)
        raise ContractError(
            "infinity-containing residues beyond pairs need a homogeneous system"
        )
    finite = {int(x) for x in elems}
    _check_range(system, finite)
    total = RationalMatrix.zero(system.rank, system.rank)
    for i, j in itertools.combinations(sorted(finite), 2):
        total = total + system.pair(i, j)
    return total


def _check_range(system, finite):
    for x in finite:
        if not 0 <= x < system.n:
            raise ContractError(f"coordinate {x} out of range for n={system.n}")


def check_integrability(system):
    """All violated commutator conditions, as structured records.

    Empty result means the system is integrable.  Records are
    ("disjoint", (i,j), (k,l)) for failing disjoint pairs and
    ("triple", (i,j), ((i,k),(j,k))) for failing triple conditions.
    """
    violations = []
    pairs = list(itertools.combinations(range(system.n), 2))
    for (i, j), (k, l) in itertools.combinations(pairs, 2):
        if len({i, j, k, l}) == 4:
            if not system.pair(i, j).commutes_with(system.pair(k, l)):
                violations.append(("disjoint", (i, j), (k, l)))
    for i, j, k in itertools.combinations(range(system.n), 3):
        for (a, b), rest in (
            ((i, j), ((i, k), (j, k))),
            ((i, k), ((i, j), (j, k))),
            ((j, k), ((i, j), (i, k))),
        ):
            other = system.pair(*rest[0]) + system.pair(*rest[1])
            if not system.pair(a, b).commutes_with(other):
                violations.append(("triple", (a, b), rest))
    return tuple(violations)


def kappa(system):
    """The scalar c with A_{full set} = c*I, or None when not scalar."""
    return residue_A(system, range(system.n)).scalar_value()


def addition(system, p, q, lam):
    """Shift the residue of the pair {p,q} by lam times the identity."""
    lam = _frac(lam)
    key = _pair_key(p, q)
    _check_range(system, set(key))
    table = dict(system._residues)
    table[key] = table[key] + RationalMatrix.scalar(system.rank, lam)
    return KzSystem(system.n, system.rank, table, check=True)


def permute(system, sigma):
    """Relabel coordinates: the new pair {sigma(i),sigma(j)} carries A_{ij}."""
    if not isinstance(sigma, dict):
        sigma = {i: s for i, s in enumerate(sigma)}
    sigma = {int(k): int(v) for k, v in sigma.items()}
    if set(sigma) != set(range(system.n)) or set(sigma.values()) != set(
        range(system.n)
    ):
        raise ContractError("sigma must be a permutation of 0..n-1")
    table = {}
    for (i, j), mat in system.pairs():
        table[_pair_key(sigma[i], sigma[j])] = mat
    return KzSystem(system.n, system.rank, table, check=True)


# ---------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class SpectraReport:
    """Joint spectrum per tournament family, in canonical member order.

    With `shortened` the component belonging to the full coordinate set is
    projected away from every tuple.
    """

    n: int
    rank: int
    shortened: bool
    entries: tuple  # ((family, ordered member tuple, JointSpectrum), ...)

    def families(self):
        return tuple(fam for fam, _, _ in self.entries)

    def get(self, family):
        if not isinstance(family, MaximalCommutingFamily):
            family = parse_family(family, self.n)
        for fam, _, spectrum in self.entries:
            if fam == family:
                return spectrum
        raise ContractError(f"family {serialize_family(family)} not in report")

    def to_json_obj(self):
        out = []
        for fam, _, spectrum in self.entries:
            out.append(
                {
                    "family": serialize_family(fam),
                    "spectrum": spectrum.to_json_obj(),
                }
            )
        return out

    def __eq__(self, other):
        if not isinstance(other, SpectraReport):
            return NotImplemented
        return (
            self.n == other.n
            and self.shortened == other.shortened
            and {f: s for f, _, s in self.entries}
            == {f: s for f, _, s in other.entries}
        )


def _family_matrices(system, family):
    ordered = canonical_order(family)
    mats = [residue_A(system, member) for member in ordered.order]
    return ordered, mats


def spectra(system, shortened=False):
    """Joint spectra of the grouped residues over every tournament family."""
    entries = []
    for family in enumerate_families(range(system.n)):
        ordered, mats = _family_matrices(system, family)
        spectrum = joint_spectrum(mats, ambient=system.rank)
        order = ordered.order
        if shortened:
            full_pos = order.index(family.labels)
            keep = [k for k in range(len(order)) if k != full_pos]
            spectrum = spectrum.project(keep)
            order = tuple(m for m in order if m != family.labels)
        entries.append((family, order, spectrum))
    entries.sort(key=lambda e: serialize_family(e[0]))
    return SpectraReport(
        n=system.n, rank=system.rank, shortened=shortened, entries=tuple(entries)
    )


def spectrum_of_combination(system, family, coefficients):
    """Spectrum of a rational combination sum_I c_I A_I over one family.

    Computed from the family's joint spectrum by mapping each joint tuple
    to its weighted sum, never by re-solving the combined matrix.
    """
    if not isinstance(family, MaximalCommutingFamily):
        family = parse_family(family, system.n)
    coeffs = {}
    for key, value in dict(coefficients).items():
        member = frozenset(int(x) for x in key)
        if member not in family.members:
            raise ContractError(
                f"coefficient key {set(member)} is not a member of the family"
            )
        coeffs[member] = _frac(value)
    ordered, mats = _family_matrices(system, family)
    spectrum = joint_spectrum(mats, ambient=system.rank)
    weights = [coeffs.get(member, Fraction(0)) for member in ordered.order]

    def combine(values):
        return (sum((w * v for w, v in zip(weights, values)), Fraction(0)),)

    return spectrum.map_tuples(combine, new_arity=1)


def pseudo_singular_infinity(system):
    """The list [mu_0..mu_{n-1}] when every A_{i,inf} is scalar, else None."""
    out = []
    for i in range(system.n):
        value = residue_A(system, {i, INFINITY}).scalar_value()
        if value is None:
            return None
        out.append(value)
    return out


def shift_infinity_residue(system, lam):
    """Shift the infinity residue at coordinate 0 by -lam, leaving every
    other infinity residue unchanged.

    Achieved by three scalar shifts: +lam/2 on {0,1} and {0,2}, -lam/2 on
    {1,2}.  (A shift of c on a pair lowers both endpoints' infinity
    residues by c, so the half-weights cancel everywhere except at 0.)
    """
    lam = _frac(lam)
    if system.n < 3:
        raise ContractError("the shift needs at least 3 coordinates")
    half = lam / 2
    out = addition(system, 0, 1, half)
    out = addition(out, 0, 2, half)
    return addition(out, 1, 2, -half)


# ---------------------------------------------------------------------------
# fixed singular points


class FixedPointSystem:
    """A system extended by m fixed singular points.

    The moving coordinates keep the base system's pair residues; each
    (moving i, fixed q) pair carries an extra matrix.  Fixed labels are
    n..n+m-1.
    """

    __slots__ = ("base", "m", "_extra")

    def __init__(self, base, m, extra, check=True):
        m = int(m)
        if m < 1:
            raise ContractError("need at least one fixed point")
        n, rank = base.n, base.rank
        table = {}
        for key, mat in dict(extra).items():
            i, q = (int(x) for x in key)
            if not 0 <= i < n:
                raise ContractError(f"moving label {i} out of range")
            if not n <= q < n + m:
                raise ContractError(
                    f"fixed label {q} out of range {n}..{n + m - 1}"
                )
            if not isinstance(mat, RationalMatrix):
                mat = RationalMatrix(mat)
            if mat.rows != rank or mat.cols != rank:
                raise ContractError("extra residue has the wrong size")
            table[(i, q)] = mat
        zero = RationalMatrix.zero(rank, rank)
        for i in range(n):
            for q in range(n, n + m):
                table.setdefault((i, q), zero)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "_extra", table)
        if check:
            violations = check_fixed_integrability(self)
            if violations:
                raise IntegrabilityError(violations)

    def __setattr__(self, name, value):
        raise AttributeError("FixedPointSystem is immutable")

    @property
    def fixed_labels(self):
        return tuple(range(self.base.n, self.base.n + self.m))

    def extra(self, i, q):
        return self._extra[(int(i), int(q))]

    def __eq__(self, other):
        if not isinstance(other, FixedPointSystem):
            return NotImplemented
        return (
            self.base == other.base
            and self.m == other.m
            and self._extra == other._extra
        )

    def __repr__(self):
        return f"FixedPointSystem(n={self.base.n}, m={self.m}, rank={self.base.rank})"


def check_fixed_integrability(fps):
    """Violated bracket conditions of the fixed-point extension."""
    base = fps.base
    n = base.n
    fixed = fps.fixed_labels
    violations = list(check_integrability(base))

    def name_a(i, j):
        return f"A_({i},{j})"

    def name_b(i, q):
        return f"B_({i},{q})"

    for (i, q), (j, r) in itertools.combinations(
        [(i, q) for i in range(n) for q in fixed], 2
    ):
        if i != j and q != r:
            if not fps.extra(i, q).commutes_with(fps.extra(j, r)):
                violations.append(("fixed", name_b(i, q), name_b(j, r)))
    for i, j in itertools.combinations(range(n), 2):
        for k in range(n):
            if k in (i, j):
                continue
            for q in fixed:
                if not base.pair(i, j).commutes_with(fps.extra(k, q)):
                    violations.append(("fixed", name_a(i, j), name_b(k, q)))
    for i, j in itertools.combinations(range(n), 2):
        for q in fixed:
            pair_sum = fps.extra(i, q) + fps.extra(j, q)
            if not base.pair(i, j).commutes_with(pair_sum):
                violations.append(
                    ("fixed", name_a(i, j), f"{name_b(i, q)}+{name_b(j, q)}")
                )
            for a, b in ((i, j), (j, i)):
                rhs = base.pair(i, j) + fps.extra(b, q)
                if not fps.extra(a, q).commutes_with(rhs):
                    violations.append(
                        (
                            "fixed",
                            name_b(a, q),
                            f"{name_a(i, j)}+{name_b(b, q)}",
                        )
                    )
    return tuple(violations)


def fixed_point_residue(fps, I, Q):
    """Grouped residue of moving subset I relative to fixed subset Q."""
    I = {int(x) for x in I}
    Q = {int(x) for x in Q}
    _check_range(fps.base, I)
    for q in Q:
        if q not in fps.fixed_labels:
            raise ContractError(f"{q} is not a fixed label")
    total = residue_A(fps.base, I)
    for i in sorted(I):
        for q in sorted(Q):
            total = total + fps.extra(i, q)
    return total


def embedded_system(fps):
    """The fixed-point system as an unchecked plain system on n+m labels.

    Cross residues are the extras, fixed-fixed residues are zero.  Used to
    express grouped residues of combined label sets.
    """
    base = fps.base
    table = {key: mat for key, mat in base._residues.items()}
    for (i, q), mat in fps._extra.items():
        table[_pair_key(i, q)] = mat
    return KzSystem(base.n + fps.m, base.rank, table, check=False)


# ---------------------------------------------------------------------------
# serialization


def system_to_json(system, meta=None):
    """Canonical JSON text for a system (sorted pair keys, rational strings)."""
    obj = {
        "n": system.n,
        "rank": system.rank,
        "residues": {
            f"{i},{j}": mat.to_strings() for (i, j), mat in system.pairs()
        },
    }
    if meta:
        obj["meta"] = dict(meta)
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def system_from_json(text, check=True):
    """Parse the JSON system format; integrability checked by default."""
    try:
        obj = json.loads(text) if isinstance(text, str) else text
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad system JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ParseError("system JSON must be an object")
    for field in ("n", "rank", "residues"):
        if field not in obj:
            raise ParseError(f"system JSON lacks the {field!r} field")
    try:
        n = int(obj["n"])
        rank = int(obj["rank"])
    except (TypeError, ValueError):
        raise ParseError("n and rank must be integers") from None
    residues = {}
    if not isinstance(obj["residues"], dict):
        raise ParseError("residues must be an object keyed by 'i,j'")
    for key, rows in obj["residues"].items():
        try:
            i, j = (int(x) for x in key.split(","))
        except ValueError:
            raise ParseError(f"bad residue key {key!r}") from None
        try:
            mat = RationalMatrix.from_strings(rows)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad matrix for {key!r}: {exc}") from None
        residues[(i, j)] = mat
    try:
        return KzSystem(n, rank, residues, check=check)
    except IntegrabilityError:
        raise
    except ContractError as exc:
        raise ParseError(str(exc)) from None
