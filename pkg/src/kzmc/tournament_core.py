"""Single-elimination tournaments as maximal commuting set families.

A tournament on a finite label set L is encoded by the family of "games":
subsets of L of size >= 2 that are pairwise disjoint or strictly nested,
with |family| = |L| - 1 and L itself a member.  This module provides
counting, enumeration, loser maps, canonical orderings, team deletion and
insertion, the md/me set transformations, paired families with fixed
labels, and text/TeX bracket rendering.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractError, ParseError


class _InfinityType:
    """Distinguished label for the point at infinity."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_InfinityType, ())


INFINITY = _InfinityType()


def _as_member(s):
    return frozenset(int(x) for x in s)


# ---------------------------------------------------------------------------
# counting


def count_sequences(n_max):
    """Rows (n, T_n, W_n, U_n, K_n) for n = 2..n_max.

    T: plane bracket drawings; W: brackets distinguished by the winner's
    route (shape with a marked leaf); U: bracket shapes; K: fully labeled
    tournaments, K_n = (2n-3)!!.  All by the standard convolution
    recurrences with T_1 = W_1 = U_1 = K_1 = 1.
    """
    if n_max < 2:
        raise ContractError("n_max must be >= 2")
    T = {1: 1}
    W = {1: 1}
    U = {1: 1}
    K = {1: 1}
    for n in range(2, n_max + 1):
        T[n] = sum(T[k] * T[n - k] for k in range(1, n))
        W[n] = sum(W[k] * U[n - k] for k in range(1, n))
        u2 = sum(U[k] * U[n - k] for k in range(1, n)) + (U[n // 2] if n % 2 == 0 else 0)
        assert u2 % 2 == 0
        U[n] = u2 // 2
        k2 = sum(math.comb(n, k) * K[k] * K[n - k] for k in range(1, n))
        assert k2 % 2 == 0
        K[n] = k2 // 2
    return [(n, T[n], W[n], U[n], K[n]) for n in range(2, n_max + 1)]


def double_factorial_odd(n):
    """(2n-3)!! — the number of labeled tournaments on n teams."""
    out = 1
    for k in range(1, 2 * n - 2, 2):
        out *= k
    return out


# ---------------------------------------------------------------------------
# the family type


@dataclass(frozen=True)
class MaximalCommutingFamily:
    """A tournament as a maximal commuting family of label subsets."""

    labels: frozenset
    members: frozenset

    def __init__(self, members, labels=None):
        members = frozenset(_as_member(m) for m in members)
        if labels is None:
            labels = frozenset().union(*members) if members else frozenset()
        else:
            labels = frozenset(int(x) for x in labels)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "members", members)
        self._validate()

    def _validate(self):
        if len(self.labels) < 2:
            raise ContractError("a family needs at least 2 labels")
        if any(x < 0 for x in self.labels):
            raise ContractError("labels must be non-negative integers")
        for m in self.members:
            if len(m) < 2:
                raise ContractError(f"member {set(m)} has fewer than 2 elements")
            if not m <= self.labels:
                raise ContractError(f"member {set(m)} is not a subset of the labels")
        commuting, _ = _pairwise_commuting(self.members)
        if not commuting:
            raise ContractError("members are neither disjoint nor nested")
        if self.labels not in self.members:
            raise ContractError("the full label set must be a member")
        if len(self.members) != len(self.labels) - 1:
            raise ContractError(
                f"expected {len(self.labels) - 1} members, got {len(self.members)}"
            )

    @property
    def n(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, item):
        return frozenset(item) in self.members

    def split(self, member):
        """The unique decomposition of a member into its two game sides.

        Each side is either a smaller member or a singleton; returned as a
        pair of frozensets ordered by minimum element.
        """
        member = frozenset(member)
        if member not in self.members:
            raise ContractError(f"{set(member)} is not a member")
        proper = [m for m in self.members if m < member]
        maximal = [
            m for m in proper if not any(m < other for other in proper)
        ]
        covered = frozenset().union(*maximal) if maximal else frozenset()
        parts = maximal + [frozenset([x]) for x in member - covered]
        if len(parts) != 2:
            raise ContractError("member does not split into exactly two sides")
        parts.sort(key=min)
        return parts[0], parts[1]

    def first_game(self, label):
        """The smallest member containing the label (the team's first game)."""
        if label not in self.labels:
            raise ContractError(f"label {label} not in the family")
        games = [m for m in self.members if label in m]
        return min(games, key=len)

    def serialize(self, shortened=False):
        return serialize_family(self, shortened)

    def __repr__(self):
        return f"Family[{serialize_family(self)}]"


def _pairwise_commuting(members):
    """(ok, witness) where ok means pairwise disjoint-or-strictly-nested."""
    ms = list(members)
    for a, b in itertools.combinations(ms, 2):
        if a & b and not (a < b or b < a):
            return False, (a, b)
    return True, None


def is_maximal_commuting(sets, labels):
    """(commuting, maximal) for an arbitrary collection of subsets."""
    labels = frozenset(int(x) for x in labels)
    members = [frozenset(int(x) for x in s) for s in sets]
    member_set = set(members)
    ok = (
        len(member_set) == len(members)
        and all(len(m) >= 2 and m <= labels for m in members)
        and _pairwise_commuting(members)[0]
    )
    if not ok:
        return False, False
    universe = sorted(labels)
    for size in range(2, len(universe) + 1):
        for combo in itertools.combinations(universe, size):
            cand = frozenset(combo)
            if cand in member_set:
                continue
            if _pairwise_commuting(list(member_set) + [cand])[0]:
                return True, False
    return True, True


# ---------------------------------------------------------------------------
# enumeration

_FAMILY_CACHE = {}


def _member_sets(labels):
    """All member sets of maximal families on the given labels (with L)."""
    labels = frozenset(labels)
    cached = _FAMILY_CACHE.get(labels)
    if cached is not None:
        return cached
    if len(labels) == 1:
        result = (frozenset(),)
        _FAMILY_CACHE[labels] = result
        return result
    lo = min(labels)
    rest = sorted(labels - {lo})
    out = []
    for mask in range(2 ** len(rest) - 1):
        side_a = frozenset([lo] + [rest[i] for i in range(len(rest)) if mask >> i & 1])
        side_b = labels - side_a
        for fa in _member_sets(side_a):
            for fb in _member_sets(side_b):
                out.append(fa | fb | {labels})
    result = tuple(out)
    _FAMILY_CACHE[labels] = result
    return result


def enumerate_families(labels):
    """All maximal commuting families on the labels, canonically ordered."""
    labels = frozenset(int(x) for x in labels)
    if len(labels) < 2:
        raise ContractError("need at least 2 labels to enumerate families")
    families = [MaximalCommutingFamily(ms, labels) for ms in _member_sets(labels)]
    families.sort(key=serialize_family)
    return tuple(families)


# ---------------------------------------------------------------------------
# serialization


def _member_key(m):
    return (-len(m), tuple(sorted(m)))


def serialize_member(m):
    return "{" + ",".join(str(x) for x in sorted(m)) + "}"


def serialize_family(family, shortened=False):
    """Canonical text form: members sorted by size descending, then lex."""
    members = sorted(family.members, key=_member_key)
    if shortened:
        members = [m for m in members if m != family.labels]
    return ";".join(serialize_member(m) for m in members)


def parse_family(text, n=None):
    """Parse the `{0,1};{0,1,2,3};{2,3}` grammar into a family.

    With `n` given, labels are 0..n-1 and a missing full set is added (so
    shortened output round-trips).  Without `n`, the text must already
    contain the full set (the union of all members).
    """
    if not isinstance(text, str):
        raise ParseError("family text must be a string")
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty family text")
    members = []
    for idx, chunk in enumerate(stripped.split(";")):
        part = chunk.strip()
        if not (part.startswith("{") and part.endswith("}")):
            raise ParseError(f"member {idx + 1}: expected braces, got {part!r}")
        inner = part[1:-1].strip()
        if not inner:
            raise ParseError(f"member {idx + 1}: empty set")
        elems = []
        for tok in inner.split(","):
            tok = tok.strip()
            if not tok.isdigit():
                raise ParseError(f"member {idx + 1}: bad label {tok!r}")
            elems.append(int(tok))
        member = frozenset(elems)
        if len(member) != len(elems):
            raise ParseError(f"member {idx + 1}: repeated label")
        members.append(member)
    if len(set(members)) != len(members):
        raise ParseError("repeated member")
    if n is not None:
        labels = frozenset(range(int(n)))
        full = labels
        if full not in members:
            members.append(full)
        return MaximalCommutingFamily(members, labels)
    labels = frozenset().union(*members)
    if labels not in members:
        raise ParseError(
            "family text lacks the full label set; pass n to disambiguate"
        )
    return MaximalCommutingFamily(members, labels)


def relabel_family(family, mapping):
    """Apply an injective label mapping to a family."""
    mapping = {int(k): int(v) for k, v in dict(mapping).items()}
    if set(mapping) != set(family.labels):
        raise ContractError("relabeling must cover exactly the labels")
    if len(set(mapping.values())) != len(mapping):
        raise ContractError("relabeling must be injective")
    members = [frozenset(mapping[x] for x in m) for m in family.members]
    return MaximalCommutingFamily(members)


def normalize_labels(family):
    """Relabel onto 0..n-1 by ascending label; returns (family, mapping)."""
    mapping = {old: new for new, old in enumerate(sorted(family.labels))}
    return relabel_family(family, mapping), mapping


# ---------------------------------------------------------------------------
# loser maps


class LoserMap:
    """Choice of the losing side for every game of a family."""

    __slots__ = ("family", "_losers")

    def __init__(self, family, losers):
        losers = {frozenset(k): frozenset(v) for k, v in dict(losers).items()}
        if set(losers) != set(family.members):
            raise ContractError("loser map must cover exactly the members")
        for member, losing in losers.items():
            sides = family.split(member)
            if losing not in sides:
                raise ContractError(
                    f"{set(losing)} is not a side of the game {set(member)}"
                )
        self.family = family
        self._losers = losers

    def loser(self, member):
        return self._losers[frozenset(member)]

    def winner_side(self, member):
        member = frozenset(member)
        a, b = self.family.split(member)
        losing = self._losers[member]
        return b if losing == a else a

    def items(self):
        return sorted(self._losers.items(), key=lambda kv: _member_key(kv[0]))

    def __eq__(self, other):
        if not isinstance(other, LoserMap):
            return NotImplemented
        return self.family == other.family and self._losers == other._losers

    def __hash__(self):
        return hash((self.family, tuple(self.items())))

    def __repr__(self):
        body = ", ".join(
            f"{serialize_member(m)}->{serialize_member(l)}" for m, l in self.items()
        )
        return f"LoserMap({body})"


def canonical_loser_map(family, winner):
    """The loser map b^winner with the deterministic tie-break.

    In games containing the winner, the side without the winner loses; in
    all other games the side with the smaller minimum label loses.
    """
    winner = int(winner)
    if winner not in family.labels:
        raise ContractError(f"winner {winner} is not a label of the family")
    losers = {}
    for member in family.members:
        a, b = family.split(member)
        if winner in member:
            losers[member] = a if winner in b else b
        else:
            losers[member] = a if min(a) < min(b) else b
    return LoserMap(family, losers)


def players(family, loser_map, member):
    """The two teams that actually play the game `member`.

    Everyone eliminated in a strictly earlier game inside the member is
    removed; exactly two labels remain.
    """
    member = frozenset(member)
    if member not in family.members:
        raise ContractError(f"{set(member)} is not a member")
    eliminated = set()
    for sub in family.members:
        if sub < member:
            eliminated |= loser_map.loser(sub)
    remaining = member - eliminated
    if len(remaining) != 2:
        raise ContractError("game does not reduce to exactly two players")
    return remaining


def losing_player(family, loser_map, member):
    """The label eliminated in the game `member`."""
    (loser,) = players(family, loser_map, member) & loser_map.loser(member)
    return loser


# ---------------------------------------------------------------------------
# canonical ordering


@dataclass(frozen=True)
class OrderedFamily:
    """A family with its canonical member order and chain grouping."""

    family: MaximalCommutingFamily
    order: tuple
    groups: tuple  # ((chain member, (side members...)), ...)

    def position(self, member):
        return self.order.index(frozenset(member))


def canonical_order(family):
    """Order members: the 0-chain ascending, each followed by its side group.

    The chain is all members containing 0, ascending by size.  After chain
    member C (with predecessor P, starting from {0}) come the members
    inside C - P, sorted by (minimum element, size descending) so that
    supersets precede their subsets.
    """
    if 0 not in family.labels:
        raise ContractError("canonical order needs 0 among the labels; relabel first")
    chain = sorted((m for m in family.members if 0 in m), key=len)
    order = []
    groups = []
    prev = frozenset([0])
    for c in chain:
        window = c - prev
        side = [m for m in family.members if 0 not in m and m <= window]
        side.sort(key=lambda m: (min(m), -len(m)))
        order.append(c)
        order.extend(side)
        groups.append((c, tuple(side)))
        prev = c
    if len(order) != len(family.members):
        raise ContractError("ordering failed to cover every member")
    return OrderedFamily(family, tuple(order), tuple(groups))


# ---------------------------------------------------------------------------
# deletion / insertion


@dataclass(frozen=True)
class Segment:
    """A vertical segment of the bracket: a leaf edge or a game's out-edge."""

    kind: str  # "leaf" | "game"
    target: object  # label for "leaf", member (frozenset) for "game"

    def __post_init__(self):
        if self.kind not in ("leaf", "game"):
            raise ContractError(f"unknown segment kind {self.kind!r}")
        if self.kind == "leaf":
            object.__setattr__(self, "target", int(self.target))
        else:
            object.__setattr__(self, "target", frozenset(self.target))

    def __repr__(self):
        if self.kind == "leaf":
            return f"Segment(leaf {self.target})"
        return f"Segment(game {serialize_member(self.target)})"


def all_segments(family):
    """The 2n-1 insertion segments: n leaves plus n-1 game out-edges."""
    leaves = [Segment("leaf", x) for x in sorted(family.labels)]
    games = [
        Segment("game", m) for m in sorted(family.members, key=_member_key)
    ]
    return tuple(leaves + games)


def segment_is_basic(segment):
    """Basic insertions attach to a leaf: the new game is both teams' first."""
    return segment.kind == "leaf"


def segment_is_top(family, segment):
    """Top insertions attach to the root: the new team plays the final."""
    return segment.kind == "game" and segment.target == family.labels


def delete_team(family, team):
    """Remove a team, merging away its first game.

    Returns (smaller family, segment) such that `insert_team` with that
    segment restores the original family.
    """
    team = int(team)
    if team not in family.labels:
        raise ContractError(f"label {team} not in the family")
    if len(family.labels) < 3:
        raise ContractError("cannot delete from a 2-team family")
    first = family.first_game(team)
    a, b = family.split(first)
    opponent = b if a == frozenset([team]) else a
    if frozenset([team]) not in (a, b):
        raise ContractError("team's first game does not isolate the team")
    members = [m - {team} for m in family.members]
    members = {m for m in members if len(m) >= 2}
    new_family = MaximalCommutingFamily(members, family.labels - {team})
    if len(opponent) == 1:
        segment = Segment("leaf", next(iter(opponent)))
    else:
        segment = Segment("game", opponent)
    return new_family, segment


def insert_team(family, team, segment):
    """Insert a new team whose first game hangs on the given segment."""
    team = int(team)
    if team in family.labels:
        raise ContractError(f"label {team} already present")
    if segment.kind == "leaf":
        j = segment.target
        if j not in family.labels:
            raise ContractError(f"segment leaf {j} not in the family")
        anchor = frozenset([j])
    else:
        anchor = segment.target
        if anchor not in family.members:
            raise ContractError(
                f"segment game {serialize_member(anchor)} not in the family"
            )
    members = {(m | {team}) if anchor < m else m for m in family.members}
    members.add(anchor | {team})
    return MaximalCommutingFamily(members, family.labels | {team})


# ---------------------------------------------------------------------------
# md / me and the induced family transform


def md_set(i, J, I):
    """I + {i} when I contains J, otherwise I - {i}."""
    I = frozenset(I)
    J = frozenset(J)
    if not I or not J:
        raise ContractError("md needs nonempty sets")
    return I | {i} if J <= I else I - {i}


def me_set(i, J, I):
    """1 when i is in I and I contains J, else 0."""
    I = frozenset(I)
    J = frozenset(J)
    if not I or not J:
        raise ContractError("me needs nonempty sets")
    return 1 if i in I and J <= I else 0


def mc_family_transform(family, variant):
    """The tournament after team 0 is deleted and re-inserted.

    `variant` selects where 0 re-enters: a member J (0 plays the winner of
    the game J once 0's old slot is removed), a team label j (0 plays j
    first), or INFINITY (0 enters at the final, the top insertion).
    """
    if 0 not in family.labels:
        raise ContractError("family transform needs 0 among the labels")
    smaller, _ = delete_team(family, 0)
    if variant is INFINITY:
        segment = Segment("game", smaller.labels)
    elif isinstance(variant, (set, frozenset)):
        J = frozenset(variant)
        if J not in family.members:
            raise ContractError(f"{set(J)} is not a member of the family")
        target = J - {0}
        if len(target) == 1:
            segment = Segment("leaf", next(iter(target)))
        elif target == smaller.labels:
            segment = Segment("game", smaller.labels)
        else:
            if target not in smaller.members:
                raise ContractError("member does not survive the deletion of 0")
            segment = Segment("game", target)
    elif isinstance(variant, int) and not isinstance(variant, bool):
        j = variant
        if j not in family.labels or j == 0:
            raise ContractError(f"team variant needs a label != 0, got {j}")
        segment = Segment("leaf", j)
    else:
        raise ContractError(f"unsupported variant {variant!r}")
    return insert_team(smaller, 0, segment)


# ---------------------------------------------------------------------------
# paired families (moving labels + fixed labels)


@dataclass(frozen=True)
class PairedFamily:
    """A partition of the moving labels with one subfamily per fixed label."""

    moving_labels: frozenset
    fixed_labels: frozenset
    partition: tuple  # ((fixed label, frozenset part), ...) sorted by label
    subfamilies: tuple  # ((fixed label, family-or-None), ...) sorted by label
    hat_sets: tuple  # nested chain, one set per fixed label after the first

    def part(self, j):
        return dict(self.partition)[j]

    def subfamily(self, j):
        return dict(self.subfamilies)[j]


def _paired_sort_key(p):
    parts = tuple(
        (j, tuple(sorted(s))) for j, s in p.partition
    )
    fams = tuple(
        (j, "" if f is None else serialize_family(f)) for j, f in p.subfamilies
    )
    return (parts, fams)


def enumerate_paired_families(moving, fixed):
    """All paired families: a partition of the moving labels indexed by the
    fixed labels (empty parts allowed) with a maximal commuting family on
    each nonempty part plus its fixed label."""
    moving = frozenset(int(x) for x in moving)
    fixed = frozenset(int(x) for x in fixed)
    if not moving or not fixed:
        raise ContractError("both label sets must be nonempty")
    if moving & fixed:
        raise ContractError("moving and fixed labels must be disjoint")
    fixed_sorted = sorted(fixed)
    moving_sorted = sorted(moving)
    out = []
    for choice in itertools.product(fixed_sorted, repeat=len(moving_sorted)):
        parts = {j: set() for j in fixed_sorted}
        for x, j in zip(moving_sorted, choice):
            parts[j].add(x)
        per_part_families = []
        for j in fixed_sorted:
            if parts[j]:
                per_part_families.append(
                    [
                        MaximalCommutingFamily(ms, frozenset(parts[j]) | {j})
                        for ms in _member_sets(frozenset(parts[j]) | {j})
                    ]
                )
            else:
                per_part_families.append([None])
        for combo in itertools.product(*per_part_families):
            partition = tuple(
                (j, frozenset(parts[j])) for j in fixed_sorted
            )
            subfamilies = tuple(zip(fixed_sorted, combo))
            hat_sets = _hat_chain(partition)
            out.append(
                PairedFamily(
                    moving_labels=moving,
                    fixed_labels=fixed,
                    partition=partition,
                    subfamilies=subfamilies,
                    hat_sets=hat_sets,
                )
            )
    out.sort(key=_paired_sort_key)
    return tuple(out)


def _hat_chain(partition):
    """The nested sets covering parts 1..j of the sorted fixed labels."""
    acc = set()
    chain = []
    for idx, (j, part) in enumerate(partition):
        acc |= part | {j}
        if idx >= 1:
            chain.append(frozenset(acc))
    return tuple(chain)


def hat_family(paired):
    """All subfamily members together with the chain of hat sets.

    The result is itself a maximal commuting family on the union of the
    moving and fixed labels (returned as a plain set of frozensets).
    """
    members = set()
    for _, fam in paired.subfamilies:
        if fam is not None:
            members |= fam.members
    members |= set(paired.hat_sets)
    return frozenset(members)


# ---------------------------------------------------------------------------
# rendering


def _layout(family, winner=None):
    """Shared bracket geometry.

    Leaves get rows 0, 2, 4, ... in a deterministic in-order traversal
    (game sides ordered by minimum label).  Games get the midpoint row of
    their two sides and a column one past their deepest side.  Returns
    (leaf order, node positions {node: (row, col)}) where nodes are
    singleton frozensets or members.
    """
    leaves = []
    positions = {}

    def walk(node):
        if len(node) == 1:
            row = 2 * len(leaves)
            leaves.append(next(iter(node)))
            positions[node] = (row, 0)
            return row, 0
        a, b = family.split(node)
        (ra, ca) = walk(a)
        (rb, cb) = walk(b)
        row = (ra + rb) // 2
        col = 1 + max(ca, cb)
        positions[node] = (row, col)
        return row, col

    walk(family.labels)
    return leaves, positions


def render_family(family, winner=None, format="ascii"):
    """Deterministic bracket picture of the tournament."""
    if format == "ascii":
        return _render_ascii(family, winner)
    if format == "tex":
        return _render_tex(family, winner)
    raise ContractError(f"unknown render format {format!r}")


def _render_ascii(family, winner=None):
    leaves, positions = _layout(family, winner)
    max_col = max(c for _, c in positions.values())
    label_width = max(
        len(str(x)) + (1 if winner is not None and x == winner else 0)
        for x in family.labels
    )
    col_x = lambda c: label_width + 1 + 3 * c
    height = 2 * len(leaves) - 1
    width = col_x(max_col) + 2
    grid = [[" "] * width for _ in range(height)]

    def hline(row, x0, x1):
        for x in range(x0, x1):
            grid[row][x] = "─"

    def put(row, x, ch):
        grid[row][x] = ch

    for node, (row, col) in positions.items():
        if len(node) == 1:
            label = str(next(iter(node)))
            if winner is not None and next(iter(node)) == winner:
                label += "*"
            for i, ch in enumerate(label):
                grid[row][i] = ch
    for node, (row, col) in sorted(
        positions.items(), key=lambda kv: len(kv[0])
    ):
        if len(node) == 1:
            continue
        a, b = family.split(node)
        (ra, _) = positions[a]
        (rb, _) = positions[b]
        top, bottom = min(ra, rb), max(ra, rb)
        x = col_x(positions[node][1])
        for side in (a, b):
            rs, cs = positions[side]
            hline(rs, col_x(cs) + 1 if len(side) > 1 else label_width, x)
        for r in range(top, bottom + 1):
            if r == top:
                put(r, x, "┐")
            elif r == bottom:
                put(r, x, "┘")
            elif r == row:
                put(r, x, "├")
            else:
                put(r, x, "│")
    root_row, root_col = positions[family.labels]
    hline(root_row, col_x(root_col) + 1, col_x(root_col) + 2)
    return "\n".join("".join(r).rstrip() for r in grid) + "\n"


def _render_tex(family, winner=None):
    leaves, positions = _layout(family, winner)
    max_col = max(c for _, c in positions.values())
    height = 2 * len(leaves) - 1
    unit_x = 3
    x_of = lambda c: 2 + unit_x * c
    y_of = lambda r: height - r
    lines = [
        "\\documentclass{article}",
        "\\pagestyle{empty}",
        "\\setlength{\\unitlength}{6pt}",
        "\\begin{document}",
        f"\\begin{{picture}}({x_of(max_col) + 3},{height + 2})(0,0)",
    ]
    for node, (row, col) in sorted(
        positions.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))
    ):
        if len(node) == 1:
            label = str(next(iter(node)))
            if winner is not None and next(iter(node)) == winner:
                label += "^{*}"
            lines.append(
                f"\\put(1,{y_of(row)}){{\\makebox(0,0)[r]{{${label}$}}}}"
            )
            continue
        a, b = family.split(node)
        ra, rb = positions[a][0], positions[b][0]
        top, bottom = min(ra, rb), max(ra, rb)
        x = x_of(col)
        for side in (a, b):
            rs, cs = positions[side]
            x0 = x_of(cs) if len(side) > 1 else 2
            lines.append(
                f"\\put({x0},{y_of(rs)}){{\\line(1,0){{{x - x0}}}}}"
            )
        lines.append(
            f"\\put({x},{y_of(bottom)}){{\\line(0,1){{{bottom - top}}}}}"
        )
    root_row, root_col = positions[family.labels]
    lines.append(
        f"\\put({x_of(root_col)},{y_of(root_row)}){{\\line(1,0){{1}}}}"
    )
    lines.append("\\end{picture}")
    lines.append("\\end{document}")
    return "\n".join(lines) + "\n"
