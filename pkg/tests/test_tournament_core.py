"""Bracket combinatorics: enumeration, orders, insertions, transforms."""

from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kzmc import (
    INFINITY,
    ContractError,
    ParseError,
    all_segments,
    canonical_loser_map,
    canonical_order,
    count_sequences,
    delete_team,
    double_factorial_odd,
    enumerate_families,
    enumerate_paired_families,
    hat_family,
    insert_team,
    is_maximal_commuting,
    losing_player,
    mc_family_transform,
    md_set,
    me_set,
    normalize_labels,
    parse_family,
    players,
    relabel_family,
    serialize_family,
)

COUNT_TABLE = [
    (2, 1, 1, 1, 1),
    (3, 2, 2, 1, 3),
    (4, 5, 4, 2, 15),
    (5, 14, 9, 3, 105),
    (6, 42, 20, 6, 945),
    (7, 132, 46, 11, 10395),
    (8, 429, 106, 23, 135135),
    (9, 1430, 248, 46, 2027025),
]

ELEVEN_TEXT = (
    "{0,5,6};{5,6};{0,1,2,3,4,5,6};{1,2,3,4};{1,2};{3,4};"
    "{0,1,2,3,4,5,6,7,8,9,10};{7,8,9,10};{7,8};{9,10}"
)


def compatible(a, b):
    return a <= b or b <= a or not (a & b)


def brute_force_families(n):
    """Maximal cliques of the compatibility graph on all >=2-subsets.

    Independent oracle: a family is exactly a pairwise disjoint-or-nested
    collection of subsets to which no further subset can be added.
    """
    pool = [
        frozenset(c)
        for size in range(2, n + 1)
        for c in itertools.combinations(range(n), size)
    ]
    found = set()

    def extend(clique, candidates):
        if not candidates:
            if all(
                any(not compatible(extra, m) for m in clique)
                for extra in pool
                if extra not in clique
            ):
                found.add(frozenset(clique))
            return
        head, rest = candidates[0], candidates[1:]
        extend(clique + [head], [c for c in rest if compatible(head, c)])
        extend(clique, rest)

    extend([], pool)
    return found


def relabelled(family_members, perm):
    return frozenset(
        frozenset(perm[x] for x in member) for member in family_members
    )


def orbit_key(members, n, winner=None):
    """Lexicographically smallest relabelling; identifies the shape."""
    best = None
    for perm in itertools.permutations(range(n)):
        mapping = dict(enumerate(perm))
        text = tuple(
            sorted(
                (tuple(sorted(member)) for member in relabelled(members, mapping)),
                key=lambda m: (-len(m), m),
            )
        )
        key = text if winner is None else (text, mapping[winner])
        if best is None or key < best:
            best = key
    return best


class TestCounting:
    def test_full_table(self):
        assert count_sequences(9) == COUNT_TABLE

    def test_bracket_shape_column_is_catalan(self):
        for n, patterns, _, _, _ in COUNT_TABLE:
            assert patterns == math.comb(2 * (n - 1), n - 1) // n

    def test_labeled_column_is_odd_double_factorial(self):
        for n, _, _, _, labeled in COUNT_TABLE:
            expected = math.prod(range(1, 2 * n - 2, 2))
            assert labeled == expected
            assert double_factorial_odd(n) == expected

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_shape_columns_by_orbit_counting(self, n):
        """Unlabeled counts are orbits of labeled data under relabelling."""
        families = [f.members for f in enumerate_families(range(n))]
        shapes = {orbit_key(fam, n) for fam in families}
        marked = {
            orbit_key(fam, n, winner=w) for fam in families for w in range(n)
        }
        _, _, marked_count, shape_count, _ = COUNT_TABLE[n - 2]
        assert len(shapes) == shape_count
        assert len(marked) == marked_count


class TestEnumeration:
    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_count_is_odd_double_factorial(self, n):
        assert len(enumerate_families(range(n))) == math.prod(
            range(1, 2 * n - 2, 2)
        )

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_matches_brute_force_filter(self, n):
        ours = {frozenset(f.members) for f in enumerate_families(range(n))}
        assert ours == brute_force_families(n)

    def test_every_enumerated_family_is_maximal_commuting(self):
        for fam in enumerate_families(range(5)):
            assert is_maximal_commuting(fam.members, range(5))

    def test_arbitrary_label_sets(self):
        fams = enumerate_families([3, 7, 9])
        assert len(fams) == 3
        for fam in fams:
            assert frozenset({3, 7, 9}) in fam.members

    def test_deterministic_order(self):
        first = [serialize_family(f) for f in enumerate_families(range(5))]
        second = [serialize_family(f) for f in enumerate_families(range(5))]
        assert first == second == sorted(first)


@pytest.fixture(scope="module")
def eleven():
    return parse_family(ELEVEN_TEXT, 11)


class TestElevenTeamFixture:
    def test_canonical_order(self, eleven):
        expected = [
            {0, 5, 6},
            {5, 6},
            {0, 1, 2, 3, 4, 5, 6},
            {1, 2, 3, 4},
            {1, 2},
            {3, 4},
            set(range(11)),
            {7, 8, 9, 10},
            {7, 8},
            {9, 10},
        ]
        ordered = canonical_order(eleven)
        assert [set(m) for m in ordered.order] == expected

    def test_losing_players(self, eleven):
        b0 = canonical_loser_map(eleven, 0)
        ordered = canonical_order(eleven)
        losers = tuple(losing_player(eleven, b0, m) for m in ordered.order)
        assert losers == (6, 5, 4, 2, 1, 3, 10, 8, 7, 9)

    def test_top_game_players(self, eleven):
        b0 = canonical_loser_map(eleven, 0)
        assert players(eleven, b0, frozenset(range(11))) == frozenset({0, 10})

    def test_transform_at_member(self, eleven):
        out = mc_family_transform(eleven, frozenset({3, 4}))
        assert serialize_family(out) == (
            "{0,1,2,3,4,5,6,7,8,9,10};{0,1,2,3,4,5,6};{0,1,2,3,4};"
            "{7,8,9,10};{0,3,4};{1,2};{3,4};{5,6};{7,8};{9,10}"
        )

    def test_transform_at_member_containing_zero(self, eleven):
        out = mc_family_transform(eleven, frozenset(range(7)))
        assert serialize_family(out) == (
            "{0,1,2,3,4,5,6,7,8,9,10};{0,1,2,3,4,5,6};{1,2,3,4,5,6};"
            "{1,2,3,4};{7,8,9,10};{1,2};{3,4};{5,6};{7,8};{9,10}"
        )

    def test_transform_at_team(self, eleven):
        out = mc_family_transform(eleven, 3)
        assert serialize_family(out) == (
            "{0,1,2,3,4,5,6,7,8,9,10};{0,1,2,3,4,5,6};{0,1,2,3,4};"
            "{7,8,9,10};{0,3,4};{0,3};{1,2};{5,6};{7,8};{9,10}"
        )

    def test_transform_at_top(self, eleven):
        out = mc_family_transform(eleven, INFINITY)
        assert serialize_family(out) == (
            "{0,1,2,3,4,5,6,7,8,9,10};{1,2,3,4,5,6,7,8,9,10};{1,2,3,4,5,6};"
            "{1,2,3,4};{7,8,9,10};{1,2};{3,4};{5,6};{7,8};{9,10}"
        )


class TestLoserMapFixtures:
    def test_five_team_loser_sides(self):
        fam = parse_family("{0,1};{2,3};{0,1,2,3};{0,1,2,3,4}")
        b0 = canonical_loser_map(fam, 0)
        assert b0.loser(frozenset({0, 1, 2, 3})) == frozenset({2, 3})
        assert b0.loser(frozenset({0, 1, 2, 3, 4})) == frozenset({4})
        assert b0.loser(frozenset({2, 3})) == frozenset({2})
        assert players(fam, b0, frozenset(range(5))) == frozenset({0, 4})

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_players_always_two(self, n):
        for fam in enumerate_families(range(n)):
            for winner in range(n):
                bw = canonical_loser_map(fam, winner)
                for member in fam.members:
                    pair = players(fam, bw, member)
                    assert len(pair) == 2
                    assert pair <= member

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_winner_on_winning_path(self, n):
        for fam in enumerate_families(range(n)):
            for winner in range(n):
                bw = canonical_loser_map(fam, winner)
                for member in fam.members:
                    if winner in member and not any(
                        winner in bw.loser(sub)
                        for sub in fam.members
                        if sub < member
                    ):
                        assert winner in players(fam, bw, member)


class TestSegmentsAndInsertion:
    def test_segment_count(self):
        fam = parse_family("{0,1};{0,1,2};{0,1,2,3}")
        segs = all_segments(fam)
        assert len(segs) == 7
        kinds = [seg.kind for seg in segs]
        assert kinds.count("leaf") == 4 and kinds.count("game") == 3

    def test_delete_merges_first_game(self):
        fam = parse_family("{0,1};{0,1,2};{0,1,2,3}")
        smaller, segment = delete_team(fam, 3)
        assert serialize_family(smaller) == "{0,1,2};{0,1}"
        assert segment.kind == "game"
        assert insert_team(smaller, 3, segment) == fam

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_delete_then_insert_round_trip(self, n):
        for fam in enumerate_families(range(n)):
            for team in range(n):
                smaller, segment = delete_team(fam, team)
                assert insert_team(smaller, team, segment) == fam

    def test_insert_then_delete_round_trip(self):
        for fam in enumerate_families(range(4)):
            for segment in all_segments(fam):
                bigger = insert_team(fam, 4, segment)
                assert delete_team(bigger, 4) == (fam, segment)

    def test_insertion_bijection_at_four_teams(self):
        images = set()
        for fam in enumerate_families(range(4)):
            for segment in all_segments(fam):
                images.add(insert_team(fam, 4, segment))
        assert len(images) == 105
        assert images == set(enumerate_families(range(5)))

    def test_insert_existing_team_rejected(self):
        fam = parse_family("{0,1};{0,1,2}")
        with pytest.raises(ContractError):
            insert_team(fam, 2, all_segments(fam)[0])

    def test_insert_invalid_segment_rejected(self):
        fam = parse_family("{0,1};{0,1,2}")
        from kzmc import Segment

        with pytest.raises(ContractError):
            insert_team(fam, 3, Segment("leaf", 9))


class TestMdMe:
    def test_worked_values(self):
        assert md_set(0, {3, 4}, {3, 4}) == frozenset({0, 3, 4})
        assert md_set(0, {3, 4}, {0, 5, 6}) == frozenset({5, 6})
        assert me_set(0, {1}, {0, 1, 2}) == 1
        assert me_set(0, {3}, {1, 2}) == 0

    @given(
        st.sets(st.integers(0, 6), min_size=1),
        st.sets(st.integers(0, 6), min_size=1),
        st.integers(0, 6),
    )
    def test_fixed_points(self, I, J, i):
        if (i in I and I >= J) or (i not in I and not I >= J):
            assert md_set(i, J, I) == frozenset(I)
        assert me_set(i, J, I) == (1 if (i in I and I >= J) else 0)


class TestTransformValidity:
    @pytest.mark.parametrize("n", [3, 4])
    def test_all_variants_yield_valid_families(self, n):
        for fam in enumerate_families(range(n)):
            variants = list(fam.members) + list(range(1, n)) + [INFINITY]
            for variant in variants:
                out = mc_family_transform(fam, variant)
                assert is_maximal_commuting(out.members, range(n))


class TestPairedFamilies:
    def test_three_by_three_classes(self):
        paired = enumerate_paired_families({0, 1, 2}, {3, 4, 5})
        assert len(paired) == 105
        by_parts = {}
        for p in paired:
            count = sum(1 for _, part in p.partition if part)
            by_parts[count] = by_parts.get(count, 0) + 1
        assert by_parts == {1: 45, 2: 54, 3: 6}

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_single_moving_label(self, m):
        fixed = set(range(1, m + 1))
        assert len(enumerate_paired_families({0}, fixed)) == m

    def test_single_subfamily_hat(self):
        paired = enumerate_paired_families({0, 1}, {2})
        assert len(paired) == 3  # one part, three brackets on {0,1,2}
        for p in paired:
            assert p.hat_sets == ()
            (sub,) = (f for _, f in p.subfamilies if f is not None)
            assert hat_family(p) == frozenset(sub.members)

    def test_nested_chain_example(self):
        paired = enumerate_paired_families({0}, {1, 2, 3, 4})
        p = next(q for q in paired if dict(q.partition)[3])
        assert [sorted(s) for s in p.hat_sets] == [
            [1, 2],
            [0, 1, 2, 3],
            [0, 1, 2, 3, 4],
        ]
        assert hat_family(p) == frozenset(
            {
                frozenset({0, 3}),
                frozenset({1, 2}),
                frozenset({0, 1, 2, 3}),
                frozenset({0, 1, 2, 3, 4}),
            }
        )

    def test_hat_families_pairwise_compatible(self):
        for p in enumerate_paired_families({0, 1, 2}, {3, 4, 5}):
            sets = list(hat_family(p))
            for a, b in itertools.combinations(sets, 2):
                assert compatible(a, b)


class TestSerialization:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_round_trip(self, n):
        for fam in enumerate_families(range(n)):
            assert parse_family(serialize_family(fam)) == fam

    def test_shortened_round_trip(self):
        fam = parse_family("{0,1};{0,1,2};{0,1,2,3}")
        text = serialize_family(fam, shortened=True)
        assert "{0,1,2,3}" not in text
        assert parse_family(text, 4) == fam

    def test_parse_rejects_garbage(self):
        with pytest.raises(ParseError):
            parse_family("{0,1};{1,")
        with pytest.raises(ParseError):
            parse_family("{0,1};{0,2}")  # overlapping, neither nested

    def test_normalize_labels(self):
        fam, mapping = normalize_labels(parse_family("{3,7};{3,7,9}"))
        assert mapping == {3: 0, 7: 1, 9: 2}
        assert serialize_family(fam) == "{0,1,2};{0,1}"

    def test_relabel_round_trip(self):
        fam = parse_family("{0,1};{0,1,2};{0,1,2,3}")
        sigma = {0: 2, 1: 3, 2: 0, 3: 1}
        back = {v: k for k, v in sigma.items()}
        assert relabel_family(relabel_family(fam, sigma), back) == fam


class TestCanonicalOrderProperties:
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_idempotent_and_grouped(self, n):
        for fam in enumerate_families(range(n)):
            first = canonical_order(fam)
            second = canonical_order(fam)
            assert first.order == second.order
            assert set(first.order) == set(fam.members)
            # the zero-chain appears in ascending size order
            chain = [m for m in first.order if 0 in m]
            assert chain == sorted(chain, key=len)
