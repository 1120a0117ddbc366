"""Exact rational linear algebra.

Dense matrices over `fractions.Fraction`, reduced-echelon subspaces,
kernel computation, deterministic basis completion, restrictions to
invariant subspaces, integer-scaled characteristic polynomials, complete
rational root extraction, and joint generalized spectra of commuting
matrices.  Everything is exact; equality is decidable everywhere.
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from math import gcd, lcm

from .errors import (
    ContractError,
    InvarianceError,
    IrrationalSpectrumError,
    NotCommutingError,
)

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _frac(x) -> Fraction:
    """Coerce ints, strings like "3/4", and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise ContractError(f"not a rational scalar: {x!r}")


class RationalMatrix:
    """Immutable dense matrix of exact rationals."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data):
        rows = tuple(tuple(_frac(x) for x in row) for row in data)
        if not rows or not rows[0]:
            raise ContractError("matrix must have at least one row and column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ContractError("ragged matrix rows")
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "_data", rows)

    def __setattr__(self, name, value):
        raise AttributeError("RationalMatrix is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, rows, cols=None):
        cols = rows if cols is None else cols
        return cls([[_ZERO] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n):
        return cls([[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, n, value):
        v = _frac(value)
        return cls([[v if i == j else _ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def from_blocks(cls, grid):
        """Assemble from a 2-D grid of equally-sized square blocks."""
        data = []
        for block_row in grid:
            height = block_row[0].rows
            for r in range(height):
                row = []
                for block in block_row:
                    row.extend(block._data[r])
                data.append(row)
        return cls(data)

    @classmethod
    def column(cls, vec):
        return cls([[x] for x in vec])

    # -- access -------------------------------------------------------

    def __getitem__(self, key):
        i, j = key
        return self._data[i][j]

    def row(self, i):
        return self._data[i]

    def column_vector(self, j):
        return tuple(r[j] for r in self._data)

    def entries(self):
        return self._data

    def submatrix(self, row0, row1, col0, col1):
        return RationalMatrix([r[col0:col1] for r in self._data[row0:row1]])

    def block(self, bi, bj, size):
        """The (bi, bj) square block of the given block size."""
        return self.submatrix(bi * size, (bi + 1) * size, bj * size, (bj + 1) * size)

    # -- arithmetic ---------------------------------------------------

    def _same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ContractError("matrix shape mismatch")

    def __add__(self, other):
        self._same_shape(other)
        return RationalMatrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self._data, other._data)
            ]
        )

    def __sub__(self, other):
        self._same_shape(other)
        return RationalMatrix(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self._data, other._data)
            ]
        )

    def __neg__(self):
        return RationalMatrix([[-a for a in row] for row in self._data])

    def scale(self, c):
        c = _frac(c)
        return RationalMatrix([[c * a for a in row] for row in self._data])

    def __mul__(self, other):
        if isinstance(other, (Fraction, int)):
            return self.scale(other)
        if self.cols != other.rows:
            raise ContractError("matrix product shape mismatch")
        cols = list(zip(*other._data))
        return RationalMatrix(
            [
                [sum(a * b for a, b in zip(row, col)) for col in cols]
                for row in self._data
            ]
        )

    def __rmul__(self, other):
        if isinstance(other, (Fraction, int)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k):
        if self.rows != self.cols or k < 0:
            raise ContractError("matrix power needs a square base and k >= 0")
        result = RationalMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def apply(self, vec):
        if len(vec) != self.cols:
            raise ContractError("vector length mismatch")
        return tuple(sum(a * x for a, x in zip(row, vec)) for row in self._data)

    def transpose(self):
        return RationalMatrix(list(zip(*self._data)))

    def trace(self):
        if self.rows != self.cols:
            raise ContractError("trace of a non-square matrix")
        return sum(self._data[i][i] for i in range(self.rows))

    def commutator(self, other):
        return self * other - other * self

    def commutes_with(self, other):
        return self.commutator(other).is_zero()

    # -- predicates ---------------------------------------------------

    def is_zero(self):
        return all(a == 0 for row in self._data for a in row)

    def is_square(self):
        return self.rows == self.cols

    def scalar_value(self):
        """The scalar c if the matrix equals c*I, else None."""
        if not self.is_square():
            return None
        c = self._data[0][0]
        for i in range(self.rows):
            for j in range(self.cols):
                if self._data[i][j] != (c if i == j else 0):
                    return None
        return c

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self._data == other._data

    def __hash__(self):
        return hash(self._data)

    def __repr__(self):
        body = "; ".join(
            " ".join(str(x) for x in row) for row in self._data
        )
        return f"RationalMatrix({self.rows}x{self.cols}: {body})"

    # -- inversion ----------------------------------------------------

    def inverse(self):
        if not self.is_square():
            raise ContractError("inverse of a non-square matrix")
        n = self.rows
        aug = [list(self._data[i]) + [
            _ONE if i == j else _ZERO for j in range(n)
        ] for i in range(n)]
        reduced, pivots = rref(aug)
        if pivots != list(range(n)):
            raise ContractError("matrix is singular")
        return RationalMatrix([row[n:] for row in reduced])

    # -- serialization ------------------------------------------------

    def to_strings(self):
        return [[str(x) for x in row] for row in self._data]

    @classmethod
    def from_strings(cls, rows):
        return cls(rows)


def rref(rows):
    """Reduced row echelon form.

    Takes a list of rows (lists of Fractions), returns (new_rows, pivots)
    where pivots lists the pivot column of each nonzero row, in order.
    """
    mat = [list(map(_frac, row)) for row in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                factor = mat[i][c]
                mat[i] = [x - factor * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def matrix_rank(A):
    _, pivots = rref([list(r) for r in A.entries()])
    return len(pivots)


class Subspace:
    """A subspace of Q^ambient held as a reduced-echelon row basis.

    The echelon form is unique per subspace, so equality of Subspace
    values is equality of subspaces.
    """

    __slots__ = ("ambient", "basis", "pivots")

    def __init__(self, ambient, basis, pivots):
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "basis", tuple(tuple(v) for v in basis))
        object.__setattr__(self, "pivots", tuple(pivots))

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def from_vectors(cls, ambient, vectors):
        vecs = [list(map(_frac, v)) for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise ContractError("vector length != ambient dimension")
        if not vecs:
            return cls(ambient, (), ())
        reduced, pivots = rref(vecs)
        basis = [tuple(row) for row in reduced[: len(pivots)]]
        return cls(ambient, basis, pivots)

    @classmethod
    def zero(cls, ambient):
        return cls(ambient, (), ())

    @classmethod
    def full(cls, ambient):
        eye = RationalMatrix.identity(ambient)
        return cls(ambient, [eye.row(i) for i in range(ambient)], range(ambient))

    @property
    def dim(self):
        return len(self.basis)

    def coords(self, vec):
        """Coefficients of vec in the echelon basis, or None if outside."""
        vec = tuple(map(_frac, vec))
        if len(vec) != self.ambient:
            raise ContractError("vector length != ambient dimension")
        cs = tuple(vec[p] for p in self.pivots)
        residual = list(vec)
        for c, b in zip(cs, self.basis):
            residual = [x - c * y for x, y in zip(residual, b)]
        if any(x != 0 for x in residual):
            return None
        return cs

    def contains(self, vec):
        return self.coords(vec) is not None

    def contains_subspace(self, other):
        return all(self.contains(v) for v in other.basis)

    def add(self, other):
        if self.ambient != other.ambient:
            raise ContractError("subspace ambient mismatch")
        return Subspace.from_vectors(self.ambient, list(self.basis) + list(other.basis))

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient})"


def kernel_basis(A):
    """Reduced-echelon basis of the right kernel of A."""
    reduced, pivots = rref([list(r) for r in A.entries()])
    pivot_set = set(pivots)
    free = [c for c in range(A.cols) if c not in pivot_set]
    vectors = []
    for f in free:
        v = [_ZERO] * A.cols
        v[f] = _ONE
        for row_idx, p in enumerate(pivots):
            v[p] = -reduced[row_idx][f]
        vectors.append(v)
    return Subspace.from_vectors(A.cols, vectors)


def complete_basis(S):
    """Invertible matrix whose leading columns span S.

    Columns are S's echelon basis followed by the standard basis vectors
    at the non-pivot coordinates, in ascending order.  Deterministic.
    """
    n = S.ambient
    cols = [list(v) for v in S.basis]
    pivot_set = set(S.pivots)
    for i in range(n):
        if i not in pivot_set:
            e = [_ZERO] * n
            e[i] = _ONE
            cols.append(e)
    return RationalMatrix(list(zip(*cols)))


def restriction(A, S):
    """Matrix of A restricted to the invariant subspace S, in S's basis."""
    if A.cols != S.ambient:
        raise ContractError("matrix/subspace dimension mismatch")
    columns = []
    for b in S.basis:
        image = A.apply(b)
        cs = S.coords(image)
        if cs is None:
            raise InvarianceError("subspace is not invariant under the matrix")
        columns.append(cs)
    if not columns:
        raise ContractError("restriction to the zero subspace is empty")
    return RationalMatrix(list(zip(*columns)))


def char_poly(A):
    """Characteristic polynomial det(xI - A) as primitive integer coefficients.

    Returned ascending: (c_0, ..., c_N) with c_N > 0, gcd of all = 1.
    Computed by the Faddeev-LeVerrier recursion over exact rationals.
    """
    if not A.is_square():
        raise ContractError("characteristic polynomial of a non-square matrix")
    n = A.rows
    eye = RationalMatrix.identity(n)
    coeffs = [_ONE]  # descending, starting with x^n
    M = RationalMatrix.zero(n)
    c = _ONE
    for k in range(1, n + 1):
        M = A * (M + eye.scale(c))
        c = -M.trace() / k
        coeffs.append(c)
    ascending = list(reversed(coeffs))
    denom = 1
    for x in ascending:
        denom = lcm(denom, x.denominator)
    ints = [int(x * denom) for x in ascending]
    g = 0
    for x in ints:
        g = gcd(g, x)
    g = g or 1
    ints = [x // g for x in ints]
    if ints[-1] < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def _divisors(n):
    """Sorted positive divisors of n > 0 (factorization via sympy)."""
    if n == 1:
        return [1]
    factors = None
    try:
        from sympy import factorint

        factors = factorint(n)
    except ImportError:  # pragma: no cover - sympy is a declared dependency
        factors = {}
        m = n
        d = 2
        while d * d <= m:
            while m % d == 0:
                factors[d] = factors.get(d, 0) + 1
                m //= d
            d += 1
        if m > 1:
            factors[m] = factors.get(m, 0) + 1
    divs = [1]
    for p, e in factors.items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _eval_poly(coeffs, x):
    acc = _ZERO
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deflate(coeffs, root):
    """Divide the polynomial by (x - root) via synthetic division."""
    descending = list(reversed(list(coeffs)))
    acc = descending[0]
    quotient = [acc]
    for c in descending[1:-1]:
        acc = acc * root + c
        quotient.append(acc)
    remainder = acc * root + descending[-1]
    if remainder != 0:
        raise ContractError("deflation by a non-root")
    return list(reversed(quotient))


def rational_roots(coeffs):
    """All rational roots of an integer polynomial, with multiplicity.

    `coeffs` ascending; returns a Counter mapping Fraction -> multiplicity.
    Complete by the rational-root bound: candidates are ±u/v with
    u | trailing coefficient and v | leading coefficient; multiplicities
    found by repeated deflation.  Roots that are not rational are simply
    absent (the caller compares total multiplicity against the degree).
    """
    coeffs = [Fraction(c) if not isinstance(c, Fraction) else c for c in coeffs]
    if not coeffs or all(c == 0 for c in coeffs):
        raise ContractError("zero polynomial has no well-defined root set")
    roots = Counter()
    poly = list(coeffs)
    while poly[0] == 0:
        roots[_ZERO] += 1
        poly = poly[1:]
    if len(poly) == 1:
        return roots
    # scale to primitive integers for divisor enumeration
    denom = 1
    for c in poly:
        denom = lcm(denom, c.denominator)
    ints = [int(c * denom) for c in poly]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // (g or 1) for x in ints]
    numerator_divs = _divisors(abs(ints[0]))
    denominator_divs = _divisors(abs(ints[-1]))
    candidates = set()
    for u in numerator_divs:
        for v in denominator_divs:
            q = Fraction(u, v)
            candidates.add(q)
            candidates.add(-q)
    current = [Fraction(c) for c in ints]
    for cand in sorted(candidates, key=lambda q: (abs(q), q < 0)):
        while len(current) > 1 and _eval_poly(current, cand) == 0:
            current = _deflate(current, cand)
            roots[cand] += 1
        if len(current) == 1:
            break
    return roots


class JointSpectrum:
    """Multiset of joint generalized eigenvalue tuples with multiplicities."""

    __slots__ = ("arity", "_entries")

    def __init__(self, arity, entries):
        counter = Counter()
        for tup, mult in dict(entries).items():
            tup = tuple(_frac(x) for x in tup)
            if len(tup) != arity:
                raise ContractError("joint-spectrum tuple arity mismatch")
            if mult < 0:
                raise ContractError("negative multiplicity")
            if mult:
                counter[tup] += mult
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "_entries", counter)

    def __setattr__(self, name, value):
        raise AttributeError("JointSpectrum is immutable")

    def items(self):
        return sorted(self._entries.items())

    def multiplicity(self, tup):
        return self._entries.get(tuple(map(_frac, tup)), 0)

    @property
    def total(self):
        return sum(self._entries.values())

    def union(self, other):
        if self.arity != other.arity:
            raise ContractError("joint-spectrum arity mismatch in union")
        merged = Counter(self._entries)
        merged.update(other._entries)
        return JointSpectrum(self.arity, merged)

    def subtract(self, other):
        if self.arity != other.arity:
            raise ContractError("joint-spectrum arity mismatch in subtraction")
        reduced = Counter(self._entries)
        for tup, mult in other._entries.items():
            if reduced.get(tup, 0) < mult:
                raise ValueError(
                    f"multiset subtraction underflow at {tuple(map(str, tup))}"
                )
            reduced[tup] -= mult
            if reduced[tup] == 0:
                del reduced[tup]
        return JointSpectrum(self.arity, reduced)

    def scale_multiplicities(self, factor):
        if factor < 0:
            raise ContractError("negative multiplicity factor")
        return JointSpectrum(
            self.arity, {t: m * factor for t, m in self._entries.items()}
        )

    def map_tuples(self, fn, new_arity):
        out = Counter()
        for tup, mult in self._entries.items():
            image = fn(tup)
            image = tuple(image) if isinstance(image, (tuple, list)) else (image,)
            out[tuple(_frac(x) for x in image)] += mult
        return JointSpectrum(new_arity, out)

    def project(self, indices):
        indices = tuple(indices)
        return self.map_tuples(lambda t: tuple(t[i] for i in indices), len(indices))

    def __eq__(self, other):
        if not isinstance(other, JointSpectrum):
            return NotImplemented
        return self.arity == other.arity and self._entries == other._entries

    def __hash__(self):
        return hash((self.arity, tuple(self.items())))

    def __repr__(self):
        parts = ", ".join(
            "[" + ":".join(str(v) for v in tup) + f"]_{m}" for tup, m in self.items()
        )
        return "JointSpectrum{" + parts + "}"

    def to_json_obj(self):
        return [
            {"values": [str(v) for v in tup], "mult": m} for tup, m in self.items()
        ]

    @classmethod
    def from_json_obj(cls, arity, obj):
        entries = Counter()
        for item in obj:
            entries[tuple(Fraction(s) for s in item["values"])] += int(item["mult"])
        return cls(arity, entries)


def joint_spectrum(matrices, ambient=None):
    """Joint generalized spectrum of pairwise-commuting square matrices.

    Splits recursively along the first matrix's generalized eigenspaces
    ker((A - lambda)^mult) and recurses on the restrictions of the rest.
    With an empty list, `ambient` supplies the space dimension and the
    result is the single empty tuple with that multiplicity.
    """
    mats = list(matrices)
    if not mats:
        if ambient is None:
            raise ContractError("joint_spectrum of no matrices needs ambient dim")
        return JointSpectrum(0, {(): ambient})
    size = mats[0].rows
    for M in mats:
        if not M.is_square() or M.rows != size:
            raise ContractError("joint_spectrum needs equally-sized square matrices")
    if ambient is not None and ambient != size:
        raise ContractError("ambient dimension disagrees with matrix size")
    for A, B in itertools.combinations(mats, 2):
        if not A.commutes_with(B):
            raise NotCommutingError("matrices do not pairwise commute")
    return _joint_spectrum_checked(mats, size)


def _joint_spectrum_checked(mats, size):
    head, rest = mats[0], mats[1:]
    poly = char_poly(head)
    roots = rational_roots(poly)
    degree = len(poly) - 1
    if sum(roots.values()) < degree:
        raise IrrationalSpectrumError(
            f"characteristic polynomial {poly} has irrational roots"
        )
    eye = RationalMatrix.identity(size)
    entries = Counter()
    for lam in sorted(roots):
        mult = roots[lam]
        shifted = head - eye.scale(lam)
        space = kernel_basis(shifted**mult)
        if space.dim != mult:
            raise ContractError(
                "generalized eigenspace dimension disagrees with multiplicity"
            )
        if rest:
            restricted = [restriction(B, space) for B in rest]
            tail = _joint_spectrum_checked(restricted, space.dim)
            for tup, m in tail._entries.items():
                entries[(lam,) + tup] += m
        else:
            entries[(lam,)] += mult
    return JointSpectrum(len(mats), entries)
