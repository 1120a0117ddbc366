"""Convolution and middle convolution of integrable residue systems.

The convolution lifts a rank-N system on n coordinates to rank (n-1)N:
the big space carries one size-N slot per coordinate 1..n-1.  Middle
convolution quotients the lift by its canonical kernel subspace.  The
remaining operations certify, exactly and per tournament family, how the
lift's grouped residues triangularize and what their spectra are, so the
quotient's spectra can be predicted without ever computing them directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ContractError,
    NonDirectKernelError,
    TheoremViolationError,
)
from .exact_linalg import (
    JointSpectrum,
    RationalMatrix,
    Subspace,
    _frac,
    complete_basis,
    joint_spectrum,
    kernel_basis,
    restriction,
)
from .kz_system import (
    KzSystem,
    SpectraReport,
    pseudo_singular_infinity,
    residue_A,
    shift_infinity_residue,
)
from .tournament_core import (
    INFINITY,
    MaximalCommutingFamily,
    canonical_loser_map,
    canonical_order,
    enumerate_families,
    md_set,
    me_set,
    parse_family,
    serialize_family,
    serialize_member,
)


class ConvolvedSystem:
    """The rank-(n-1)N lift of a system with convolution parameter mu."""

    __slots__ = ("source", "mu", "system")

    def __init__(self, source, mu, system):
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "system", system)

    def __setattr__(self, name, value):
        raise AttributeError("ConvolvedSystem is immutable")

    @property
    def n(self):
        return self.source.n

    @property
    def block_size(self):
        return self.source.rank

    @property
    def size(self):
        return (self.source.n - 1) * self.source.rank

    @property
    def slots(self):
        """The coordinates 1..n-1, one size-N slot each."""
        return tuple(range(1, self.source.n))

    def matrix(self, i, j):
        return self.system.pair(i, j)

    def __repr__(self):
        return f"ConvolvedSystem(n={self.n}, size={self.size}, mu={self.mu})"


def convolve(system, mu):
    """Build the lifted system; its integrability is re-verified."""
    mu = _frac(mu)
    n, N = system.n, system.rank
    zero = RationalMatrix.zero(N)
    mu_eye = RationalMatrix.scalar(N, mu)
    table = {}
    for k in range(1, n):
        grid = []
        for row_slot in range(1, n):
            if row_slot == k:
                grid.append(
                    [
                        system.pair(0, col_slot) + (mu_eye if col_slot == k else zero)
                        for col_slot in range(1, n)
                    ]
                )
            else:
                grid.append([zero] * (n - 1))
        table[(0, k)] = RationalMatrix.from_blocks(grid)
    for i, j in itertools.combinations(range(1, n), 2):
        grid = [
            [system.pair(i, j) if a == b else zero for b in range(1, n)]
            for a in range(1, n)
        ]
        gi, gj = i - 1, j - 1
        grid[gi][gi] = grid[gi][gi] + system.pair(0, j)
        grid[gi][gj] = -system.pair(0, j)
        grid[gj][gi] = -system.pair(0, i)
        grid[gj][gj] = grid[gj][gj] + system.pair(0, i)
        table[(i, j)] = RationalMatrix.from_blocks(grid)
    big = KzSystem(n, (n - 1) * N, table, check=True)
    return ConvolvedSystem(system, mu, big)


def tilde_A(conv, subset):
    """Grouped residue of the lifted system (INFINITY pairs included)."""
    return residue_A(conv.system, subset)


# ---------------------------------------------------------------------------
# kernels


def _embed_slot(vec, slot, n, N):
    out = [Fraction(0)] * ((n - 1) * N)
    base = (slot - 1) * N
    for t, x in enumerate(vec):
        out[base + t] = x
    return out


def _embed_diagonal(vec, n, N):
    out = []
    for _ in range(1, n):
        out.extend(vec)
    return out


def slot_subspace(conv, slot, small):
    """A subspace of the source space embedded into one slot of the lift."""
    n, N = conv.n, conv.block_size
    return Subspace.from_vectors(
        conv.size, [_embed_slot(v, slot, n, N) for v in small.basis]
    )


def diagonal_subspace(conv, small):
    """A subspace of the source space embedded diagonally in every slot."""
    n, N = conv.n, conv.block_size
    return Subspace.from_vectors(
        conv.size, [_embed_diagonal(v, n, N) for v in small.basis]
    )


@dataclass(frozen=True)
class KernelData:
    """The canonical kernel of a lift and its per-slot decomposition."""

    conv: ConvolvedSystem
    small_kernels: tuple  # slot j -> ker A_{0j} in the source space
    slot_kernels: tuple  # slot j -> embedded copy in the lift
    small_infinity: Subspace  # ker(A_{0,inf} - mu) in the source space
    k_infinity: Subspace  # literal kernel of the lifted 0-infinity residue
    total: Subspace
    is_direct: bool

    def slot_kernel(self, j):
        return self.slot_kernels[j - 1]

    def small_kernel(self, j):
        return self.small_kernels[j - 1]


def kernels(conv):
    """Kernel subspaces of the lift.

    The infinity part is the literal kernel of the lifted residue (so the
    mu = 0 case degrades gracefully); for mu != 0 it must equal the
    diagonal embedding of ker(A_{0,inf} - mu), and the total sum must be
    direct — both are verified.
    """
    source, mu = conv.source, conv.mu
    n, N = conv.n, conv.block_size
    small_kernels = []
    slot_kernels = []
    for j in range(1, n):
        small = kernel_basis(source.pair(0, j))
        small_kernels.append(small)
        slot_kernels.append(slot_subspace(conv, j, small))
    a0inf = residue_A(source, {0, INFINITY})
    small_infinity = kernel_basis(a0inf - RationalMatrix.scalar(N, mu))
    k_infinity = kernel_basis(tilde_A(conv, {0, INFINITY}))
    if mu != 0:
        expected = diagonal_subspace(conv, small_infinity)
        if k_infinity != expected:
            raise TheoremViolationError(
                "lifted infinity kernel is not the diagonal embedding of "
                "ker(A_{0,inf} - mu) although mu != 0"
            )
    total = k_infinity
    for piece in slot_kernels:
        total = total.add(piece)
    direct = total.dim == k_infinity.dim + sum(s.dim for s in slot_kernels)
    return KernelData(
        conv=conv,
        small_kernels=tuple(small_kernels),
        slot_kernels=tuple(slot_kernels),
        small_infinity=small_infinity,
        k_infinity=k_infinity,
        total=total,
        is_direct=direct,
    )


def middle_convolution(system, mu):
    """Quotient of the lift by its canonical kernel subspace.

    The quotient is expressed in the deterministic complement basis of
    complete_basis, so results are bit-reproducible.
    """
    conv = convolve(system, mu)
    kd = kernels(conv)
    dim_k = kd.total.dim
    size = conv.size
    new_rank = size - dim_k
    if new_rank < 1:
        raise ContractError("middle convolution collapsed to rank 0")
    if dim_k == 0:
        return KzSystem(
            system.n, size, dict(conv.system.pairs()), check=True
        )
    basis = complete_basis(kd.total)
    basis_inv = basis.inverse()
    table = {}
    for (i, j), big in conv.system.pairs():
        conj = basis_inv * big * basis
        if not conj.submatrix(dim_k, size, 0, dim_k).is_zero():
            raise TheoremViolationError(
                f"kernel subspace is not invariant under the lifted A_({i},{j})"
            )
        table[(i, j)] = conj.submatrix(dim_k, size, dim_k, size)
    return KzSystem(system.n, new_rank, table, check=True)


# ---------------------------------------------------------------------------
# triangularization


def U_matrix(ordered, loser_map, N):
    """Block 0/1 basis change: block (slot j, position i) is the identity
    exactly when j lies in the losing side of the i-th member, so column
    block i is the indicator of that losing side and the leading columns
    span the invariant flag."""
    family = ordered.family
    n = len(family.labels)
    eye = RationalMatrix.identity(N)
    zero = RationalMatrix.zero(N)
    losing_sides = [loser_map.loser(member) for member in ordered.order]
    grid = []
    for j in range(1, n):
        grid.append([eye if j in side else zero for side in losing_sides])
    U = RationalMatrix.from_blocks(grid)
    return U


@dataclass(frozen=True)
class TriangularizationCertificate:
    """Per-family proof data: the change of basis and all diagonal blocks."""

    family: MaximalCommutingFamily
    ordered: tuple  # members in canonical order
    loser_map: object
    U: RationalMatrix
    U_inverse: RationalMatrix
    conjugated: tuple  # (member, conjugated matrix) in canonical order
    blocks: tuple  # ((member, position), block) rows

    def conjugated_for(self, member):
        member = frozenset(member)
        for m, mat in self.conjugated:
            if m == member:
                return mat
        raise ContractError(f"{set(member)} is not a member")

    def block_for(self, member, position):
        member = frozenset(member)
        for (m, pos), mat in self.blocks:
            if m == member and pos == position:
                return mat
        raise ContractError("no such block")

    def flag_dimensions(self):
        N = self.U.rows // len(self.ordered)
        return tuple(N * (l + 1) for l in range(len(self.ordered)))


def triangularize(conv, family):
    """Conjugate every lifted grouped residue of the family by the 0/1
    basis change and certify block upper triangularity with the predicted
    diagonal blocks.  Any mismatch raises a theorem violation."""
    if not isinstance(family, MaximalCommutingFamily):
        family = parse_family(family, conv.n)
    source, mu = conv.source, conv.mu
    N = conv.block_size
    n = conv.n
    ordered = canonical_order(family)
    loser_map = canonical_loser_map(family, 0)
    U = U_matrix(ordered, loser_map, N)
    U_inv = U.inverse()
    conjugated = []
    blocks = []
    for member in ordered.order:
        conj = U_inv * tilde_A(conv, member) * U
        for bi in range(n - 1):
            for bj in range(bi):
                if not conj.block(bi, bj, N).is_zero():
                    raise TheoremViolationError(
                        f"family {serialize_family(family)}: conjugated residue "
                        f"of {serialize_member(member)} has a nonzero lower "
                        f"block at ({bi + 1},{bj + 1})"
                    )
        for pos in range(n - 1):
            block = conj.block(pos, pos, N)
            predicted = predicted_A_I_K(source, member, ordered.order[pos], mu)
            if block != predicted:
                raise TheoremViolationError(
                    f"family {serialize_family(family)}: diagonal block "
                    f"{pos + 1} of {serialize_member(member)} deviates from "
                    "the predicted grouped residue"
                )
            blocks.append(((member, pos + 1), block))
        conjugated.append((member, conj))
    return TriangularizationCertificate(
        family=family,
        ordered=ordered.order,
        loser_map=loser_map,
        U=U,
        U_inverse=U_inv,
        conjugated=tuple(conjugated),
        blocks=tuple(blocks),
    )


# ---------------------------------------------------------------------------
# spectral predictions


def predicted_A_I_K(system, I, K, mu):
    """The source-size matrix that appears as a diagonal block: the grouped
    residue of the md-transformed set, plus mu when the me flag is set."""
    mu = _frac(mu)
    I = frozenset(int(x) for x in I)
    K = frozenset(int(x) for x in K)
    moved = md_set(0, K, I)
    mat = residue_A(system, moved)
    if me_set(0, K, I):
        mat = mat + RationalMatrix.scalar(system.rank, mu)
    return mat


def predicted_single_spectrum(system, I, mu):
    """Predicted spectrum of one lifted grouped residue.

    [A_{I + {0}} (+ mu when 0 in I)] with multiplicities scaled by |I|-1,
    together with [A_{I - {0}}] scaled by n-|I|.
    """
    mu = _frac(mu)
    I = frozenset(int(x) for x in I)
    n = system.n
    if not 2 <= len(I) <= n:
        raise ContractError("subset size out of range")
    with_zero = residue_A(system, I | {0})
    if 0 in I:
        with_zero = with_zero + RationalMatrix.scalar(system.rank, mu)
    first = joint_spectrum([with_zero]).scale_multiplicities(len(I) - 1)
    without = joint_spectrum([residue_A(system, I - {0})])
    return first.union(without.scale_multiplicities(n - len(I)))


def predicted_joint_spectrum(system, family, mu):
    """Predicted joint spectrum of the lifted residues of one family:
    the multiset union, over members J, of the joint spectra of the
    predicted diagonal-block tuples."""
    if not isinstance(family, MaximalCommutingFamily):
        family = parse_family(family, system.n)
    mu = _frac(mu)
    ordered = canonical_order(family)
    out = JointSpectrum(len(ordered.order), {})
    for J in sorted(family.members, key=lambda m: (len(m), sorted(m))):
        mats = [predicted_A_I_K(system, I, J, mu) for I in ordered.order]
        out = out.union(joint_spectrum(mats, ambient=system.rank))
    return out


def _restriction_spectrum(system, ordered, K, space, mu):
    if space.dim == 0:
        return JointSpectrum(len(ordered.order), {})
    mats = [
        restriction(predicted_A_I_K(system, I, K, mu), space)
        for I in ordered.order
    ]
    return joint_spectrum(mats, ambient=space.dim)


def predicted_restriction(system, family, mu, which):
    """Predicted joint spectrum of the lift on one kernel piece.

    `which` is a slot j (restrict the singleton-{j} block tuple to
    ker A_{0j}) or INFINITY (restrict the full-set block tuple to
    ker(A_{0,inf} - mu)).  With mu = 0 the kernel pieces may overlap,
    which invalidates per-piece bookkeeping and raises an error.
    """
    if not isinstance(family, MaximalCommutingFamily):
        family = parse_family(family, system.n)
    mu = _frac(mu)
    if mu == 0:
        kd = kernels(convolve(system, mu))
        if not kd.is_direct:
            raise NonDirectKernelError(
                "kernel pieces overlap at mu = 0; per-piece predictions invalid"
            )
    ordered = canonical_order(family)
    N = system.rank
    if which is INFINITY:
        a0inf = residue_A(system, {0, INFINITY})
        space = kernel_basis(a0inf - RationalMatrix.scalar(N, mu))
        return _restriction_spectrum(
            system, ordered, frozenset(range(system.n)), space, mu
        )
    j = int(which)
    if not 1 <= j < system.n:
        raise ContractError(f"slot {j} out of range 1..{system.n - 1}")
    space = kernel_basis(system.pair(0, j))
    return _restriction_spectrum(system, ordered, frozenset({j}), space, mu)


def predicted_mc_spectra(system, mu):
    """Spectra of the middle convolution predicted without computing it:
    per family, the predicted lift spectrum minus every predicted kernel
    restriction.  Underflow in the subtraction is a theorem violation."""
    mu = _frac(mu)
    if mu == 0:
        raise ContractError("predictions of the quotient spectra need mu != 0")
    n, N = system.n, system.rank
    dim_kernel = kernel_basis(
        residue_A(system, {0, INFINITY}) - RationalMatrix.scalar(N, mu)
    ).dim
    for j in range(1, n):
        dim_kernel += kernel_basis(system.pair(0, j)).dim
    quotient_rank = (n - 1) * N - dim_kernel
    entries = []
    for family in enumerate_families(range(n)):
        spectrum = predicted_joint_spectrum(system, family, mu)
        pieces = [predicted_restriction(system, family, mu, j) for j in range(1, n)]
        pieces.append(predicted_restriction(system, family, mu, INFINITY))
        for piece in pieces:
            try:
                spectrum = spectrum.subtract(piece)
            except ValueError as exc:
                raise TheoremViolationError(
                    f"family {serialize_family(family)}: predicted kernel "
                    f"restriction is not contained in the lift spectrum ({exc})"
                ) from None
        entries.append((family, canonical_order(family).order, spectrum))
    entries.sort(key=lambda e: serialize_family(e[0]))
    return SpectraReport(
        n=n, rank=quotient_rank, shortened=False, entries=tuple(entries)
    )


# ---------------------------------------------------------------------------
# pseudo-singular infinity through the quotient


@dataclass(frozen=True)
class PseudoInfinityCertificate:
    """Verification record for the quotient's behaviour at infinity.

    `raw_values` are the scalars of the quotient's infinity residues as
    computed; `quotient` and `quotient_values` are the same system after
    the sign-balanced triple shift that zeroes the 0-infinity residue
    while leaving every other infinity residue untouched.
    """

    mu0: Fraction
    source_values: tuple  # mu_i of the source, i = 0..n-1
    kernel_is_full_diagonal: bool  # equality (mu0 != 0) or containment only
    raw_values: tuple  # scalar of the bare quotient's A_{i,inf}
    quotient: KzSystem  # quotient, normalized at infinity
    quotient_values: tuple  # (0, mu_1, ..., mu_{n-1})


def mc_preserves_pseudo_infinity(system, mu0):
    """Verify that middle convolution preserves pseudo-singularity at
    infinity.

    Checked facts: the lifted infinity kernel is the diagonal copy of the
    source space; every infinity residue of the quotient is scalar, with
    the value -mu0 at index 0 and the original mu_i elsewhere; and after
    the infinity-shift normalization the residues are exactly
    (0, mu_1, ..., mu_{n-1}).  Any failure raises a theorem violation.
    """
    mu0 = _frac(mu0)
    values = pseudo_singular_infinity(system)
    if values is None:
        raise ContractError("system is singular at infinity")
    if values[0] != mu0:
        raise ContractError(
            f"mu0 = {mu0} is not the scalar {values[0]} of the 0-infinity residue"
        )
    if system.n < 3 and mu0 != 0:
        raise ContractError(
            "normalizing the quotient at infinity needs at least 3 variables"
        )
    conv = convolve(system, mu0)
    kd = kernels(conv)
    full_diag = diagonal_subspace(conv, Subspace.full(system.rank))
    equality = kd.k_infinity == full_diag
    if mu0 != 0:
        if not equality:
            raise TheoremViolationError(
                "lifted infinity kernel differs from the diagonal subspace"
            )
    elif not kd.k_infinity.contains_subspace(full_diag):
        raise TheoremViolationError(
            "lifted infinity kernel does not contain the diagonal subspace"
        )
    quotient = middle_convolution(system, mu0)

    def infinity_scalars(target):
        out = []
        for i in range(target.n):
            value = residue_A(target, {i, INFINITY}).scalar_value()
            if value is None:
                raise TheoremViolationError(
                    f"quotient residue at ({i}, infinity) is not scalar"
                )
            out.append(value)
        return out

    raw = infinity_scalars(quotient)
    if raw != [-mu0] + list(values[1:]):
        raise TheoremViolationError(
            f"bare quotient infinity scalars {raw} deviate from "
            f"{[-mu0] + list(values[1:])}"
        )
    normalized = quotient if mu0 == 0 else shift_infinity_residue(quotient, -mu0)
    final = infinity_scalars(normalized)
    if final != [Fraction(0)] + list(values[1:]):
        raise TheoremViolationError(
            f"normalized quotient infinity scalars {final} deviate from "
            f"{[Fraction(0)] + list(values[1:])}"
        )
    return PseudoInfinityCertificate(
        mu0=mu0,
        source_values=tuple(values),
        kernel_is_full_diagonal=equality,
        raw_values=tuple(raw),
        quotient=normalized,
        quotient_values=tuple(final),
    )
