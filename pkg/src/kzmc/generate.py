"""Seeded construction of integrable test systems.

Two kinds are provided: size-1 scalar seeds (integrability is automatic for
scalars) and towers obtained by pushing a scalar seed through one or two
middle convolutions, which raises the matrix size while keeping all spectra
rational.  Generation is deterministic in (kind, n, seed) and the emitted
metadata records enough to reproduce every system.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction

from ._version import __version__
from .errors import ContractError
from .exact_linalg import char_poly, rational_roots
from .kz_system import INFINITY, KzSystem, residue_A
from .midconv import middle_convolution

_NUMERATORS = [x for x in range(-6, 7) if x != 0]
_DENOMINATORS = [1, 2, 3]
_MU_POOL = [
    Fraction(1, 3),
    Fraction(-1, 2),
    Fraction(2, 5),
    Fraction(-2, 3),
    Fraction(3, 4),
    Fraction(1, 5),
    Fraction(-1, 4),
    Fraction(5, 2),
]


def _rng(kind, n, seed):
    digest = hashlib.sha256(f"kzmc:{kind}:{n}:{seed}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _random_scalar(rng):
    return Fraction(rng.choice(_NUMERATORS), rng.choice(_DENOMINATORS))


def rank1_system(n, seed):
    """Scalar (size-1) system with small nonzero rational residues.

    The row sum over pairs (0,j) is kept nonzero so that the residue at
    infinity paired with label 0 is a nonzero scalar."""
    n = int(n)
    if n < 2:
        raise ContractError("need at least two labels")
    rng = _rng("rank1", n, seed)
    residues = {}
    for i in range(n):
        for j in range(i + 1, n):
            residues[(i, j)] = [[_random_scalar(rng)]]
    while sum(residues[(0, j)][0][0] for j in range(1, n)) == 0:
        residues[(0, n - 1)] = [[_random_scalar(rng)]]
    return KzSystem(n, 1, residues)


def _scalar_at_infinity(system):
    value = residue_A(system, frozenset({0, INFINITY}))
    return value.scalar_value()


def _rational_eigenvalues(matrix):
    return rational_roots(char_poly(matrix))


def _generic_mu(system, rng):
    """A pool value that keeps the kernel at infinity trivial."""
    bad = set(_rational_eigenvalues(residue_A(system, frozenset({0, INFINITY}))))
    candidates = [mu for mu in _MU_POOL if mu not in bad and mu != 0]
    if not candidates:
        raise ContractError("no generic convolution parameter available")
    return rng.choice(candidates)


def _kernel_seeking_mu(system, rng):
    """A nonzero rational eigenvalue of the residue at infinity, so the
    convolution picks up a kernel block and the quotient stays small."""
    roots = _rational_eigenvalues(residue_A(system, frozenset({0, INFINITY})))
    candidates = sorted(mu for mu in roots if mu != 0)
    if not candidates:
        raise ContractError(
            "tower step needs a nonzero rational eigenvalue at infinity"
        )
    return rng.choice(candidates)


@dataclass(frozen=True)
class GeneratedSystem:
    """A seeded system plus the reproducibility metadata emitted with it."""

    kind: str
    n: int
    seed: int
    steps: tuple  # convolution parameters applied to the scalar seed
    system: KzSystem

    def meta(self):
        return {
            "generator": "kzmc",
            "version": __version__,
            "kind": self.kind,
            "n": self.n,
            "seed": self.seed,
            "steps": [str(mu) for mu in self.steps],
        }


def mc_tower_system(n, seed, steps=1):
    """Push a scalar seed through `steps` middle convolutions.

    Step parameters are chosen deterministically from (n, seed): generic
    pool values while the size budget allows, and eigenvalues of the
    residue at infinity when a kernel is needed to keep the result at
    size <= 3 (first step at n=5, second step anywhere)."""
    n = int(n)
    steps = int(steps)
    if steps < 1:
        raise ContractError("a tower needs at least one step")
    rng = _rng("mc-tower", n, seed)
    system = rank1_system(n, seed)
    used = []
    for step in range(steps):
        bound_without_kernel = (n - 1) * system.rank
        if bound_without_kernel <= 3:
            mu = _generic_mu(system, rng)
        else:
            mu = _kernel_seeking_mu(system, rng)
        system = middle_convolution(system, mu)
        used.append(mu)
        if system.rank > 3:
            raise ContractError("tower exceeded the size budget")
    return GeneratedSystem(
        kind="mc-tower", n=n, seed=seed, steps=tuple(used), system=system
    )


def generate(kind, n, seed, steps=1):
    """Entry point used by the command line: kind is rank1 or mc-tower."""
    if kind == "rank1":
        return GeneratedSystem(
            kind="rank1", n=int(n), seed=int(seed), steps=(),
            system=rank1_system(n, seed),
        )
    if kind == "mc-tower":
        return mc_tower_system(n, seed, steps=steps)
    raise ContractError(f"unknown generator kind {kind!r}")


@dataclass(frozen=True)
class SuiteEntry:
    """One verification run: a system and the convolution parameter."""

    name: str
    system: KzSystem
    mu: Fraction


def verification_suite():
    """The fixed seeded population for the end-to-end verification sweep:
    53 systems with n in {3,4,5} and size <= 3, each with a nonzero
    rational parameter."""
    entries = []

    def add(name, system, mu):
        entries.append(SuiteEntry(name=name, system=system, mu=Fraction(mu)))

    def sweep_mu(system, seed):
        return _generic_mu(system, _rng("sweep", system.n, seed))

    for seed in range(20):
        system = rank1_system(3, seed)
        add(f"rank1-n3-s{seed}", system, sweep_mu(system, seed))
    for seed in range(10):
        system = rank1_system(4, seed)
        add(f"rank1-n4-s{seed}", system, sweep_mu(system, seed))
    for seed in range(8):
        system = rank1_system(5, seed)
        add(f"rank1-n5-s{seed}", system, sweep_mu(system, seed))
    for seed in range(6):
        tower = mc_tower_system(3, seed, steps=1)
        add(f"tower1-n3-s{seed}", tower.system, sweep_mu(tower.system, seed))
    for seed in range(4):
        tower = mc_tower_system(3, seed, steps=2)
        add(f"tower2-n3-s{seed}", tower.system, sweep_mu(tower.system, seed))
    for seed in range(4):
        tower = mc_tower_system(4, seed, steps=1)
        add(f"tower1-n4-s{seed}", tower.system, sweep_mu(tower.system, seed))
    for seed in range(1):
        tower = mc_tower_system(5, seed, steps=1)
        add(f"tower1-n5-s{seed}", tower.system, sweep_mu(tower.system, seed))
    return entries
