#!/usr/bin/env python3
"""Sweep the seeded verification suite and check, for every system and
every family: the triangularization succeeds with the predicted diagonal
blocks, the flag dimensions grow by the source rank, the lifted joint
spectra and all kernel-piece restrictions match their predictions, and
the quotient spectra equal the predicted remainder.

Run from the repository root:

    python3 scripts/verify_sweep.py
    python3 scripts/verify_sweep.py --max-entries 5
    python3 scripts/verify_sweep.py --kind rank1 --n 4 --seeds 0:10 --mu 1/3
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from kzmc import (
    INFINITY,
    TheoremViolationError,
    canonical_order,
    convolve,
    enumerate_families,
    generate,
    joint_spectrum,
    kernels,
    middle_convolution,
    predicted_joint_spectrum,
    predicted_mc_spectra,
    predicted_restriction,
    restriction,
    spectra,
    tilde_A,
    triangularize,
    verification_suite,
)


def verify_entry(system, mu):
    """Raise TheoremViolationError if any verified identity fails."""
    conv = convolve(system, mu)
    kd = kernels(conv)
    quotient = spectra(middle_convolution(system, mu))
    if predicted_mc_spectra(system, mu) != quotient:
        raise TheoremViolationError("quotient spectra deviate from prediction")
    families = enumerate_families(range(system.n))
    for family in families:
        cert = triangularize(conv, family)
        expected_flag = tuple(
            system.rank * level for level in range(1, system.n)
        )
        if cert.flag_dimensions() != expected_flag:
            raise TheoremViolationError("flag dimensions deviate")
        ordered = canonical_order(family)
        lifted = [tilde_A(conv, member) for member in ordered.order]
        predicted = predicted_joint_spectrum(system, family, mu)
        if joint_spectrum(lifted, ambient=conv.size) != predicted:
            raise TheoremViolationError("lift joint spectrum deviates")
        remaining = predicted
        pieces = [(j, kd.slot_kernel(j)) for j in range(1, system.n)]
        pieces.append((INFINITY, kd.k_infinity))
        for which, space in pieces:
            piece = predicted_restriction(system, family, mu, which)
            if space.dim == 0:
                if piece.total != 0:
                    raise TheoremViolationError("prediction on a zero space")
                continue
            direct = joint_spectrum(
                [restriction(mat, space) for mat in lifted], ambient=space.dim
            )
            if direct != piece:
                raise TheoremViolationError("restriction spectrum deviates")
            remaining = remaining.subtract(piece)
        if remaining != quotient.get(family):
            raise TheoremViolationError("quotient remainder deviates")
    return len(families)


def parse_seeds(text):
    if ":" in text:
        lo, hi = text.split(":", 1)
        return range(int(lo), int(hi))
    return [int(text)]


def build_entries(args):
    if args.kind is None:
        entries = [
            (entry.name, entry.system, entry.mu) for entry in verification_suite()
        ]
        if args.max_entries is not None:
            entries = entries[: args.max_entries]
        return entries
    if args.n is None or args.mu is None:
        raise SystemExit("--kind needs --n and --mu")
    out = []
    for seed in parse_seeds(args.seeds):
        made = generate(args.kind, args.n, seed, steps=args.steps)
        out.append((f"{args.kind}-n{args.n}-s{seed}", made.system, args.mu))
    return out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--max-entries", type=int, help="verify only the first K suite entries"
    )
    parser.add_argument(
        "--kind",
        choices=("rank1", "mc-tower"),
        help="generate systems instead of using the built-in suite",
    )
    parser.add_argument("--n", type=int, help="label count for --kind")
    parser.add_argument("--seeds", default="0:10", help="seed or lo:hi range")
    parser.add_argument("--steps", type=int, default=1, help="tower height")
    parser.add_argument("--mu", type=Fraction, help="parameter for --kind")
    parser.add_argument(
        "--stop-on-failure", action="store_true", help="abort at first violation"
    )
    args = parser.parse_args(argv)

    entries = build_entries(args)
    failures = 0
    sweep_start = time.perf_counter()
    for name, system, mu in entries:
        start = time.perf_counter()
        try:
            families = verify_entry(system, mu)
        except TheoremViolationError as exc:
            failures += 1
            print(f"VIOLATION  {name}: {exc}")
            if args.stop_on_failure:
                break
            continue
        elapsed = time.perf_counter() - start
        print(
            f"ok  {name}  n={system.n} rank={system.rank} mu={mu}"
            f"  families={families}  {elapsed:.2f}s"
        )
    total = time.perf_counter() - sweep_start
    print(
        f"{len(entries) - failures}/{len(entries)} entries verified"
        f" in {total:.1f}s"
    )
    return 4 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
