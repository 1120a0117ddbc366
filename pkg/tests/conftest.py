"""Shared fixtures and hypothesis configuration."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from helpers import rank1
from kzmc import addition, kappa

settings.register_profile(
    "suite",
    deadline=None,
    derandomize=True,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

WORKED_MU = Fraction(1, 4)


@pytest.fixture(scope="session")
def worked_system():
    """Homogeneous rank-1 four-coordinate system with distinct residues.

    Starts from six distinct small rationals and imposes a vanishing
    full-set residue with a single shift on the pair {2,3}, so every
    worked-example identity that assumes homogeneity applies verbatim.
    """
    base = rank1(
        4,
        {
            "0,1": "1/2",
            "0,2": "1/3",
            "0,3": "1/5",
            "1,2": "1/7",
            "1,3": "1/11",
            "2,3": "1/13",
        },
    )
    system = addition(base, 2, 3, -kappa(base))
    assert kappa(system) == 0
    return system
