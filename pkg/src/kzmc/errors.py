"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: usage errors exit 1, parse
errors exit 2, contract errors exit 3, theorem violations exit 4.
"""


class KzmcError(Exception):
    """Base class for all package errors."""


class UsageError(KzmcError):
    """Bad command-line invocation (unknown command, missing flag)."""


class ParseError(KzmcError):
    """Malformed textual input (family grammar, system JSON, rationals)."""


class ContractError(KzmcError):
    """A documented precondition or invariant was violated by the caller."""


class IntegrabilityError(ContractError):
    """Residue matrices fail the commutator (integrability) conditions."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        preview = "; ".join(describe_violation(v) for v in self.violations[:3])
        more = "" if len(self.violations) <= 3 else f" (+{len(self.violations) - 3} more)"
        super().__init__(f"integrability violated: {preview}{more}")


class NotCommutingError(ContractError):
    """joint_spectrum was fed matrices that do not pairwise commute."""


class IrrationalSpectrumError(ContractError):
    """An eigenvalue needed for a spectral split is not rational."""


class InvarianceError(ContractError):
    """restriction() was fed a subspace not invariant under the matrix."""


class NonDirectKernelError(ContractError):
    """The kernel subspaces overlap, so per-slot predictions are invalid."""


class TheoremViolationError(KzmcError):
    """A verified identity failed: the strongest correctness alarm."""


def describe_violation(v):
    """Render one integrability-violation record as a short string."""
    kind = v[0]
    if kind == "disjoint":
        (i, j), (k, l) = v[1], v[2]
        return f"[A_({i},{j}), A_({k},{l})] != 0"
    if kind == "triple":
        (i, j), rest = v[1], v[2]
        others = "+".join(f"A_({p},{q})" for (p, q) in rest)
        return f"[A_({i},{j}), {others}] != 0"
    if kind == "fixed":
        return f"[{v[1]}, {v[2]}] != 0"
    return repr(v)
