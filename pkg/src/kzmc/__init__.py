"""Exact computations for KZ-type equations organized by tournaments.

The package enumerates maximal commuting families of label subsets (the
combinatorial shadow of single-elimination tournaments), computes joint
generalized spectra of the associated grouped residue matrices with exact
rational arithmetic, performs additions and middle convolutions, predicts
the spectra of the convolution quotient from tournament data alone, and
produces blow-up chart factorizations of coordinate differences.
"""

from ._version import __version__
from .blowup import (
    BlowupChart,
    IntPolynomial,
    PairFactorization,
    blowup_chart,
    chart_order,
    epsilon_coefficients,
    local_residues,
)
from .errors import (
    ContractError,
    IntegrabilityError,
    IrrationalSpectrumError,
    InvarianceError,
    KzmcError,
    NonDirectKernelError,
    NotCommutingError,
    ParseError,
    TheoremViolationError,
    UsageError,
)
from .exact_linalg import (
    JointSpectrum,
    RationalMatrix,
    Subspace,
    char_poly,
    complete_basis,
    joint_spectrum,
    kernel_basis,
    matrix_rank,
    rational_roots,
    restriction,
    rref,
)
from .generate import (
    GeneratedSystem,
    SuiteEntry,
    generate,
    mc_tower_system,
    rank1_system,
    verification_suite,
)
from .kz_system import (
    FixedPointSystem,
    KzSystem,
    SpectraReport,
    addition,
    check_fixed_integrability,
    check_integrability,
    embedded_system,
    fixed_point_residue,
    is_homogeneous,
    kappa,
    permute,
    pseudo_singular_infinity,
    residue_A,
    shift_infinity_residue,
    spectra,
    spectrum_of_combination,
    system_from_json,
    system_to_json,
)
from .midconv import (
    ConvolvedSystem,
    KernelData,
    PseudoInfinityCertificate,
    TriangularizationCertificate,
    U_matrix,
    convolve,
    kernels,
    mc_preserves_pseudo_infinity,
    middle_convolution,
    predicted_A_I_K,
    predicted_joint_spectrum,
    predicted_mc_spectra,
    predicted_restriction,
    predicted_single_spectrum,
    tilde_A,
    triangularize,
)
from .tournament_core import (
    INFINITY,
    LoserMap,
    MaximalCommutingFamily,
    OrderedFamily,
    PairedFamily,
    Segment,
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
    md_set,
    me_set,
    mc_family_transform,
    normalize_labels,
    parse_family,
    players,
    relabel_family,
    render_family,
    segment_is_basic,
    segment_is_top,
    serialize_family,
    serialize_member,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
