"""markovscope: decide from a single channel snapshot whether it is
consistent with Markovian dynamics, and quantify the deviation."""

from .channels import (
    BasisTag,
    ChannelMatrix,
    ChannelReport,
    ChoiMatrix,
    DensityMatrix,
    KrausSet,
    OperatorBasis,
    apply_channel,
    change_basis,
    choi_of,
    compose,
    determinant,
    involution_gamma,
    kraus_from_choi,
    mix,
    transfer_from_kraus,
    verify_channel,
)
from .config import Tolerances, default_tolerances
from .decision import (
    AMatrices,
    BranchSearchResult,
    MarkovReport,
    Verdict,
    build_a_matrices,
    markovian_check,
    markovianity_measure,
    mu_min,
    qubit_branch_search,
)
from .errors import MarkovscopeError
from .io import load_channel, save_channel
from .lindblad import (
    CcpReport,
    GeneratorMatrix,
    GeneratorReport,
    LindbladForm,
    ccp_test,
    evolve,
    evolve_time_dependent,
    generator_from_form,
    is_lindblad_generator,
    lindblad_decompose,
)
from .qubit import (
    LorentzSingularValues,
    TdReport,
    lorentz_singular_values,
    td_markovian_check,
)
from .spectral import (
    BranchIndex,
    Cluster,
    ClusterKind,
    SpectralData,
    branch_log,
    eigendecompose,
    fractional_power,
    principal_log,
)
from .zoo import (
    JCParams,
    dephasing_channel,
    figure2a_mixture,
    jc_channel,
    jc_decay_function,
    jc_local_generator,
    rabi_unitary,
    random_channel,
    random_lindblad,
    transpose_approximation,
)

__version__ = "0.1.0"

__all__ = [
    "AMatrices",
    "BasisTag",
    "BranchIndex",
    "BranchSearchResult",
    "CcpReport",
    "ChannelMatrix",
    "ChannelReport",
    "ChoiMatrix",
    "Cluster",
    "ClusterKind",
    "DensityMatrix",
    "GeneratorMatrix",
    "GeneratorReport",
    "JCParams",
    "KrausSet",
    "LindbladForm",
    "LorentzSingularValues",
    "MarkovReport",
    "MarkovscopeError",
    "OperatorBasis",
    "SpectralData",
    "TdReport",
    "Tolerances",
    "Verdict",
    "apply_channel",
    "branch_log",
    "build_a_matrices",
    "ccp_test",
    "change_basis",
    "choi_of",
    "compose",
    "default_tolerances",
    "dephasing_channel",
    "determinant",
    "eigendecompose",
    "evolve",
    "evolve_time_dependent",
    "figure2a_mixture",
    "fractional_power",
    "generator_from_form",
    "involution_gamma",
    "is_lindblad_generator",
    "jc_channel",
    "jc_decay_function",
    "jc_local_generator",
    "kraus_from_choi",
    "lindblad_decompose",
    "load_channel",
    "lorentz_singular_values",
    "markovian_check",
    "markovianity_measure",
    "mix",
    "mu_min",
    "principal_log",
    "qubit_branch_search",
    "rabi_unitary",
    "random_channel",
    "random_lindblad",
    "save_channel",
    "td_markovian_check",
    "transfer_from_kraus",
    "transpose_approximation",
    "verify_channel",
]
