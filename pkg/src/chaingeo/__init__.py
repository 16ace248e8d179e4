"""Exact computational geometry of chains on the Shilov boundary of SU(m, n).

Everything is computed over the Gaussian rationals: points of the boundary,
the chains through them, the Heisenberg coordinates, the group actions, and
all invariants are exact, so every predicate in the package is a theorem
about the sampled configuration rather than a floating-point estimate.
"""

from .exactnum import (
    ExactnumError,
    GaussianRational,
    NotHermitianError,
    RMatrix,
    SingularMatrixError,
    hermitian_signature,
    rat_from_str,
    rat_str,
)
from .hermitian import (
    DimensionError,
    GeometryError,
    HermSpace,
    Subspace,
    intersect,
    span,
)
from .shilov import (
    DegeneratePairingError,
    MChain,
    NotCoplanarError,
    NotTransverseError,
    ShilovPoint,
    apply_matrix,
    apply_matrix_chain,
    bergmann_index,
    cartan_invariant,
    chain_through,
    is_maximal_triple_space,
    member,
    standard_v0,
    standard_vd,
    standard_vinf,
    transverse,
)
from .heisenberg import (
    HeisPoint,
    LElement,
    NElement,
    NotInChartError,
    QElement,
    WPoint,
    act_l,
    act_n,
    act_q,
    from_chart,
    to_chart,
    w_from_subspace,
    w_to_subspace,
)
from .chains import (
    Circle,
    CmSubspace,
    InvalidRegimeError,
    NoCommonPointError,
    USubspace,
    beta,
    beta_preimage,
    chain_stabilizer_M,
    circle_equal,
    fiber_solutions,
    in_beta_domain,
    info_space,
    intersect_chains,
    intersection_index,
    lift_circle,
    pair_in_image,
    parametrize_tk,
    project_chain,
    project_vertical,
    s_map,
    standard_chain,
    valid_k_range,
    vertical_chain,
    w_chart_at,
    w_coords_at,
)
from .sampler import Rng, SampleConfig, Sampler
from .serialize import SchemaError, object_from_json, object_to_json
from .verify import CheckReport, REGISTRY, replay, run_check, run_suite

__version__ = "0.1.0"

__all__ = [
    "CheckReport",
    "Circle",
    "CmSubspace",
    "DegeneratePairingError",
    "DimensionError",
    "ExactnumError",
    "GaussianRational",
    "GeometryError",
    "HeisPoint",
    "HermSpace",
    "InvalidRegimeError",
    "LElement",
    "MChain",
    "NElement",
    "NoCommonPointError",
    "NotCoplanarError",
    "NotHermitianError",
    "NotInChartError",
    "NotTransverseError",
    "QElement",
    "REGISTRY",
    "RMatrix",
    "Rng",
    "SampleConfig",
    "Sampler",
    "SchemaError",
    "ShilovPoint",
    "SingularMatrixError",
    "Subspace",
    "USubspace",
    "WPoint",
    "act_l",
    "act_n",
    "act_q",
    "apply_matrix",
    "apply_matrix_chain",
    "bergmann_index",
    "beta",
    "beta_preimage",
    "cartan_invariant",
    "chain_stabilizer_M",
    "chain_through",
    "circle_equal",
    "fiber_solutions",
    "from_chart",
    "hermitian_signature",
    "in_beta_domain",
    "info_space",
    "intersect",
    "intersect_chains",
    "intersection_index",
    "is_maximal_triple_space",
    "lift_circle",
    "member",
    "object_from_json",
    "object_to_json",
    "pair_in_image",
    "parametrize_tk",
    "project_chain",
    "project_vertical",
    "rat_from_str",
    "rat_str",
    "replay",
    "run_check",
    "run_suite",
    "s_map",
    "span",
    "standard_chain",
    "standard_v0",
    "standard_vd",
    "standard_vinf",
    "to_chart",
    "transverse",
    "valid_k_range",
    "vertical_chain",
    "w_chart_at",
    "w_coords_at",
    "w_from_subspace",
    "w_to_subspace",
]
