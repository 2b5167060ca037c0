"""Exact orbit computations for finite linear and permutation groups over
small fields: orbit partitions, p-exceptionality verdicts, subset orbits,
and the catalog of named examples with their expected profiles."""

from .errors import (
    DivisionByZero,
    FieldMismatch,
    GroupTooLarge,
    MismatchedProfile,
    NoLift,
    NonUnipotent,
    ShapeMismatch,
    SpaceTooLarge,
    TooManySubsets,
    UnknownEntry,
)
from .field import Field, GF
from .matrix import (
    JordanType,
    Matrix,
    blowup,
    blowup_semilinear,
    jordan_type_unipotent,
    kronecker,
    mat_kernel,
    mat_rank,
)
from .matgroup import (
    BAD_ORBIT,
    MatGroup,
    ORDER_NOT_DIVISIBLE_BY_P,
    OrbitPartition,
    P_EXCEPTIONAL,
    PexcVerdict,
    SplitResult,
    is_half_transitive,
    is_irreducible,
    is_p_exceptional,
    is_transitive_nonzero,
    p_residual,
    spin,
    split_constituent,
    verify_fixed_point_cover,
    with_scalars,
)
from .permgroup import (
    PermGroup,
    StabilizerChain,
    SubsetOrbitReport,
    an_concealed_predicate,
    binom_p_valuation,
    load_perm_group,
    perm_order,
    subset_orbits,
)
from .constructions import (
    ExtraspecialSpec,
    GammaL1Spec,
    TensorWeightResult,
    WreathSpec,
    c4_pair_group,
    deleted_permutation_module,
    extraspecial,
    gamma_l1,
    lift_outer,
    tensor_product_group,
    tensor_weight,
    wreath,
)
from .jordan import cyclic_tensor_shape, jordan_tensor, kappa_bound
from .catalog import catalog as catalog_entry
from .catalog import catalog_verify, catalog_verify_all, entry_names

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
