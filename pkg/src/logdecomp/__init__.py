"""Exact logarithmic decomposition of Shannon entropy over a finite outcome space."""

from .atoms import Atom, AtomSet, FormalSum, atomset_algebra, enumerate_atoms, formal_combine
from .errors import (
    ArityError,
    CapExceededError,
    DuplicateLabelError,
    ExpressionError,
    LogDecompError,
    MissingOutcomeError,
    NegativeWeightError,
    OverlapError,
    PartitionError,
    RefinementError,
    SpaceError,
    SpaceMismatchError,
    UnknownLabelError,
    UnknownVariableError,
)
from .expressions import parse_entropy_expr, parse_set_expr
from .measure import (
    MuTable,
    entropy_partition_law,
    interior_loss,
    measure_atom_set,
    measure_formal_sum,
    mu_table,
    naive_mu_table,
    total_loss,
    tsallis_interior_loss,
    tsallis_loss,
)
from .quantities import (
    InfoSystem,
    content,
    content_of_blocks,
    direct_multiplicity,
    direct_quantity,
    eval_region,
    evaluate_expression_direct,
    expression_to_formal_sum,
    multiplicity_quantity,
    multiplicity_sum,
    quantity,
    region,
)
from .refinement import (
    RefinementMap,
    compose,
    equivalent_under_refinement,
    identity_map,
    kl_direct,
    kl_via_measure,
    micro_macro_split,
    refine_space,
    restrict,
    star,
)
from .representability import (
    CommonInfoResult,
    ci_residual,
    gacs_korner,
    gacs_korner_exhaustive,
    is_representable,
    max_representable_subset,
    wyner,
)
from .space import (
    OutcomeSpace,
    Partition,
    common_coarsening,
    common_refinement,
    iter_partitions,
    joint,
    new_space,
    partition_from_blocks,
    partition_from_labels,
    singleton_partition,
    trivial_partition,
)
from .systems import build_canonical_system, discriminate, upper_set

__version__ = "0.1.0"
