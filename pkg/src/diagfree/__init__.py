"""Diagram monoids (chiefly the partition monoid) and the maximal subgroups
of the free idempotent-generated and free projection-generated semigroups
attached to them."""

__version__ = "0.1.0"

from .diagram import (  # noqa: F401
    AdjacencySemigroup,
    BrauerMonoid,
    Partition,
    PartitionMonoid,
    TransformationMonoid,
    TwistedElement,
    identity,
    involution,
    multiply,
    multiply_with_floats,
    partition_from_blocks,
    partition_from_text,
    twisted_multiply,
)
from .green import DClassData, dclass_data, sandwich_set  # noqa: F401
from .groupid import (  # noqa: F401
    IdentifyHints,
    Verdict,
    abelianization,
    check_label_homomorphism,
    identify,
    smith_normal_form,
    todd_coxeter,
)
from .present import (  # noqa: F401
    GroupPresentation,
    presn_ig,
    presn_pg_linked,
    presn_pg_squares,
    tietze_simplify,
)
