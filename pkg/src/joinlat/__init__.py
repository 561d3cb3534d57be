"""Join graphs, maximal-intersection lattices, and Moebius functions of
small finite groups, with a verification suite for the structural claims
the package exists to check."""

from .config import Limits, ResourceLimitError, SpecError
from .groups import (
    FiniteGroup,
    GroupSpec,
    build,
    direct_product,
    generated_subgroup,
    parse_spec,
    quotient_group,
    subgroup_group,
)
from .sublattice import (
    MILattice,
    SubgroupLattice,
    enumerate_subgroups,
    frattini,
    lattice_json,
    maximal_subgroups,
    mi_lattice,
    min_trivial_intersection_family,
)
from .joingraph import (
    JoinGraph,
    build_delta,
    equivalence_classes,
    hull,
    neighborhood,
    reconstruct_mi,
    reconstruction_matches,
)
from .moebius import (
    ChiefFactorRecord,
    MoebiusTable,
    NotSolubleError,
    chief_series,
    hall_vanishing_check,
    moebius_table,
    mu_product_formula,
    normal_mi_check,
)
from .classify import (
    Classification,
    classification,
    coprime_factorization,
    delta_nilpotent_partner,
    is_nilpotent,
    is_soluble,
    is_supersoluble,
    m_nilpotent_partner,
    pgroup_signature,
    search_nilpotent_partner,
)
from .isomorph import IsoResult, canonical_form, graph_iso, poset_iso

__all__ = [
    "Limits",
    "ResourceLimitError",
    "SpecError",
    "FiniteGroup",
    "GroupSpec",
    "build",
    "direct_product",
    "generated_subgroup",
    "parse_spec",
    "quotient_group",
    "subgroup_group",
    "MILattice",
    "SubgroupLattice",
    "enumerate_subgroups",
    "frattini",
    "lattice_json",
    "maximal_subgroups",
    "mi_lattice",
    "min_trivial_intersection_family",
    "JoinGraph",
    "build_delta",
    "equivalence_classes",
    "hull",
    "neighborhood",
    "reconstruct_mi",
    "reconstruction_matches",
    "ChiefFactorRecord",
    "MoebiusTable",
    "NotSolubleError",
    "chief_series",
    "hall_vanishing_check",
    "moebius_table",
    "mu_product_formula",
    "normal_mi_check",
    "Classification",
    "classification",
    "coprime_factorization",
    "delta_nilpotent_partner",
    "is_nilpotent",
    "is_soluble",
    "is_supersoluble",
    "m_nilpotent_partner",
    "pgroup_signature",
    "search_nilpotent_partner",
    "IsoResult",
    "canonical_form",
    "graph_iso",
    "poset_iso",
]
