"""Persistent homology of finite pseudo-quasi-metric spaces."""
from .errors import GuardExceeded, InputError, InvalidSpaceError
from .filtrations import (
    DigraphFiltration,
    digraph_filtration,
    directed_rips,
    poset_rips,
    reachability_thresholds,
    rips_fa,
)
from .otcomplex import (
    FilteredOTComplex,
    boundary,
    boundary_squared_is_zero,
    from_clique_filtration,
    homology_rank_oracle,
    is_expansion,
    normalize,
)
from .persistence import Bar, FilteredCellComplex, PersistenceDiagram, bottleneck, reduce
from .scc import scc_at, scc_barcode
from .spaces import (
    Correspondence,
    ExpansionPair,
    Space,
    SpaceClass,
    WeightedDigraph,
    check_fa_triangle,
    classify,
    expand_pair,
    from_digraph,
    gromov_hausdorff,
    quotient_zero_pairs,
    symmetrize_fa,
)
from .stability import (
    StabilityReport,
    check_complex_interleaving,
    check_stability,
    compute_barcode,
)

__version__ = "0.1.0"
