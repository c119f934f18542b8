"""Marcello's completion of graphs: iterative, budget-limited edge addition until K_n."""

__version__ = "0.1.0"

from .canon import (  # noqa: E402
    CanonicalForm,
    canonical_form,
    canonical_labeling,
    enumerate_graph_classes,
    isomorphic,
    proper_classes,
)
from .engine import (  # noqa: E402
    ALL_VALID,
    SATURATED,
    GlobalPlan,
    LocalStep,
    apply_plan,
    degree_sum_bound,
    degree_sum_bound_holds,
    eligible_vertices,
    enumerate_outcomes,
    greedy_plan,
    one_shot_completable,
    validate_plan,
)
from .formats import emit_dot, emit_graph6, parse_graph6  # noqa: E402
from .graph import (  # noqa: E402
    Graph,
    GraphFamily,
    complement,
    complete,
    complete_bipartite,
    cycle,
    disjoint_union,
    generate,
    graph_from_edges,
    join,
    null,
    path,
    pearl,
    petersen,
    star,
    wheel,
)
from .kernels import BACKEND  # noqa: E402
from .solver import (  # noqa: E402
    INFINITE,
    MarcelloResult,
    SearchConfig,
    Solver,
    counting_lower_bound,
    marcello_index,
    marcello_number,
    marcello_upper,
    min_join_order,
    min_union_order,
    minimal_initiator_subset,
    verify_sequence,
)
