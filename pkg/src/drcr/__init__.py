"""Delay-range constrained routing and Srlg-disjoint path-pair solvers."""

from .graph import (
    GraphFormatError,
    Link,
    Network,
    Path,
    Srlg,
    dump_network,
    is_elementary,
    load_network,
    srlgs_of_path,
)
from .pulse import (
    DrcrCase,
    DrcrQuery,
    PulseOptions,
    SearchStats,
    classify_case,
    pulse_plus,
    solve_drcr,
)
from .costfn import CostFunction, compute_cost_functions, eval_cost_function
from .ksp import (
    KspStats,
    LambdaResult,
    WeightFn,
    choose_lambda,
    cost_ksp_drcr,
    delay_ksp_drcr,
    lagrangian_ksp_drcr,
    srlg_ksp_drcr,
    srlg_lagrangian_ksp,
    yen_ksp,
)
from .srlg import (
    ConflictSet,
    CoseStats,
    PathPair,
    SrlgDrcrQuery,
    SubInstance,
    backup_search,
    cose_pulse_plus,
    find_conflict_set,
)
from .testgen import GenConfig, GenerationError, classify_trap, gen_drcr_query, \
    gen_er_network, gen_srlg_query, gen_srlgs

__version__ = "0.1.0"
