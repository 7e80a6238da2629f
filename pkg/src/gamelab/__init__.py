"""gamelab: exact analysis of altruistic extensions of finite games.

Build games from standard families (fair cost sharing, linear congestion,
symmetric singleton, valid utility), extend them with per-player altruism
levels, and compute — all in exact rational arithmetic — pure and mixed
equilibria, optimum profiles, prices of anarchy and stability, worst-case
(coarse) correlated equilibria via an exact simplex, smoothness
certificates with the instance-level robust price of anarchy, and
no-regret dynamics with verified average-cost bounds.
"""

__version__ = "0.1.0"

from .game import (
    Altruism,
    CapExceededError,
    Game,
    Orientation,
    Profile,
    UndefinedRatioError,
    deviate,
    enumerate_profiles,
    from_tables,
    perceived_value,
    profile_cap,
    residual_value,
)
from .rationals import INFINITY, Infinity, format_rational, parse_rational

from .families import (
    CongestionSpec,
    CostSharingSpec,
    ExampleInstance,
    FamilyError,
    NormalizedCongestion,
    PotentialKind,
    SingletonTableSpec,
    UtilitySpec,
    ValidationError,
    build_cost_sharing,
    build_linear_congestion,
    build_singleton_table,
    build_valid_utility,
    example_instance,
    is_semi_convex,
    normalize_congestion,
    potential,
    singleton_congestion,
    validate_submodular,
)

from .equilibria import (
    BrdResult,
    BrdStatus,
    EquilibriumReport,
    JointDistribution,
    MixedProfile,
    best_response_dynamics,
    enumerate_pure_ne,
    expected_social_cost,
    is_pure_ne,
    optimum,
    pure_poa_pos,
    verify_mixed_ne,
)

from .lp import (
    Constraint,
    CoarseResult,
    LinearProgram,
    LpSolution,
    LpStatus,
    Relation,
    solve,
    worst_cce,
    worst_ce,
)

from .smoothness import (
    PairDomain,
    RpoaResult,
    SmoothnessCertificate,
    convexity_probe,
    is_smooth,
    quasiconvexity_probe,
    rpoa,
    rpoa_extremes,
    smoothness_lhs,
)

from .dynamics import (
    LearnerConfig,
    LearnerKind,
    PlayerRegret,
    Trajectory,
    average_external_regret,
    run_no_regret,
    total_anarchy_check,
)

from .bounds import (
    CATALOG,
    ComputedQuantities,
    Direction,
    alpha_to_xi,
    compare_report,
    eval_bound,
    harmonic,
    xi_to_alpha,
)
