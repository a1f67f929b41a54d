"""Online edge coloring: colorers, lower-bound generators and diagnostics."""

from ._core import (
    BudgetExceeded,
    FormatError,
    GenerationFailure,
    Instance,
    InvalidParams,
    Params,
    PoolExhaustion,
    RunResult,
    StreamViolation,
    TraceMissing,
    azuma_bound,
    bias_tree,
    derive_params,
    enumerate,
    gadget_farm,
    list_lb_deterministic_fails,
    list_lb_randomized,
    random_graph,
    random_order,
    run,
    two_star_bridge,
)

__all__ = [
    "BudgetExceeded",
    "FormatError",
    "GenerationFailure",
    "Instance",
    "InvalidParams",
    "Params",
    "PoolExhaustion",
    "RunResult",
    "StreamViolation",
    "TraceMissing",
    "azuma_bound",
    "bias_tree",
    "derive_params",
    "enumerate",
    "gadget_farm",
    "list_lb_deterministic_fails",
    "list_lb_randomized",
    "random_graph",
    "random_order",
    "run",
    "two_star_bridge",
]
