"""Solver steppers, states, schedules and the iteration driver."""

from .states import (
    AccelState,
    DrsState,
    DualAdmmState,
    LiftedAdmmState,
    PrimalDualState,
    SchemeState,
)
from .runner import iterate, run, run_states
from .baseline import (
    QuadraticAlmSolver,
    balanced_alm_step,
    chambolle_pock_step,
    classical_alm_step,
    dual_primal_balanced_alm_step,
    proximal_alm_step,
)
from .lifted import (
    DrsSplitting,
    affine_resolvent_y,
    affine_resolvent_z,
    drs_balanced_config,
    drs_dual_primal_config,
    drs_step,
    lifted_admm_step,
)
from .schedules import (
    Schedule,
    ScheduleReport,
    constant_schedule,
    default_schedule,
    linear_schedule,
    validate_schedule,
)
from .accelerated import accel_balanced_step, accel_dual_primal_step, h_factor, run_accelerated
from .dual_admm import (
    accel_prox_admm_step,
    prox_admm_balanced_step,
    prox_admm_dual_primal_step,
    recover_primal_negated,
    recover_primal_prox_admm_dual_primal,
    recover_primal_ratio_dual_admm,
    ratio_dual_admm_step,
    ratio_dual_primal_alm_step,
)
from .scheme import (
    OrderClass,
    SchemeParams,
    UpdateOrder,
    block_update,
    check_scheme_invariants,
    classify_order,
    enumerate_orders,
    initial_scheme_state,
    recover_primal_balanced,
    recover_primal_dual_primal,
    scheme_pairs,
    scheme_step,
)

__all__ = [
    "AccelState",
    "DrsState",
    "DualAdmmState",
    "LiftedAdmmState",
    "PrimalDualState",
    "SchemeState",
    "iterate",
    "run",
    "run_states",
    "QuadraticAlmSolver",
    "balanced_alm_step",
    "chambolle_pock_step",
    "classical_alm_step",
    "dual_primal_balanced_alm_step",
    "proximal_alm_step",
    "DrsSplitting",
    "affine_resolvent_y",
    "affine_resolvent_z",
    "drs_balanced_config",
    "drs_dual_primal_config",
    "drs_step",
    "lifted_admm_step",
    "Schedule",
    "ScheduleReport",
    "constant_schedule",
    "default_schedule",
    "linear_schedule",
    "validate_schedule",
    "accel_balanced_step",
    "accel_dual_primal_step",
    "h_factor",
    "run_accelerated",
    "accel_prox_admm_step",
    "prox_admm_balanced_step",
    "prox_admm_dual_primal_step",
    "recover_primal_negated",
    "recover_primal_prox_admm_dual_primal",
    "recover_primal_ratio_dual_admm",
    "ratio_dual_admm_step",
    "ratio_dual_primal_alm_step",
    "OrderClass",
    "SchemeParams",
    "UpdateOrder",
    "block_update",
    "check_scheme_invariants",
    "classify_order",
    "enumerate_orders",
    "initial_scheme_state",
    "recover_primal_balanced",
    "recover_primal_dual_primal",
    "scheme_pairs",
    "scheme_step",
]
