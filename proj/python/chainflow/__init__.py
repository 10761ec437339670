"""Online admission and embedding of service chains."""

from ._chainflow import (
    AceRun,
    ChainflowError,
    Instance,
    SolveResult,
    ace_run,
    adversarial_instance,
    adversary_run,
    branch_and_bound,
    brute_force,
    candidate_table,
    export_lp,
    greedy_run,
    hop_distances,
    independent_set_instance,
    load_instance,
    load_result,
    random_instance,
    save_instance,
    set_packing_instance,
    verify_solution,
)

__all__ = [
    "AceRun",
    "ChainflowError",
    "Instance",
    "SolveResult",
    "ace_run",
    "adversarial_instance",
    "adversary_run",
    "branch_and_bound",
    "brute_force",
    "candidate_table",
    "export_lp",
    "greedy_run",
    "hop_distances",
    "independent_set_instance",
    "load_instance",
    "load_result",
    "random_instance",
    "save_instance",
    "set_packing_instance",
    "verify_solution",
]
