"""Household lighting adoption simulator (Python bindings)."""

from ._lumsim import (
    Config,
    ConfigError,
    RunFactors,
    RunResult,
    SimulationFault,
    catalog_csv,
    effective_efficiency,
    effective_price,
    generate_archetypes_csv,
    results_csv,
    run_ensemble,
    run_simulation,
    scenario_ids,
    scenario_json,
    sensitivity,
    spearman,
    summarize,
    tipping_point,
)

__all__ = [
    "Config",
    "ConfigError",
    "RunFactors",
    "RunResult",
    "SimulationFault",
    "catalog_csv",
    "effective_efficiency",
    "effective_price",
    "generate_archetypes_csv",
    "results_csv",
    "run_ensemble",
    "run_simulation",
    "scenario_ids",
    "scenario_json",
    "sensitivity",
    "spearman",
    "summarize",
    "tipping_point",
]
