from ._qc import (
    ScenarioError,
    __version__,
    builtin_doubleslit_ini,
    check_scenario,
    run_scenario,
    simulate,
)

__all__ = [
    "ScenarioError",
    "__version__",
    "builtin_doubleslit_ini",
    "check_scenario",
    "run_scenario",
    "simulate",
]
