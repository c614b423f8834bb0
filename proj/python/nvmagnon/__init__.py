"""Two NV qubits coupled through a displaced thermal magnon bath."""

import json as _json

from ._core import (
    Frame,
    MasterEqParams,
    PhysicsError,
    ValidationError,
    __version__,
    concurrence,
    dfs_fidelities,
    evolve,
    l1_coherence,
    liouvillian,
    named_state,
    preset_names,
    solve_resonance,
    steady_state,
)
from ._core import preset as _preset
from ._core import run_scenario as _run_scenario


def preset(name):
    """Preset configuration as a dict."""
    return _json.loads(_preset(name))


def run(config, scenario="", out_dir="", workers=0, markov=True):
    """Runs a scenario from a config dict and returns the manifest as a dict."""
    return _json.loads(_run_scenario(_json.dumps(config), scenario, out_dir, workers, markov))


__all__ = [
    "Frame",
    "MasterEqParams",
    "PhysicsError",
    "ValidationError",
    "__version__",
    "concurrence",
    "dfs_fidelities",
    "evolve",
    "l1_coherence",
    "liouvillian",
    "named_state",
    "preset",
    "preset_names",
    "run",
    "solve_resonance",
    "steady_state",
]
