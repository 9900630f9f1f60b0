"""Digital simulation of spin-model quench dynamics.

Compiles central-spin and transverse-field Ising models into Trotterized
{U3, CNOT} circuits, runs them on a dense state-vector engine with optional
device-noise emulation, validates against exact-evolution oracles, and
post-processes measured occupations into offset-subtracted and normalized
signals.
"""

__version__ = "0.1.0"

from .circuit import Circuit, Gate, census, export_openqasm, import_openqasm, run
from .models import CentralSpinSpec, InitialStateSpec, IsingSpec, full_experiment
from .noise import NoiseModel, error_budget, run_noisy
from .statevector import QuantumState, U3Params, fidelity, new_zero_state, sample

__all__ = [
    "__version__",
    "Circuit",
    "Gate",
    "QuantumState",
    "U3Params",
    "CentralSpinSpec",
    "IsingSpec",
    "InitialStateSpec",
    "NoiseModel",
    "census",
    "error_budget",
    "export_openqasm",
    "fidelity",
    "full_experiment",
    "import_openqasm",
    "new_zero_state",
    "run",
    "run_noisy",
    "sample",
]
