"""Simulator for polarization-encoded photonic circuits and deterministic W-state creation."""

from .analysis import fidelity, w_state
from .circuit import (
    Circuit,
    ExecutionTrace,
    ValidationError,
    build_bell_stage,
    build_paper_circuit,
    build_u_stage,
    run,
    validate,
)
from .fock import (
    BunchingError,
    Configuration,
    H,
    PhysicsError,
    Polarization,
    StateVector,
    V,
    inner_product,
    norm,
)
from .gates import CNOT, PBS, PC, CollisionError, Hadamard, VGate

__all__ = [
    "BunchingError",
    "CNOT",
    "Circuit",
    "CollisionError",
    "Configuration",
    "ExecutionTrace",
    "H",
    "Hadamard",
    "PBS",
    "PC",
    "PhysicsError",
    "Polarization",
    "StateVector",
    "V",
    "VGate",
    "ValidationError",
    "build_bell_stage",
    "build_paper_circuit",
    "build_u_stage",
    "fidelity",
    "inner_product",
    "norm",
    "run",
    "validate",
    "w_state",
]
