"""W-state targets, fidelity, a dense-matrix oracle, and success-probability bookkeeping."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .circuit import Circuit, run
from .fock import (
    DEFAULT_EPSILON,
    Configuration,
    StateVector,
    H,
    V,
    inner_product,
    norm,
)
from .gates import CNOT, Hadamard, VGate, apply_gate, vgate_truth_table


def w_state(n: int, prune_epsilon: float = DEFAULT_EPSILON) -> StateVector:
    """Equal superposition of the ``n`` configurations holding exactly one V photon."""
    if n < 2:
        raise ValueError(f"W state needs at least 2 qubits, got {n}")
    amp = 1 / math.sqrt(n)
    terms = []
    for k in range(n):
        slots = [H] * n
        slots[k] = V
        terms.append((Configuration(tuple(slots)), amp))
    return StateVector(n, terms, prune_epsilon)


def fidelity(state: StateVector, target: StateVector, tol: float = 1e-9) -> float:
    """Squared overlap |<target|state>|^2 of two normalized pure states."""
    for name, s in (("state", state), ("target", target)):
        nrm = norm(s)
        if abs(nrm - 1) > tol:
            raise ValueError(f"{name} is not normalized (norm {nrm:.12g})")
    return abs(inner_product(target, state)) ** 2


# ---------------------------------------------------------------------------
# dense oracle

def polarization_basis(n: int) -> list[Configuration]:
    """All 2**n fully occupied configurations, in canonical (text) order."""
    return [Configuration(p) for p in itertools.product((H, V), repeat=n)]


def state_to_vector(state: StateVector, basis: Sequence[Configuration]) -> np.ndarray:
    index = {c: i for i, c in enumerate(basis)}
    vec = np.zeros(len(basis), dtype=complex)
    for config, amp in state.items():
        if config not in index:
            raise ValueError(f"configuration {config} is outside the polarization basis")
        vec[index[config]] = amp
    return vec


def build_dense_operator(circuit: Circuit) -> np.ndarray:
    """Operator of ``circuit`` assembled column by column from sparse runs.

    Column ``j`` is the final state of running the circuit on basis
    configuration ``j`` of :func:`polarization_basis`.
    """
    basis = polarization_basis(circuit.mode_count)
    cols = [state_to_vector(run(circuit, b).final, basis) for b in basis]
    return np.column_stack(cols) if cols else np.zeros((0, 0), dtype=complex)


_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def _bit(index: int, mode: int, n: int) -> int:
    # mode 1 is the most significant bit; H = 0, V = 1
    return (index >> (n - mode)) & 1


def gate_matrix(gate, n: int) -> np.ndarray:
    """Dense 2**n x 2**n matrix of one gate on fully occupied configurations.

    Hadamard, cNOT and V are written down from their definitions with numpy;
    other elements fall back to applying the sparse gate column by column.
    """
    dim = 2**n
    if isinstance(gate, Hadamard):
        mats = [_HADAMARD if m == gate.mode else np.eye(2) for m in range(1, n + 1)]
        out = np.ones((1, 1), dtype=complex)
        for m in mats:
            out = np.kron(out, m)
        return out
    if isinstance(gate, (CNOT, VGate)):
        out = np.zeros((dim, dim), dtype=complex)
        for j in range(dim):
            c, t = _bit(j, gate.control, n), _bit(j, gate.target, n)
            if isinstance(gate, CNOT):
                new_t = t ^ c
            else:
                pol = (H, V)
                _, nt = vgate_truth_table((pol[c], pol[t]))
                new_t = pol.index(nt)
            i = j ^ ((t ^ new_t) << (n - gate.target))
            out[i, j] = 1
        return out
    basis = polarization_basis(n)
    cols = [state_to_vector(apply_gate(StateVector.basis(b), gate), basis) for b in basis]
    return np.column_stack(cols)


def oracle_operator(circuit: Circuit) -> np.ndarray:
    """Product of per-gate dense matrices, independent of the sparse runner."""
    n = circuit.mode_count
    out = np.eye(2**n, dtype=complex)
    for g in circuit.gates:
        out = gate_matrix(g, n) @ out
    return out


@dataclass
class OracleReport:
    max_deviation: float
    tolerance: float
    columns: int

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance


def oracle_check(circuit: Circuit, tolerance: float = 1e-12) -> OracleReport:
    sparse = build_dense_operator(circuit)
    dense = oracle_operator(circuit)
    dev = float(np.max(np.abs(sparse - dense))) if sparse.size else 0.0
    return OracleReport(dev, tolerance, sparse.shape[1] if sparse.size else 0)


# ---------------------------------------------------------------------------
# success probabilities

@dataclass
class SchemeModel:
    """A W-state construction with its ideal success rate and the gates it needs.

    ``component_probabilities`` maps a gate label to its realization
    probability and ``multiplicity`` to how many of them the scheme uses.
    """

    name: str
    structural_probability: Fraction
    component_probabilities: dict[str, Fraction] = field(default_factory=dict)
    multiplicity: dict[str, int] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        probs = {"structural": self.structural_probability, **self.component_probabilities}
        for label, p in probs.items():
            if not 0 < p <= 1:
                raise ValueError(f"{self.name}: probability for {label} must be in (0, 1], got {p}")
        for label, count in self.multiplicity.items():
            if label not in self.component_probabilities:
                raise ValueError(f"{self.name}: no probability for component {label!r}")
            if count < 1:
                raise ValueError(f"{self.name}: count for {label} must be >= 1, got {count}")


@dataclass
class SuccessReport:
    scheme: str
    structural: Fraction
    end_to_end: Fraction
    components: list[tuple[str, Fraction, int]]
    notes: list[str]

    def to_json(self) -> dict:
        return {
            "scheme": self.scheme,
            "structural": float(self.structural),
            "end_to_end": float(self.end_to_end),
            "components": [
                {"label": label, "p": float(p), "count": count} for label, p, count in self.components
            ],
            "notes": list(self.notes),
        }


def order_of_magnitude(x: float) -> int:
    return math.floor(math.log10(x))


def end_to_end_probability(model: SchemeModel) -> SuccessReport:
    total = Fraction(model.structural_probability)
    components = []
    for label, count in model.multiplicity.items():
        p = model.component_probabilities[label]
        total *= p**count
        components.append((label, p, count))
    notes = list(model.notes)
    if components and total < 1:
        notes.append(f"end-to-end order of 10^{order_of_magnitude(float(total))}")
    return SuccessReport(model.name, model.structural_probability, total, components, notes)


CNOT_LINEAR_OPTICS = Fraction(1, 9)
CNOT_ENTANGLED_RESOURCE = Fraction(1, 4)
TOFFOLI_LINEAR_OPTICS = Fraction(1, 32)
FREDKIN_LINEAR_OPTICS = Fraction(1, 1000)
FREDKIN_NOTE = "fredkin p = 1e-3 is an order-of-magnitude figure only"

CNOT_MODELS = {
    "1/9": CNOT_LINEAR_OPTICS,
    "1/4": CNOT_ENTANGLED_RESOURCE,
    "1": Fraction(1),
}


def builtin_scheme_table(cnot_p: Fraction = CNOT_LINEAR_OPTICS) -> list[SchemeModel]:
    """The four-qubit W-state schemes being compared, with ``cnot_p`` per cNOT."""
    cnot = {"cnot": cnot_p}
    return [
        SchemeModel(
            "basic fusion",
            Fraction(4, 9),
            notes=["fuses smaller W states with linear optics only"],
        ),
        SchemeModel(
            "fredkin-enhanced fusion",
            Fraction(2, 3),
            {"fredkin": FREDKIN_LINEAR_OPTICS},
            {"fredkin": 1},
            notes=[FREDKIN_NOTE, "gate inventory besides the fredkin not modeled"],
        ),
        SchemeModel(
            "four-bell fusion",
            Fraction(1, 4),
            {**cnot, "toffoli": TOFFOLI_LINEAR_OPTICS},
            {"cnot": 3, "toffoli": 1},
            notes=["fuses four W-type Bell states"],
        ),
        SchemeModel(
            "three-w fusion",
            Fraction(1, 3),
            {"fredkin": FREDKIN_LINEAR_OPTICS},
            {"fredkin": 1},
            notes=[FREDKIN_NOTE, "two basic fusion gates not modeled"],
        ),
        SchemeModel(
            "deterministic cnot+toffoli",
            Fraction(1),
            {**cnot, "toffoli": TOFFOLI_LINEAR_OPTICS},
            {"cnot": 5, "toffoli": 1},
            notes=["no entangled resource needed"],
        ),
        SchemeModel(
            "deterministic eight-cnot",
            Fraction(1),
            dict(cnot),
            {"cnot": 8},
        ),
        SchemeModel(
            "this circuit (2 cnot + 4 vgate)",
            Fraction(1),
            dict(cnot),
            {"cnot": 6},
            notes=["no entangled resource needed", "each V gate contains one cnot"],
        ),
    ]


def compare_schemes(cnot_p: Fraction = CNOT_LINEAR_OPTICS) -> list[SuccessReport]:
    return [end_to_end_probability(m) for m in builtin_scheme_table(cnot_p)]


def format_scheme_table(reports: Sequence[SuccessReport]) -> str:
    rows = [("scheme", "structural", "end_to_end", "components", "notes")]
    for r in reports:
        comps = ", ".join(f"{label} x{count} @ {p}" for label, p, count in r.components) or "-"
        rows.append(
            (r.scheme, str(r.structural), f"{float(r.end_to_end):.6g}", comps, "; ".join(r.notes))
        )
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    lines = []
    for row in rows:
        cells = [row[i].ljust(widths[i]) for i in range(4)] + [row[4]]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"
