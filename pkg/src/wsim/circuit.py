"""Circuits as ordered gate lists, their static checks, and traced execution."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .fock import DEFAULT_EPSILON, Configuration, PhysicsError, StateVector, WsimError
from .gates import CNOT, PBS, PC, Gate, Hadamard, VGate, apply_gate


class ValidationError(WsimError):
    def __init__(self, diagnostics: Sequence["Diagnostic"]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


@dataclass(frozen=True)
class Diagnostic:
    gate_index: Optional[int]
    message: str

    def __str__(self) -> str:
        if self.gate_index is None:
            return self.message
        return f"gate {self.gate_index}: {self.message}"


@dataclass(frozen=True)
class Circuit:
    """``mode_count`` primary modes (1-based) and gates applied in list order.

    V gates without explicit auxiliary modes get a fresh pair above the
    primary range, two per V gate, in order of appearance.
    """

    mode_count: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self) -> None:
        gates = tuple(self.gates)
        taken = {m for g in gates for m in g.modes}
        nxt = self.mode_count + 1
        resolved = []
        for g in gates:
            if isinstance(g, VGate) and (g.aux1 is None or g.aux2 is None):
                while nxt in taken or nxt + 1 in taken:
                    nxt += 1
                g = g.with_aux(nxt, nxt + 1)
                taken.update((nxt, nxt + 1))
                nxt += 2
            resolved.append(g)
        object.__setattr__(self, "gates", tuple(resolved))

    def __add__(self, other: "Circuit") -> "Circuit":
        return Circuit(max(self.mode_count, other.mode_count), _unresolved(self.gates + other.gates))

    @property
    def aux_modes(self) -> tuple[int, ...]:
        return tuple(m for g in self.gates if isinstance(g, VGate) for m in (g.aux1, g.aux2))

    def cnot_count(self) -> int:
        """Explicit cNOTs plus the one inside every V gate."""
        return sum(isinstance(g, (CNOT, VGate)) for g in self.gates)


def _unresolved(gates):
    return tuple(VGate(g.control, g.target) if isinstance(g, VGate) else g for g in gates)


@dataclass
class TraceStep:
    gate_index: int
    desc: str
    state: StateVector


@dataclass
class ExecutionTrace:
    initial: StateVector
    steps: list[TraceStep] = field(default_factory=list)

    @property
    def final(self) -> StateVector:
        return self.steps[-1].state if self.steps else self.initial

    def to_json(self) -> dict:
        return {
            "input": self.initial.to_json(),
            "steps": [
                {"gate": s.gate_index, "desc": s.desc, "state": s.state.to_json()} for s in self.steps
            ],
            "final": self.final.to_json(),
        }


def validate(circuit: Circuit, occupied: Optional[set[int]] = None) -> list[Diagnostic]:
    """Static wiring checks; returns an empty list for a sound circuit.

    ``occupied`` is the set of primary modes that may carry a photon at the
    input (default: all of them). Occupancy is then propagated conservatively
    through PBS and PC routing so that outputs landing on a possibly occupied
    mode are flagged.
    """
    diags: list[Diagnostic] = []
    n = circuit.mode_count
    if n < 1:
        diags.append(Diagnostic(None, f"mode count must be positive, got {n}"))
    maybe = set(range(1, n + 1)) if occupied is None else set(occupied)
    aux = circuit.aux_modes
    aux_seen: dict[int, int] = {}

    for i, g in enumerate(circuit.gates):
        modes = g.modes
        if isinstance(g, PBS):
            groups = [(g.in1, g.in2), (g.out1, g.out2)]
        elif isinstance(g, PC):
            groups = [(g.in1, g.in2)]
        else:
            groups = [modes]
        # outputs may reuse input modes (in-place routing); otherwise no repeats
        if any(len(set(grp)) != len(grp) for grp in groups):
            diags.append(Diagnostic(i, f"self-referencing gate ({g.describe()})"))
        primary = modes[:2] if isinstance(g, VGate) else modes
        for m in primary:
            if not 1 <= m <= n:
                diags.append(Diagnostic(i, f"{g.describe()} references undeclared mode {m}"))
        if isinstance(g, VGate):
            for m in (g.aux1, g.aux2):
                if m <= n:
                    diags.append(Diagnostic(i, f"auxiliary mode {m} overlaps the {n} primary modes"))
                if m in aux_seen:
                    diags.append(Diagnostic(i, f"auxiliary mode {m} already used by gate {aux_seen[m]}"))
                aux_seen[m] = i
        elif any(m in aux for m in modes):
            diags.append(Diagnostic(i, f"{g.describe()} touches a V-gate auxiliary mode"))

        if isinstance(g, PBS):
            live = {g.in1, g.in2} & maybe
            for out in (g.out1, g.out2):
                if out not in (g.in1, g.in2) and out in maybe:
                    diags.append(Diagnostic(i, f"PBS output mode {out} may already hold a photon"))
            maybe -= {g.in1, g.in2}
            if live:
                maybe |= {g.out1, g.out2}
        elif isinstance(g, PC):
            live = {g.in1, g.in2} & maybe
            if g.out not in (g.in1, g.in2) and g.out in maybe:
                diags.append(Diagnostic(i, f"PC output mode {g.out} may already hold a photon"))
            maybe -= {g.in1, g.in2}
            if live:
                maybe.add(g.out)
    return diags


def run(
    circuit: Circuit,
    input: Configuration | StateVector | str,
    prune_epsilon: float = DEFAULT_EPSILON,
) -> ExecutionTrace:
    """Apply the gates in order, recording the state after each one.

    Raises :class:`ValidationError` for an unsound circuit and
    :class:`~wsim.fock.PhysicsError` (with ``gate_index`` set) when a gate
    bunches photons or a path coupler collides.
    """
    if isinstance(input, str):
        input = Configuration.parse(input)
    state = input if isinstance(input, StateVector) else StateVector.basis(input, prune_epsilon)
    if state.mode_count != circuit.mode_count:
        raise ValidationError(
            [Diagnostic(None, f"input has {state.mode_count} modes, circuit declares {circuit.mode_count}")]
        )
    occupied = {m for c in state for m in range(1, c.mode_count + 1) if c[m] is not None}
    diags = validate(circuit, occupied)
    if diags:
        raise ValidationError(diags)

    trace = ExecutionTrace(initial=state)
    for i, g in enumerate(circuit.gates):
        try:
            state = apply_gate(state, g)
        except PhysicsError as exc:
            exc.gate_index = i
            raise
        trace.steps.append(TraceStep(i, g.describe(), state))
    return trace


def build_bell_stage() -> Circuit:
    """Two W-type Bell pairs on modes (1, 2) and (3, 4).

    With input H, V, H, V, a Hadamard on 1 and 3 followed by cNOT 1->2 and
    cNOT 3->4 gives (|HV> + |VH>)/sqrt(2) on each pair, and the product is the
    equal four-term superposition HVHV + HVVH + VHHV + VHVH. The figure does
    not spell out this wiring; it is the natural one that gives that product.
    """
    return Circuit(4, (Hadamard(1), Hadamard(3), CNOT(1, 2), CNOT(3, 4)))


# (control, target) in application order; U = V31 V23 V14 V42 read control-first
U_STAGE_PAIRS = ((4, 2), (1, 4), (2, 3), (3, 1))


def build_u_stage(pairs: Sequence[tuple[int, int]] = U_STAGE_PAIRS) -> Circuit:
    """The four V gates turning the Bell-pair product into the W state.

    Index pairs are read as (control, target). Reading them target-first does
    not reproduce the intermediate states; see ``tests/test_negative_control.py``.
    """
    return Circuit(4, tuple(VGate(c, t) for c, t in pairs))


def build_paper_circuit() -> Circuit:
    return build_bell_stage() + build_u_stage()

