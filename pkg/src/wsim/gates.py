"""Optical elements acting on :class:`~wsim.fock.StateVector`.

Every element is given by its action on a single configuration and extended
linearly with :func:`~wsim.fock.apply_basis_map`. Conventions:

* PBS transmits H and reflects V, with reflection phase +1.
* cNOT flips the target when the control photon is V; if either mode is
  vacuum the state passes through scaled by ``ETA`` (= 1).
* The V gate flips a V target to H only when the control is also V. It is
  built from two splitting PBSs, a cNOT between the two auxiliary rails, and a
  merging PBS + path coupler.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Union

from .fock import (
    BunchingError,
    Configuration,
    Occupancy,
    PhysicsError,
    StateVector,
    H,
    V,
    apply_basis_map,
)

SQRT1_2 = 0.5**0.5
ETA: complex = 1.0 + 0j


class CollisionError(PhysicsError):
    """A path coupler received photons on both inputs."""


@dataclass(frozen=True)
class Hadamard:
    mode: int

    keyword = "had"

    @property
    def modes(self) -> tuple[int, ...]:
        return (self.mode,)

    def describe(self) -> str:
        return f"had {self.mode}"


@dataclass(frozen=True)
class PBS:
    in1: int
    in2: int
    out1: int
    out2: int

    keyword = "pbs"

    @property
    def modes(self) -> tuple[int, ...]:
        return (self.in1, self.in2, self.out1, self.out2)

    def describe(self) -> str:
        return f"pbs {self.in1} {self.in2} -> {self.out1} {self.out2}"

    def mirrored(self) -> "PBS":
        return PBS(self.out1, self.out2, self.in1, self.in2)


@dataclass(frozen=True)
class PC:
    in1: int
    in2: int
    out: int

    keyword = "pc"

    @property
    def modes(self) -> tuple[int, ...]:
        return (self.in1, self.in2, self.out)

    def describe(self) -> str:
        return f"pc {self.in1} {self.in2} -> {self.out}"


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int

    keyword = "cnot"

    @property
    def modes(self) -> tuple[int, ...]:
        return (self.control, self.target)

    def describe(self) -> str:
        return f"cnot {self.control} {self.target}"


@dataclass(frozen=True)
class VGate:
    """Composite V gate. ``aux1``/``aux2`` are the temporary rails for the
    control and target photons; ``None`` means "allocate on use"."""

    control: int
    target: int
    aux1: Optional[int] = None
    aux2: Optional[int] = None

    keyword = "vgate"

    @property
    def modes(self) -> tuple[int, ...]:
        return tuple(m for m in (self.control, self.target, self.aux1, self.aux2) if m is not None)

    def describe(self) -> str:
        return f"vgate {self.control} {self.target}"

    def with_aux(self, aux1: int, aux2: int) -> "VGate":
        return replace(self, aux1=aux1, aux2=aux2)


Gate = Union[Hadamard, PBS, PC, CNOT, VGate]


def _check_modes(state: StateVector, gate) -> None:
    for m in gate.modes:
        if not 1 <= m <= state.mode_count:
            raise PhysicsError(f"{gate.describe()}: mode {m} outside 1..{state.mode_count}")


def _place(config: Configuration, cleared: tuple[int, ...], placements) -> Configuration:
    """Empty ``cleared`` modes, then drop each (mode, polarization) photon in."""
    slots = list(config.slots)
    for m in cleared:
        slots[m - 1] = None
    for mode, pol in placements:
        if slots[mode - 1] is not None:
            raise BunchingError(f"two photons routed into mode {mode} from {config}")
        slots[mode - 1] = pol
    return Configuration(tuple(slots))


def apply_hadamard(state: StateVector, mode: int) -> StateVector:
    gate = Hadamard(mode)
    _check_modes(state, gate)
    n, eps = state.mode_count, state.prune_epsilon

    def rule(config: Configuration) -> StateVector:
        pol = config[mode]
        if pol is None:
            return StateVector(n, {config: 1.0}, eps)
        sign = 1.0 if pol is H else -1.0
        return StateVector(
            n,
            [(config.with_modes({mode: H}), SQRT1_2), (config.with_modes({mode: V}), sign * SQRT1_2)],
            eps,
        )

    return apply_basis_map(state, rule)


def apply_pbs(state: StateVector, g: PBS, reflection_phase: complex = 1.0) -> StateVector:
    """Polarizing beamsplitter: H goes straight through, V is reflected.

    ``reflection_phase`` multiplies every reflected photon; the default +1
    keeps all amplitudes real.
    """
    _check_modes(state, g)
    n, eps = state.mode_count, state.prune_epsilon
    route = {
        (g.in1, H): (g.out1, 1.0),
        (g.in1, V): (g.out2, reflection_phase),
        (g.in2, H): (g.out2, 1.0),
        (g.in2, V): (g.out1, reflection_phase),
    }

    def rule(config: Configuration) -> StateVector:
        placements = []
        amp = 1.0 + 0j
        for src in (g.in1, g.in2):
            pol = config[src]
            if pol is not None:
                dst, phase = route[(src, pol)]
                placements.append((dst, pol))
                amp *= phase
        return StateVector(n, {_place(config, (g.in1, g.in2), placements): amp}, eps)

    return apply_basis_map(state, rule)


def apply_pc(state: StateVector, g: PC) -> StateVector:
    """Path coupler: merges two modes, at most one of them occupied, into ``out``."""
    _check_modes(state, g)
    n, eps = state.mode_count, state.prune_epsilon

    def rule(config: Configuration) -> StateVector:
        p1, p2 = config[g.in1], config[g.in2]
        if p1 is not None and p2 is not None:
            raise CollisionError(f"{g.describe()}: both inputs occupied in {config}")
        pol = p1 if p1 is not None else p2
        placements = [] if pol is None else [(g.out, pol)]
        return StateVector(n, {_place(config, (g.in1, g.in2), placements): 1.0}, eps)

    return apply_basis_map(state, rule)


def apply_cnot(state: StateVector, g: CNOT) -> StateVector:
    _check_modes(state, g)
    n, eps = state.mode_count, state.prune_epsilon

    def rule(config: Configuration) -> StateVector:
        c, t = config[g.control], config[g.target]
        if c is None or t is None:
            return StateVector(n, {config: ETA}, eps)
        if c is V:
            config = config.with_modes({g.target: t.flipped()})
        return StateVector(n, {config: 1.0}, eps)

    return apply_basis_map(state, rule)


def _resolve_aux(state: StateVector, g: VGate) -> VGate:
    if g.aux1 is None or g.aux2 is None:
        return g.with_aux(state.mode_count + 1, state.mode_count + 2)
    return g


def _require_vacuum(state: StateVector, modes: tuple[int, ...], when: str) -> None:
    for config in state:
        for m in modes:
            if config[m] is not None:
                raise PhysicsError(f"auxiliary mode {m} not vacuum {when} V gate in {config}")


def vgate_steps(state: StateVector, g: VGate) -> list[StateVector]:
    """States after each of the three stages of the composite V gate.

    The state is widened with vacuum to cover the auxiliary modes if needed;
    the returned states are over the widened mode set.
    """
    g = _resolve_aux(state, g)
    if len({g.control, g.target, g.aux1, g.aux2}) != 4:
        raise PhysicsError(f"V gate modes must be distinct: {g}")
    width = max(state.mode_count, g.aux1, g.aux2)
    wide = state.resized(width)
    _check_modes(wide, g)
    _require_vacuum(wide, (g.aux1, g.aux2), "before")

    split_c = PBS(g.control, g.aux1, g.control, g.aux1)
    split_t = PBS(g.target, g.aux2, g.target, g.aux2)
    s1 = apply_pbs(apply_pbs(wide, split_c), split_t)
    s2 = apply_cnot(s1, CNOT(g.aux1, g.aux2))
    s3 = apply_pc(apply_pbs(s2, split_c), PC(g.target, g.aux2, g.target))
    _require_vacuum(s3, (g.aux1, g.aux2), "after")
    return [s1, s2, s3]


def apply_vgate_composite(state: StateVector, g: VGate) -> StateVector:
    return vgate_steps(state, g)[-1].resized(state.mode_count)


def vgate_truth_table(pair: tuple[Occupancy, Occupancy]) -> tuple[Occupancy, Occupancy]:
    """(control, target) -> (control, target); only (V, V) changes."""
    if pair == (V, V):
        return (V, H)
    return pair


def apply_vgate_direct(state: StateVector, g: VGate) -> StateVector:
    """V gate from its truth table alone, without auxiliary modes."""
    n, eps = state.mode_count, state.prune_epsilon

    def rule(config: Configuration) -> StateVector:
        c, t = vgate_truth_table((config[g.control], config[g.target]))
        return StateVector(n, {config.with_modes({g.control: c, g.target: t}): 1.0}, eps)

    return apply_basis_map(state, rule)


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    if isinstance(gate, Hadamard):
        return apply_hadamard(state, gate.mode)
    if isinstance(gate, PBS):
        return apply_pbs(state, gate)
    if isinstance(gate, PC):
        return apply_pc(state, gate)
    if isinstance(gate, CNOT):
        return apply_cnot(state, gate)
    if isinstance(gate, VGate):
        return apply_vgate_composite(state, gate)
    raise TypeError(f"not a gate: {gate!r}")
