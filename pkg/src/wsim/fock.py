"""Sparse state vectors over spatial modes holding at most one polarized photon.

A :class:`Configuration` fixes the occupancy of every mode (vacuum, or a single
H/V photon). A :class:`StateVector` is a sparse complex combination of
configurations that all share the same mode count. Modes are numbered from 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Iterator, Mapping, Optional

DEFAULT_EPSILON = 1e-12


class WsimError(Exception):
    """Base class for simulator errors."""


class PhysicsError(WsimError):
    """A gate was asked to do something the optics cannot do.

    ``gate_index`` is filled in by the circuit runner when known.
    """

    def __init__(self, message: str, gate_index: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.gate_index = gate_index

    def __str__(self) -> str:
        if self.gate_index is None:
            return self.message
        return f"gate {self.gate_index}: {self.message}"


class BunchingError(PhysicsError):
    """Two photons would share one spatial mode."""


class ModeMismatchError(WsimError, ValueError):
    """States over different mode counts were combined."""


class Polarization(Enum):
    H = "H"
    V = "V"

    def __lt__(self, other: "Polarization") -> bool:
        return self.value < other.value

    def flipped(self) -> "Polarization":
        return Polarization.V if self is Polarization.H else Polarization.H


H = Polarization.H
V = Polarization.V

# ``None`` stands for a vacuum mode.
Occupancy = Optional[Polarization]

_CHARS = {None: "0", H: "H", V: "V"}
_FROM_CHAR = {"0": None, "H": H, "V": V}


@dataclass(frozen=True, order=False)
class Configuration:
    """Occupancy of modes ``1..len(slots)``."""

    slots: tuple[Occupancy, ...]

    @classmethod
    def parse(cls, text: str) -> "Configuration":
        """Inverse of ``str()``: ``"HV00"`` -> H in mode 1, V in mode 2, rest vacuum."""
        try:
            return cls(tuple(_FROM_CHAR[c] for c in text))
        except KeyError as exc:
            raise ValueError(f"bad configuration character {exc.args[0]!r} in {text!r}") from None

    @classmethod
    def vacuum(cls, mode_count: int) -> "Configuration":
        return cls((None,) * mode_count)

    @property
    def mode_count(self) -> int:
        return len(self.slots)

    @property
    def photon_count(self) -> int:
        return sum(1 for s in self.slots if s is not None)

    def __getitem__(self, mode: int) -> Occupancy:
        if not 1 <= mode <= len(self.slots):
            raise IndexError(f"mode {mode} outside 1..{len(self.slots)}")
        return self.slots[mode - 1]

    def with_modes(self, changes: Mapping[int, Occupancy]) -> "Configuration":
        slots = list(self.slots)
        for mode, occ in changes.items():
            slots[mode - 1] = occ
        return Configuration(tuple(slots))

    def resized(self, mode_count: int) -> "Configuration":
        """Pad with vacuum or drop trailing modes (which must be vacuum)."""
        n = len(self.slots)
        if mode_count >= n:
            return Configuration(self.slots + (None,) * (mode_count - n))
        if any(s is not None for s in self.slots[mode_count:]):
            raise PhysicsError(f"cannot drop occupied modes from {self}")
        return Configuration(self.slots[:mode_count])

    def __str__(self) -> str:
        return "".join(_CHARS[s] for s in self.slots)

    def __lt__(self, other: "Configuration") -> bool:
        return str(self) < str(other)


def format_configuration(config: Configuration) -> str:
    return str(config)


def parse_configuration(text: str) -> Configuration:
    return Configuration.parse(text)


class StateVector:
    """Sparse superposition of configurations.

    Amplitudes with modulus at or below ``prune_epsilon`` are dropped whenever a
    state is built. Instances are treated as immutable values.
    """

    __slots__ = ("_terms", "mode_count", "prune_epsilon")

    def __init__(
        self,
        mode_count: int,
        terms: Mapping[Configuration, complex] | Iterable[tuple[Configuration, complex]] = (),
        prune_epsilon: float = DEFAULT_EPSILON,
    ):
        self.mode_count = mode_count
        self.prune_epsilon = prune_epsilon
        items = terms.items() if isinstance(terms, Mapping) else terms
        parts: dict[Configuration, list[complex]] = {}
        for config, amp in items:
            if config.mode_count != mode_count:
                raise ModeMismatchError(
                    f"configuration {config} has {config.mode_count} modes, state has {mode_count}"
                )
            amp = complex(amp)
            if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
                raise ValueError(f"non-finite amplitude {amp!r} for {config}")
            parts.setdefault(config, []).append(amp)
        # fsum is correctly rounded, so the result does not depend on insertion order
        terms = {}
        for config in sorted(parts):
            amps = parts[config]
            amp = amps[0] if len(amps) == 1 else complex(
                math.fsum(a.real for a in amps), math.fsum(a.imag for a in amps)
            )
            if abs(amp) > prune_epsilon:
                terms[config] = amp
        self._terms = terms

    @classmethod
    def basis(cls, config: Configuration | str, prune_epsilon: float = DEFAULT_EPSILON) -> "StateVector":
        if isinstance(config, str):
            config = Configuration.parse(config)
        return cls(config.mode_count, {config: 1.0}, prune_epsilon)

    @classmethod
    def from_strings(
        cls, terms: Mapping[str, complex], prune_epsilon: float = DEFAULT_EPSILON
    ) -> "StateVector":
        parsed = [(Configuration.parse(k), v) for k, v in terms.items()]
        if not parsed:
            raise ValueError("from_strings needs at least one term to fix the mode count")
        return cls(parsed[0][0].mode_count, parsed, prune_epsilon)

    def terms(self) -> dict[Configuration, complex]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Configuration, complex]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Configuration]:
        return iter(self._terms)

    def __getitem__(self, config: Configuration | str) -> complex:
        if isinstance(config, str):
            config = Configuration.parse(config)
        return self._terms.get(config, 0j)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.mode_count == other.mode_count and self._terms == other._terms

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        body = " + ".join(f"({a:.6g})|{c}>" for c, a in self._terms.items()) or "0"
        return f"StateVector({body})"

    def _like(self, terms) -> "StateVector":
        return StateVector(self.mode_count, terms, self.prune_epsilon)

    def __add__(self, other: "StateVector") -> "StateVector":
        _check_modes(self, other)
        return self._like(list(self._terms.items()) + list(other._terms.items()))

    def __sub__(self, other: "StateVector") -> "StateVector":
        return self + (-1) * other

    def __mul__(self, scalar: complex) -> "StateVector":
        return self._like((c, a * scalar) for c, a in self._terms.items())

    __rmul__ = __mul__

    def configurations(self) -> set[str]:
        return {str(c) for c in self._terms}

    def max_deviation(self, other: "StateVector") -> float:
        """Largest per-configuration amplitude difference."""
        _check_modes(self, other)
        keys = set(self._terms) | set(other._terms)
        return max((abs(self[k] - other[k]) for k in keys), default=0.0)

    def isclose(self, other: "StateVector", atol: float = 1e-12) -> bool:
        return self.mode_count == other.mode_count and self.max_deviation(other) <= atol

    def to_json(self) -> list[dict]:
        return [
            {"config": str(c), "re": a.real, "im": a.imag} for c, a in self._terms.items()
        ]

    @classmethod
    def from_json(cls, data: list[dict], prune_epsilon: float = DEFAULT_EPSILON) -> "StateVector":
        if not data:
            raise ValueError("empty state JSON carries no mode count")
        terms = [(Configuration.parse(t["config"]), complex(t["re"], t["im"])) for t in data]
        return cls(terms[0][0].mode_count, terms, prune_epsilon)

    def resized(self, mode_count: int) -> "StateVector":
        return StateVector(
            mode_count, ((c.resized(mode_count), a) for c, a in self._terms.items()), self.prune_epsilon
        )


def _check_modes(a: StateVector, b: StateVector) -> None:
    if a.mode_count != b.mode_count:
        raise ModeMismatchError(f"mode counts differ: {a.mode_count} vs {b.mode_count}")


def norm(state: StateVector) -> float:
    return math.sqrt(sum(abs(a) ** 2 for _, a in state.items()))


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugating the left argument."""
    _check_modes(a, b)
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    total = 0j
    for config in small:
        if config in large._terms:
            total += a[config].conjugate() * b[config]
    return total


def apply_basis_map(
    state: StateVector, f: Callable[[Configuration], StateVector]
) -> StateVector:
    """Linear extension of a per-configuration rule.

    ``f`` may return states over a different mode count, but all its outputs
    must agree with each other.
    """
    out: list[tuple[Configuration, complex]] = []
    mode_count = None
    for config, amp in state.items():
        image = f(config)
        if mode_count is None:
            mode_count = image.mode_count
        elif image.mode_count != mode_count:
            raise ModeMismatchError("basis map produced states over different mode counts")
        out.extend((c, amp * a) for c, a in image.items())
    return StateVector(state.mode_count if mode_count is None else mode_count, out, state.prune_epsilon)
