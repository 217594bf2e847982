"""Line-oriented circuit files (``.wqc``).

Grammar, one statement per line, tokens separated by whitespace::

    modes N                 # must come first
    had M
    pbs IN1 IN2 -> OUT1 OUT2
    pc IN1 IN2 -> OUT
    cnot CONTROL TARGET
    vgate CONTROL TARGET

``#`` starts a comment. Mode numbers are positive and 1-based. V-gate
auxiliary modes are never written; they are allocated above ``N``.

:func:`parse` returns either a :class:`~wsim.circuit.Circuit` or the list of
every :class:`ParseError` found; it does not raise on bad input.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional, Union

from .circuit import Circuit
from .fock import WsimError
from .gates import CNOT, PBS, PC, Gate, Hadamard, VGate

ARROW = "->"


class ErrorKind(Enum):
    UNKNOWN_KEYWORD = "UnknownKeyword"
    ARITY = "Arity"
    BAD_INTEGER = "BadInteger"
    MISSING_MODES_DECL = "MissingModesDecl"
    DUPLICATE_MODES_DECL = "DuplicateModesDecl"


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int


@dataclass(frozen=True)
class ParseError:
    span: SourceSpan
    message: str
    kind: ErrorKind

    def __str__(self) -> str:
        return f"{self.span.line}:{self.span.column}: {self.kind.value}: {self.message}"


@dataclass(frozen=True)
class Statement:
    keyword: str
    args: tuple[int, ...]
    span: SourceSpan


class QcdlError(WsimError):
    def __init__(self, errors: list[ParseError], source_name: str = "<string>"):
        self.errors = errors
        self.source_name = source_name
        super().__init__("\n".join(f"{source_name}:{e}" for e in errors))


# keyword -> (inputs before "->", outputs after "->"); outputs None means no arrow
_SHAPES = {
    "modes": (1, None),
    "had": (1, None),
    "cnot": (2, None),
    "vgate": (2, None),
    "pbs": (2, 2),
    "pc": (2, 1),
}


def _usage(keyword: str) -> str:
    n_in, n_out = _SHAPES[keyword]
    if n_out is None:
        return f"'{keyword}' takes {n_in} argument{'s' if n_in > 1 else ''}"
    return f"'{keyword}' takes {n_in} inputs, '->', {n_out} output{'s' if n_out > 1 else ''}"


def _tokens(line: str) -> list[tuple[str, int]]:
    """Whitespace-separated tokens with 1-based columns, comment stripped."""
    code = line.split("#", 1)[0]
    out = []
    i = 0
    while i < len(code):
        if code[i].isspace():
            i += 1
            continue
        j = i
        while j < len(code) and not code[j].isspace():
            j += 1
        out.append((code[i:j], i + 1))
        i = j
    return out


def _statement(toks: list[tuple[str, int]], lineno: int) -> Statement | ParseError:
    keyword, col = toks[0]
    span = SourceSpan(lineno, col)
    if keyword not in _SHAPES:
        return ParseError(span, f"unknown keyword {keyword!r}", ErrorKind.UNKNOWN_KEYWORD)
    n_in, n_out = _SHAPES[keyword]
    rest = toks[1:]
    if n_out is None:
        ok = len(rest) == n_in and all(t != ARROW for t, _ in rest)
        nums = rest
    else:
        ok = (
            len(rest) == n_in + 1 + n_out
            and rest[n_in][0] == ARROW
            and sum(t == ARROW for t, _ in rest) == 1
        )
        nums = rest[:n_in] + rest[n_in + 1:]
    if not ok:
        return ParseError(span, f"{_usage(keyword)}, got {len(rest)} tokens", ErrorKind.ARITY)
    values = []
    for tok, tcol in nums:
        if not (tok.isascii() and tok.isdigit()) or int(tok) < 1:
            return ParseError(
                SourceSpan(lineno, tcol), f"expected a positive integer, got {tok!r}", ErrorKind.BAD_INTEGER
            )
        values.append(int(tok))
    return Statement(keyword, tuple(values), span)


def _gate(st: Statement) -> Gate:
    a = st.args
    if st.keyword == "had":
        return Hadamard(a[0])
    if st.keyword == "cnot":
        return CNOT(a[0], a[1])
    if st.keyword == "vgate":
        return VGate(a[0], a[1])
    if st.keyword == "pbs":
        return PBS(*a)
    return PC(*a)


def parse_statements(source: str) -> tuple[list[Statement], list[ParseError], bool]:
    """Statements, per-line errors, and whether any line tried to declare modes."""
    statements, errors = [], []
    modes_attempted = False
    for lineno, line in enumerate(source.splitlines(), start=1):
        toks = _tokens(line)
        if not toks:
            continue
        modes_attempted |= toks[0][0] == "modes"
        result = _statement(toks, lineno)
        (errors if isinstance(result, ParseError) else statements).append(result)
    return statements, errors, modes_attempted


def parse(source: str) -> Union[Circuit, list[ParseError]]:
    """Parse ``.wqc`` text into a circuit, or return every error found."""
    statements, errors, modes_attempted = parse_statements(source)
    mode_count: Optional[int] = None
    gates: list[Gate] = []
    for st in statements:
        if st.keyword != "modes":
            gates.append(_gate(st))
        elif mode_count is not None:
            errors.append(ParseError(st.span, "duplicate 'modes' declaration", ErrorKind.DUPLICATE_MODES_DECL))
        elif gates:
            errors.append(ParseError(st.span, "'modes' must come before any gate", ErrorKind.MISSING_MODES_DECL))
        else:
            mode_count = st.args[0]
    if not modes_attempted and (statements or not errors):
        span = statements[0].span if statements else SourceSpan(1, 1)
        errors.append(ParseError(span, "first statement must be 'modes N'", ErrorKind.MISSING_MODES_DECL))
    if errors or mode_count is None:
        return sorted(errors, key=lambda e: (e.span.line, e.span.column))
    return Circuit(mode_count, tuple(gates))


def serialize(circuit: Circuit) -> str:
    lines = [f"modes {circuit.mode_count}"] + [g.describe() for g in circuit.gates]
    return "\n".join(lines) + "\n"


def load(path: str | Path) -> Circuit:
    """Read and parse a ``.wqc`` file, raising :class:`QcdlError` on bad input."""
    path = Path(path)
    result = parse(path.read_text(encoding="utf-8"))
    if isinstance(result, Circuit):
        return result
    raise QcdlError(result, str(path))


def paper_circuit_path() -> Path:
    return Path(__file__).with_name("data") / "paper.wqc"
