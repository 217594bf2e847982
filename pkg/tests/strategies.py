"""Hypothesis strategies shared by the property tests."""

import itertools

from hypothesis import strategies as st

from wsim.fock import Configuration, StateVector, H, V
from wsim.gates import CNOT, PBS, PC, Hadamard, VGate
from wsim.circuit import Circuit

occupancies = st.sampled_from([None, H, V])
amplitudes = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


def configurations(n, photons_only=False):
    occ = st.sampled_from([H, V]) if photons_only else occupancies
    return st.tuples(*[occ] * n).map(Configuration)


@st.composite
def states(draw, n=4, photons_only=False, normalized=False, max_terms=8):
    configs = draw(st.lists(configurations(n, photons_only), min_size=1, max_size=max_terms, unique=True))
    amps = draw(st.lists(amplitudes, min_size=len(configs), max_size=len(configs)))
    if normalized:
        total = sum(abs(a) ** 2 for a in amps) ** 0.5
        if total < 1e-3:
            amps = [1.0] + [0.0] * (len(configs) - 1)
            total = 1.0
        amps = [a / total for a in amps]
    return StateVector(n, list(zip(configs, amps)))


@st.composite
def valid_circuits(draw, max_modes=6, max_gates=12):
    n = draw(st.integers(2, max_modes))
    pairs = [p for p in itertools.permutations(range(1, n + 1), 2)]
    gate = st.one_of(
        st.integers(1, n).map(Hadamard),
        st.sampled_from(pairs).map(lambda p: CNOT(*p)),
        st.sampled_from(pairs).map(lambda p: VGate(*p)),
        st.tuples(st.sampled_from(pairs), st.sampled_from(pairs)).map(lambda io: PBS(*io[0], *io[1])),
        st.tuples(st.sampled_from(pairs), st.integers(1, n)).map(lambda io: PC(*io[0], io[1])),
    )
    return Circuit(n, tuple(draw(st.lists(gate, max_size=max_gates))))
