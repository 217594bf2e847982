"""Reading the V-gate subscripts as (target, control) does not reproduce the stepwise states."""

import json

from wsim.circuit import build_bell_stage, build_u_stage, run, U_STAGE_PAIRS
from wsim.cli import compare_golden
from wsim.qcdl import load

from .conftest import TESTDATA, golden_state

TARGET_FIRST = tuple((t, c) for c, t in U_STAGE_PAIRS)


def test_target_first_pairs():
    assert TARGET_FIRST == ((2, 4), (4, 1), (3, 2), (1, 3))


def test_target_first_fails_first_reduction(bell_product):
    got = run(build_u_stage(TARGET_FIRST), bell_product).steps[0].state
    want = golden_state("u_step1.json")
    assert got.configurations() != want.configurations()


def test_target_first_fails_golden_trace():
    golden = json.loads((TESTDATA / "paper_trace_hvhv.json").read_text())
    swapped = load(TESTDATA / "target_first.wqc")
    assert swapped == build_bell_stage() + build_u_stage(TARGET_FIRST)
    dev, first_bad = compare_golden(swapped, golden, 1e-12)
    assert dev >= 0.5
    assert first_bad.gate_index == 4


def test_only_intermediate_steps_discriminate(w4_golden):
    # both readings end on the W state; the stepwise states are what tells them apart
    final = run(build_bell_stage() + build_u_stage(TARGET_FIRST), "HVHV").final
    assert final.max_deviation(w4_golden) < 1e-12
