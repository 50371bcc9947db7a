"""Shared helpers: every schedule produced anywhere in the suite goes through
the validator plus the critical-path lower bound before being accepted."""
from __future__ import annotations

import random

import pytest

from surfc.chip import ChipLayout, ChipModel
from surfc.circuits import LogicalCircuit, build_dag, circuit
from surfc.scheduler import EncodedSchedule, validate


def check_schedule(schedule: EncodedSchedule, circ: LogicalCircuit, layout, mapping) -> None:
    violations = validate(schedule, circ, layout, mapping)
    assert violations == [], violations[:5]
    assert schedule.delta >= build_dag(circ).alpha


def uniform_dd_layout(rows: int, cols: int, bandwidth: int = 1, d: int = 2) -> ChipLayout:
    """Synthetic double-defect layout: rows x cols data array with every
    channel at the given bandwidth."""
    w = 0 if bandwidth <= 1 else ((bandwidth - 1) * 5 * d + 1) // 2
    side = 5 * d
    m1 = rows * side + (rows + 1) * w
    m2 = cols * side + (cols + 1) * w
    return ChipLayout(
        model=ChipModel.DOUBLE_DEFECT, d=d, m1=m1, m2=m2,
        array_r=rows, array_c=cols,
        h_widths=(w,) * (rows + 1), v_widths=(w,) * (cols + 1),
    )


def uniform_ls_layout(rows: int, cols: int, gap: int = 1, d: int = 2) -> ChipLayout:
    """Synthetic lattice-surgery layout: every channel ``gap`` tiles wide."""
    side = 5  # ceil(sqrt(2)*2) = 3 would do; any side works for tile math
    from surfc.chip import tile_side
    side = tile_side(ChipModel.LATTICE_SURGERY, d)
    m1 = (rows + (rows + 1) * gap) * side
    m2 = (cols + (cols + 1) * gap) * side
    return ChipLayout(
        model=ChipModel.LATTICE_SURGERY, d=d, m1=m1, m2=m2,
        array_r=rows, array_c=cols,
        h_widths=(gap,) * (rows + 1), v_widths=(gap,) * (cols + 1),
    )


def random_tiny_circuit(rng: random.Random, max_n: int = 5, max_g: int = 6) -> LogicalCircuit:
    n = rng.randint(2, max_n)
    g = rng.randint(1, max_g)
    pairs = []
    for _ in range(g):
        a = rng.randrange(n)
        b = rng.randrange(n)
        while b == a:
            b = rng.randrange(n)
        pairs.append((a, b))
    return circuit(n, pairs)


@pytest.fixture
def rng():
    return random.Random(0xACC355)
