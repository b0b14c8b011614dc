import copy

import pytest

from railedge.gt import random_rail_trapezoids


@pytest.fixture
def small_manifest():
    """A fast three-arm manifest: 2 trapezoids at 96x96 downscaled to 24x24."""
    shapes = random_rail_trapezoids(2, (96, 96), rng=3)
    return copy.deepcopy({
        "dataset": [{"trapezoid": s} for s in shapes],
        "gt": {"source_size": [96, 96], "target_size": [24, 24], "box_size": 3},
        "train": {"steps": 20, "k": 4, "seed": 1},
        "output_dir": "unused",
    })


ACCEPTANCE_LINES = []


def record_criterion(name, passed, detail=""):
    """Log one acceptance line; printed in the terminal summary."""
    ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}".rstrip())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
