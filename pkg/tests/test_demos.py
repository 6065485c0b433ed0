import subprocess
import sys
from pathlib import Path

import pytest

DEMOS = Path(__file__).resolve().parent.parent / "demos"

EXPECTED = {
    "chicken_walkthrough.py": [" 10  1/2 (C,C), 1/4 rest      21/2  yes     -      yes    yes", "player 1: C -> D gains 1",
                               "team maxmin value: 12"],
    "ce_versus_coe.py": ["adversary payoff with c1: 21/4", "team value once the adversary reacts: 3/2",
                         "team-maximizing CoE: 7"],
    "consistent_zero_sum.py": ["fixed-adversary LP agrees: True", "inconsistent game, CoEs exchange: False",
                               "they exchange: False"],
    "reductions.py": ["reduced game is zero-sum: True", "literal-only NE of the unsatisfiable formula: []"],
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_demo_runs(name):
    proc = subprocess.run([sys.executable, str(DEMOS / name)], capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr
    for line in EXPECTED[name]:
        assert line in proc.stdout


def test_every_demo_is_covered():
    assert sorted(p.name for p in DEMOS.glob("*.py")) == sorted(EXPECTED)
