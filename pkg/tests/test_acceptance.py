"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import json
import os
import subprocess
import sys

import pytest

from ultraweight.scenarios import CRITERIA, SCENARIOS, run_criterion

TIME_LIMIT = 30.0


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    result = run_criterion(number)
    with capsys.disabled():
        print("\n" + result.line())
        if not result.passed:
            print(json.dumps(result.to_dict()["witness"], indent=2))
    assert result.seconds < TIME_LIMIT
    assert result.passed, result.details


def test_every_criterion_belongs_to_a_scenario():
    covered = {n for members in SCENARIOS.values() for n in members}
    assert covered == set(CRITERIA)


@pytest.mark.parametrize("number", [1, 4])
def test_criterion_with_pure_python_kernels(number):
    code = f"from ultraweight.scenarios import run_criterion; print(run_criterion({number}).passed)"
    env = dict(os.environ, ULTRAWEIGHT_PURE_PYTHON="1")
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, timeout=120)
    assert proc.stdout.strip() == "True", proc.stderr
