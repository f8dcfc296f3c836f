"""Regression against committed curve data in tests/golden."""

import csv
from pathlib import Path

import numpy as np
import pytest

from ncbound.cli import build_parser, curve_rows

GOLDEN = Path(__file__).parent / "golden"
# the ground state at alpha_z = 1 is a tangential root, located only to ~1e-5
TANGENT_ATOL = 1e-5


def _load(name):
    with (GOLDEN / name).open(encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array([[float(v) for v in r] for r in rows[1:]])


def _fresh(argv):
    header, rows = curve_rows(build_parser().parse_args(argv))
    return header, np.array(rows, dtype=float)


def test_epsilon_levels():
    header, golden = _load("epsilon_levels.csv")
    fresh_header, fresh = _fresh(
        ["curve", "epsilon", "--level", "1,0", "--level", "2,0", "--level", "2,1", "--alpha-z", "0.1:1.0:0.1"]
    )
    assert fresh_header == header
    tangent = np.zeros_like(golden, dtype=bool)
    tangent[-1, 1] = True
    assert np.all(np.abs(fresh - golden) <= np.where(tangent, TANGENT_ATOL, 1e-8))
    # increasing in alpha_z, decreasing across levels
    assert np.all(np.diff(golden[:, 1:], axis=0) > 0)
    assert np.all(golden[:, 1] > golden[:, 2]) and np.all(golden[:, 2] > golden[:, 3])


def test_ground_energy():
    header, golden = _load("ground_energy.csv")
    fresh_header, fresh = _fresh(["curve", "energy", "--alpha-z", "0.05:1.0:0.05"])
    assert fresh_header == header
    assert fresh[:, :3] == pytest.approx(golden[:, :3], rel=1e-11)
    tol = np.full(len(golden), 1e-7)
    tol[-1] = TANGENT_ATOL
    assert np.all(np.abs(fresh[:, 3] - golden[:, 3]) <= tol * np.abs(golden[:, 3]))
    e_s, e_d, e_nc = golden[:, 1], golden[:, 2], golden[:, 3]
    assert np.all((e_d <= e_nc) & (e_nc <= e_s))
