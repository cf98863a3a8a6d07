# SPDX-License-Identifier: MIT
import json
import math

import numpy as np
import pytest

import sqbsde


def test_generator_and_conjugate():
    g = sqbsde.Generator.power(3.0)
    f = sqbsde.Conjugate(g)
    assert g(2.0) == 8.0
    assert f(12.0) == pytest.approx(16.0, rel=1e-12)
    assert sqbsde.young_gap(g, f, 2.0, 12.0) == pytest.approx(0.0, abs=1e-9)


def test_cole_hopf_solve():
    model = sqbsde.ForwardModel(sqbsde.Drift.zero(), 1.0, 1.0)
    gen = sqbsde.Generator.quadratic(0.5)
    tc = sqbsde.TerminalCondition.lorentzian()
    grid = sqbsde.GridSpec()
    grid.n_x = 801
    sol = sqbsde.solve(model, gen, tc, grid)
    assert sol.u.shape == (len(sol.t), len(sol.x))
    ref = sqbsde.cole_hopf_reference(model, gen, tc, 0.0, 0.0)
    assert abs(sol.value(0.0, 0.0) - ref) < 5e-3
    assert np.all(np.isfinite(sol.z))


def test_duality_gap_dict():
    model = sqbsde.ForwardModel(sqbsde.Drift.zero(), 1.0, 1.0)
    gen = sqbsde.Generator.quadratic(0.5)
    tc = sqbsde.TerminalCondition.lorentzian()
    sol = sqbsde.solve(model, gen, tc)
    d = sqbsde.duality_gap(model, gen, tc, sol, n_paths=2000, seed=4)
    assert all(row["lower_bound_ok"] for row in d["rows"])
    assert math.isfinite(d["u0"])


def test_counterexample_reports():
    r = sqbsde.thm31_report(3.0, 10000)
    assert all(c["pass"] for c in r["checks"] if c["hard"])
    with pytest.raises(sqbsde.RangeError):
        sqbsde.thm34_report(3.0, 50, 10, 10)


def test_run_config_and_errors():
    out = sqbsde.run_config(json.dumps({"command": "counterexample:3.1"}))
    assert out["all_hard_pass"]
    with pytest.raises(sqbsde.ConfigError, match="sigma_x"):
        sqbsde.run_config(json.dumps({"model": {"sigma_x": 1}}))
