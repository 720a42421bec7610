"""Smoke test for the qsl extension module.

Build and install first, e.g. `maturin develop -m crates/py/Cargo.toml`
or `pip install ./crates/py`, then run `python crates/py/python/smoke.py`.
"""

import math

import qsl


def main():
    rho = qsl.DensityMatrix.bloch(math.pi / 2)
    assert rho.dim == 2
    assert abs(rho.coherence() - math.log(2)) < 1e-12
    assert abs(qsl.DensityMatrix.maximally_mixed(2).entropy() - math.log(2)) < 1e-12

    p = qsl.ModelParams.thermalization(1.0, 0.5, 1.0)
    traj = qsl.evolve(p.lindbladian(), p.initial_state(), 0.8, steps=1024)
    assert len(traj) == 1025
    exact = p.analytic_quantities(0.8)["information"]
    assert abs(traj.state(len(traj) - 1).information() - exact) < 1e-6

    reports = {r.kind: r for r in traj.bounds()}
    assert set(reports) == {"esl", "isl", "csl", "erasure", "action_s", "action_i", "action_c", "info_rate"}
    isl = reports["isl"]
    assert 0 < isl.bound_value < isl.horizon_T
    assert "lambda_rms" in isl.terms

    d = qsl.ModelParams.dephasing(2.0, math.pi / 3)
    csl = qsl.evolve(d.lindbladian(), d.initial_state(), 0.5, steps=1024).bound("csl")
    assert 0 < csl.slack < 1

    sx = [[0, 1], [1, 0]]
    unitary = qsl.Lindbladian(sx)
    mixed = qsl.DensityMatrix([[0.8, 0], [0, 0.2]])
    assert qsl.evolve(unitary, mixed, 1.0, steps=64).bound("esl").bound_value < 1e-8
    assert 0 <= qsl.saturation_slack(d.lindbladian(), d.analytic_state(0.3)) <= 1

    rows = qsl.figure_data("fig1", steps=512)
    assert len(rows) == 60 and all(b < t for t, b, _, _ in rows)
    print("qsl smoke test passed:", isl)


if __name__ == "__main__":
    main()
