import json
import math
import pathlib

import pytest

import liouville as lv

FROZEN = json.loads((pathlib.Path(__file__).parents[1] / "oracle" / "frozen.json").read_text())


def pendulum_map(eps=1.0):
    return lv.ActionMap(lv.pendulum(eps), energy_scale=eps)


def test_morse_profile_of_cosine():
    prof = lv.analyze_morse(lv.PeriodicPotential.cosine())
    assert [c["kind"] for c in prof["criticals"]] == ["max", "min"]
    assert prof["beta"] == pytest.approx(1.0, rel=1e-9)


def test_coinciding_values_raise():
    with pytest.raises(lv.LiouvilleError, match="DistinctValueViolation"):
        lv.analyze_morse(lv.PeriodicPotential([0, 0, 1]))


def test_two_well_has_two_wells():
    prof = lv.analyze_morse(lv.PeriodicPotential([0, 1, 0.3]), require_distinct=False)
    assert prof["n_wells"] == 2


def test_actions_match_frozen_oracle():
    m = pendulum_map()
    assert m.n_regions == 3
    assert m.region_kind(1) == "libration"
    for row in FROZEN["pendulum_rotation"]:
        assert m.action(2, row["E"]) == pytest.approx(row["I"], rel=1e-12)
    for row in FROZEN["pendulum_libration"]:
        assert m.action(1, row["E"]) == pytest.approx(row["I"], rel=1e-12)
        assert m.dIdE(1, row["E"]) == pytest.approx(row["dIdE"], rel=1e-10)


def test_energy_of_action_round_trip():
    m = pendulum_map(0.5)
    for E in (-0.3, 0.0, 0.4):
        assert m.energy_of_action(1, m.action(1, E)) == pytest.approx(E, abs=1e-9)


def test_separatrix_fit():
    m = pendulum_map()
    rep = lv.fit_separatrix(m, 1, "plus")
    assert rep.psi0 == pytest.approx(2 * FROZEN["psi0_pendulum"], rel=1e-2)
    assert rep(1e-3) == pytest.approx(m.action_near_plus(1, 1e-3), rel=1e-8)


def test_normal_form_at_the_maximum():
    nf = lv.normal_form(lv.pendulum(1.0), 0, energy_scale=1.0)
    assert nf["kind"] == "hyperbolic"
    assert nf["g"] == pytest.approx(math.sqrt(0.5))
    assert nf["residual"] < 1e-9


def test_convexity():
    m = pendulum_map()
    assert m.d2E_dI2(2, 3.0) == pytest.approx(FROZEN["rotation_d2EdI2"][0]["d2EdI2"], rel=1e-9)
    assert lv.a0_ratio(-1 + 1e-6) == pytest.approx(0.25, rel=1e-2)


def test_quick_acceptance_subset():
    rows = lv.run_acceptance(quick=True, only=[1, 3])
    assert [r["id"] for r in rows] == [1, 3]
    assert all(r["passed"] for r in rows)
