import json
import math
import os

import pytest

import caratpy

FIX = os.environ.get("CARAT_FIXTURE_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "fixtures"))


def fx(name):
    return os.path.join(FIX, name)


def test_check_verdicts():
    pd = caratpy.Domain.parse_file(fx("polydisc.json"))
    assert caratpy.check(pd)["verdict"] == "c_complete"

    ht = caratpy.Domain.parse_file(fx("hartogs.json"))
    rep = caratpy.check(ht)
    assert rep["verdict"] == "not_c_complete"
    assert rep["witnesses"][0]["axis"] == 2

    hs = caratpy.Domain.parse_file(fx("halfspace.json"))
    assert caratpy.check(hs)["verdict"] == "not_applicable"


def test_domain_membership():
    pd = caratpy.Domain.parse_file(fx("polydisc.json"))
    assert pd.n == 2
    assert pd.contains([0.5 + 0j, 0.5j])
    assert not pd.contains([1.5 + 0j, 0.5 + 0j])
    with pytest.raises(ValueError):
        caratpy.Domain.parse("{")


def test_peak_certificate_anchor():
    p0 = caratpy.Domain.parse_file(fx("p0.json"))
    cert = caratpy.peak_certificate(p0, [1 + 0j, 1 + 0j], eta=[0.5 + 0j, 0.5 + 0j], eps=0.01)
    assert cert["dio"]["q"] == 70
    assert cert["dio"]["beta"] == [70, 99]
    assert math.isclose(cert["sup_bound"], 2.0 ** (99 - 70 * math.sqrt(2)), rel_tol=1e-12)
    assert math.isclose(cert["R"], 2.0 ** -(1 + math.sqrt(2)), rel_tol=1e-12)


def test_diophantine():
    dio = caratpy.diophantine([1.0, math.sqrt(2)], 0.01, 200)
    assert (dio["q"], dio["beta"]) == (70, [70, 99])


def test_boost_verify():
    pd = caratpy.Domain.parse_file(fx("polydisc.json"))
    rep = caratpy.boost_verify(pd, [1 + 0j, 1 + 0j], eta=[0.5 + 0j, 0.5 + 0j], K=10,
                               grid=200, seed=4)
    assert rep["pass"]
    assert rep["max_abs_F"] < 1.0
    assert rep["zeta_gap"] <= rep["zeta_bound"] == 2.0 ** -10


def test_envelope_duality():
    res = caratpy.envelope(fx("sym3.json"))
    assert abs(res["gap"]) <= 1e-7 * (1 + abs(res["primal"]))
    assert math.isclose(sum(res["measure"]), 1.0, abs_tol=1e-9)


def test_poincare():
    assert math.isclose(caratpy.poincare(0j, 0.5 + 0j), 0.5493061443, abs_tol=1e-9)


def test_potential_values():
    atoms = [(0j, 0.3), (1 + 0j, 0.7)]
    assert abs(caratpy.disc_mean(atoms, 0j, 1e-3) - 0.30047) <= 1e-3
    assert math.isclose(caratpy.newton_potential([(3 + 0j, 1.0)], 0j), 1.0 / 3.0, rel_tol=1e-12)
    assert math.isinf(caratpy.newton_potential([(0j, 1.0)], 0j))
    with pytest.raises(ValueError):
        caratpy.disc_mean(atoms, 0j, 0.0)


def test_extract_cauchy():
    res = caratpy.extract_cauchy([(0j, 1.0)], 1 + 0j, 12)
    assert res["complete"]
    assert len(res["eta"]) == 12
    for nu, eta in enumerate(res["eta"], start=1):
        assert abs(1 - eta) * caratpy.newton_potential([(0j, 1.0)], eta) <= 2.0 ** -nu


def test_orbit_discrepancy():
    dense = caratpy.orbit_discrepancy(math.sqrt(2), 10000)
    assert dense["value"] <= 0.005
    assert not dense["rational_alpha"]
    half = caratpy.orbit_discrepancy(0.5, 100)
    assert half["value"] == 0.5
    assert half["period"] == 2


def test_cli_roundtrip():
    code, out, err = caratpy.cli(["check", fx("polydisc.json")])
    assert code == 0 and err == ""
    assert json.loads(out)["verdict"] == "c_complete"

    again = caratpy.cli(["check", fx("polydisc.json")])
    assert (code, out, err) == again

    code, _, err = caratpy.cli(["check", fx("no_such.json")])
    assert code == 3 and "input error" in err
