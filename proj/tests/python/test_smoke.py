import math

import pytest

import kghdg


def test_mesh_counts():
    info = kghdg.mesh_info(2)
    assert info["elements"] == 32
    assert info["vertices"] == 25
    assert info["vertices"] - info["faces"] + info["elements"] == 1
    assert info["h_max"] == pytest.approx(math.sqrt(2) / 4)


def test_cases():
    for i in (1, 2, 3):
        c = kghdg.case_info(i)
        assert c["has_exact"]
        assert c["pde_residual"] < 1e-10
    assert not kghdg.case_info(4)["has_exact"]
    with pytest.raises(kghdg.ConfigError):
        kghdg.case_info(9)


def test_single_run():
    r = kghdg.run_single(example=1, k=1, m=2)
    assert r["steps"] == 4
    assert r["dt"] == pytest.approx(0.25)
    assert 0 < r["err_ustar"] < r["err_u"] < 0.1


def test_convergence_rows():
    rows = kghdg.run_convergence(example=1, degrees=[1], m_first=1, m_last=3, threads=1)
    assert [r["m"] for r in rows] == [1, 2, 3]
    assert rows[0]["eoc_u"] is None
    assert rows[-1]["eoc_u"] == pytest.approx(2.0, abs=0.25)


def test_nonconservative_factorizes_twice():
    r = kghdg.run_single(example=1, k=1, m=2, scheme="nonconservative")
    assert r["factorizations"] == 2


def test_energy_drift():
    rows = kghdg.run_energy(m_first=1, m_last=1)
    assert len(rows) == 10
    assert all(r["drift"] < 1e-10 for r in rows if r["n"] >= 2)


def test_errors():
    with pytest.raises(kghdg.ConfigError):
        kghdg.run_single(k=0, scheme="conservative")
    with pytest.raises(kghdg.ConfigError):
        kghdg.run_single(scheme="leapfrog")
    with pytest.raises(kghdg.SolverError):
        kghdg.run_single(example=2, k=1, m=1, dt=0.5, final_time=8.0, newton_tol=1e-15)
