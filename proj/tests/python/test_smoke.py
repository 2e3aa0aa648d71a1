import numpy as np
import pytest

import romns


def tiny(testcase="varying-angle"):
    cfg = romns.SimConfig.parse(f"testcase={testcase}\nnx=20\nny=8\nsteps=40\nmodes=2,4\n")
    return cfg


def test_config_round_trip():
    cfg = tiny()
    again = romns.SimConfig.parse(cfg.to_text())
    assert again.physics_hash() == cfg.physics_hash()
    assert again.modes == [2, 4]
    assert cfg.dt == pytest.approx(4 * np.pi / 40)


def test_unknown_testcase_is_usage_error():
    with pytest.raises(romns.UsageError):
        romns.SimConfig.parse("testcase=bogus\n")


def test_gradient_is_negative_transposed_divergence():
    case = romns.Case(tiny())
    m = case.divergence.toarray()
    g = case.gradient.toarray()
    assert np.array_equal(g, -m.T)


def test_fom_pod_rom_chain():
    case = romns.Case(tiny())
    snaps = case.fom()
    v = snaps["velocity"]
    assert v.shape == (case.n_vel, 41)
    assert snaps["pressure"].shape[1] == 41

    hom = case.homogenize(v)
    phi, sv = case.pod(hom, 6)
    w = case.omega
    gram = phi.T @ (w[:, None] * phi)
    assert np.allclose(gram, np.eye(phi.shape[1]), atol=1e-12)
    assert np.max(np.abs(case.divergence @ phi)) < 1e-10
    assert np.all(np.diff(sv) <= 0)

    traj = case.rom(phi, 6, v[:, 0])
    assert traj["a"].shape == (6, 41)
    err = case.velocity_error(v, traj["velocity"])
    assert len(err) == 41
    assert np.all(np.isfinite(err))
    assert np.max(err) < 1.0


def test_pipeline_stages(tmp_path):
    cfg = tiny()
    log = romns.run_all(cfg, str(tmp_path))
    assert "[compare]" in log
    fom = romns.read_container(str(tmp_path / "fom.bin"))
    assert fom["blocks"]["velocity"].shape[1] == 41
    report = dict(romns.parse_report((tmp_path / "report.txt").read_text()))
    assert float(report["R4.velocity_error.max"]) <= float(report["R2.velocity_error.max"])
    assert float(report["R4.equivalence_error.max"]) < 1e-9
    rows = (tmp_path / "traj_R2.csv").read_text().splitlines()
    assert rows[0] == "t,a_hom_1,a_hom_2,K_r,mass_defect"
    assert len(rows) == 42


def test_tampered_artifact_is_rejected(tmp_path):
    cfg = tiny()
    romns.run_stage(cfg, "fom", str(tmp_path))
    with open(tmp_path / "fom.bin", "ab") as f:
        f.write(b"\0")
    with pytest.raises(romns.ArtifactError):
        romns.run_stage(cfg, "homogenize", str(tmp_path))
