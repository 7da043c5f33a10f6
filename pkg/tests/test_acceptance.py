"""Exit criteria, one test per criterion, at the pinned tolerances.

Each test records a one-line verdict; ``conftest.pytest_terminal_summary``
prints them after the run. ``python tests/test_acceptance.py`` runs only
this module.
"""

import shutil
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from qinterf import channels as ch
from qinterf import coherence as co
from qinterf import interferometer as it
from qinterf.channels import PAULI_I, PAULI_Z

from conftest import FIXTURES, random_density, random_unitary

RESULTS: list[str] = []


@pytest.fixture
def criterion(request):
    label = request.node.get_closest_marker("criterion").args[0]
    state = {"detail": ""}
    yield state
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    RESULTS.append(f"[{'PASS' if ok else 'FAIL'}] {label}{': ' + state['detail'] if state['detail'] else ''}")


def angle_gap(a, b):
    return abs(np.angle(np.exp(1j * (a - b))))


@pytest.mark.criterion("1 unitary interference pattern, tol 1e-12, < 1 s")
def test_unitary_interference(criterion):
    t0 = time.perf_counter()
    idc = ch.unitary_channel(PAULI_I)
    p = it.simulate_pattern(idc, idc, ch.DensityMatrix.maximally_mixed(2))
    err = np.max(np.abs(p.probabilities - 0.5 * (1 + np.cos(p.phases))))
    elapsed = time.perf_counter() - t0
    criterion["detail"] = f"max err {err:.1e}, {elapsed * 1e3:.1f} ms"
    assert err <= 1e-12
    assert elapsed < 1.0


@pytest.mark.criterion("2 Kraus vs dilation oracle, 50 pairs, tol 1e-10, < 60 s")
def test_oracle_equivalence(criterion):
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(50):
        d = int(rng.choice([2, 3]))
        chU = ch.random_channel(d, int(rng.integers(1, 5)), 1000 + i)
        chV = ch.random_channel(d, int(rng.integers(1, 5)), 2000 + i)
        rho = random_density(d, rng)
        a = it.simulate_pattern(chU, chV, rho)
        b = it.simulate_pattern_dilated(ch.dilate(chU), ch.dilate(chV), rho)
        worst = max(worst, float(np.max(np.abs(a.probabilities - b.probabilities))))
    elapsed = time.perf_counter() - t0
    criterion["detail"] = f"max pointwise gap {worst:.1e}, {elapsed:.2f} s"
    assert worst <= 1e-10
    assert elapsed < 60.0


@pytest.mark.criterion("3 flag channel {0,U} gives flat pattern, v = 0 within 1e-12")
def test_flag_channel_zero_visibility(criterion):
    rng = np.random.default_rng(3)
    worst = 0.0
    for d in (2, 3):
        u = random_unitary(d, rng)
        flag = ch.flag_channel(u)
        partners = [ch.unitary_channel(u), ch.unitary_channel(np.eye(d)), ch.random_channel(d, 3, d), flag]
        for other in partners:
            rho = random_density(d, rng)
            for a, b in ((flag, other), (other, flag)):
                for p in (
                    it.simulate_pattern(a, b, rho),
                    it.simulate_pattern_dilated(ch.dilate(a), ch.dilate(b), rho),
                ):
                    est = it.extract_visibility(p)
                    worst = max(worst, est.v, float(np.max(np.abs(p.probabilities - 0.5))))
                    assert est.degenerate and est.alpha == 0.0
    criterion["detail"] = f"max deviation {worst:.1e}"
    assert worst <= 1e-12


@pytest.mark.criterion("4 depolarizing max self-coherence = 1/d^2 (d=2,3,4), 200 remixes each, tol 1e-10")
def test_depolarizing_max_self_coherence(criterion):
    rng = np.random.default_rng(4)
    worst_val, worst_excess = 0.0, -np.inf
    for d in (2, 3, 4):
        dep = ch.depolarizing(d)
        v_max = co.max_self_coherence(dep).v_max
        worst_val = max(worst_val, abs(v_max - 1 / d**2))
        for _ in range(200):
            r = ch.remix(dep, ch.random_isometry(d * d, d * d, rng))
            worst_excess = max(worst_excess, co.self_visibility(r) - v_max)
    criterion["detail"] = f"|v_max - 1/d^2| <= {worst_val:.1e}, max remix excess {worst_excess:.1e}"
    assert worst_val <= 1e-10
    assert worst_excess <= 1e-10


@pytest.mark.criterion("5 closest-unitary dominance on 100 channels; phase-flip 0.75 / sqrt(0.75), tol 1e-10")
def test_closest_unitary_dominance(criterion):
    rng = np.random.default_rng(5)
    slack = np.inf
    for i in range(100):
        d = int(rng.integers(2, 5))
        c = ch.random_channel(d, int(rng.integers(1, d * d + 1)), 5000 + i)
        for dec in (c, co.max_self_coherence(c).realizing):
            slack = min(slack, co.closest_unitary(dec).visibility - co.self_visibility(dec))
    pf = ch.phase_flip(0.25)
    v_ll = co.self_visibility(pf)
    rep = co.closest_unitary(pf)
    criterion["detail"] = f"min(v_LU - v_LL) = {slack:.3e}, pf: {v_ll:.12f} / {rep.visibility:.12f}"
    # equality for unitary channels, so allow round-off only
    assert slack >= -1e-12
    assert abs(v_ll - 0.75) <= 1e-10
    assert abs(rep.visibility - np.sqrt(0.75)) <= 1e-10
    assert np.allclose(rep.unitary, np.eye(2), atol=1e-10)


@pytest.mark.criterion("6 max coherent fidelity achieved, bounds 200 remix pairs, same-channel reduction, tol 1e-10")
def test_max_coherent_fidelity(criterion):
    rng = np.random.default_rng(6)
    gap_achieved, excess, gap_reduce = 0.0, -np.inf, 0.0
    for i in range(5):
        d = int(rng.integers(2, 4))
        chU = ch.random_channel(d, int(rng.integers(1, d * d + 1)), 6000 + i)
        chV = ch.random_channel(d, int(rng.integers(1, d * d + 1)), 6100 + i)
        rep = co.max_coherent_fidelity(chU, chV)
        via_vectors = abs(rep.g0.conj() @ rep.overlap_matrix @ rep.h0) / d
        via_remix = co.coherent_fidelity(rep.realizing_u, rep.realizing_v).fidelity
        gap_achieved = max(gap_achieved, abs(via_vectors - rep.max_fidelity), abs(via_remix - rep.max_fidelity))
        for _ in range(200):
            mu = int(rng.integers(len(chU), d * d + 1))
            mv = int(rng.integers(len(chV), d * d + 1))
            ru = ch.remix(chU, ch.random_isometry(mu, len(chU), rng))
            rv = ch.remix(chV, ch.random_isometry(mv, len(chV), rng))
            excess = max(excess, co.coherent_fidelity(ru, rv).fidelity - rep.max_fidelity)
        for c in (chU, chV, ch.depolarizing(d)):
            gap_reduce = max(
                gap_reduce, abs(co.max_coherent_fidelity(c, c).max_fidelity - co.max_self_coherence(c).v_max)
            )
    criterion["detail"] = f"achieved gap {gap_achieved:.1e}, remix excess {excess:.1e}, reduction gap {gap_reduce:.1e}"
    assert gap_achieved <= 1e-10
    assert excess <= 1e-10
    assert gap_reduce <= 1e-10


@pytest.mark.criterion("7 distance identity on 50 unitary pairs, tol 1e-10")
def test_distance_identity(criterion):
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(50):
        d = int(rng.integers(2, 7))
        u, v = random_unitary(d, rng), random_unitary(d, rng)
        d2 = it.unitary_distance(u, v)
        direct = float(np.real(np.trace((u - v).conj().T @ (u - v))))
        p = it.simulate_pattern(ch.unitary_channel(u), ch.unitary_channel(v), ch.DensityMatrix.maximally_mixed(d))
        est = it.extract_visibility(p)
        interf = 2 * d * (1 - est.v * np.cos(est.alpha))
        worst = max(worst, abs(d2 - direct), abs(d2 - interf))
    criterion["detail"] = f"max discrepancy {worst:.1e}"
    assert worst <= 1e-10


@pytest.mark.criterion("8 visibility extraction round trip on a 16-point grid, tol 1e-12")
def test_extraction_round_trip(criterion):
    phi = it.phase_grid(16)
    worst = 0.0
    for v in (0.0, 0.25, 0.5, 1.0):
        for alpha in (0.0, np.pi / 3, -np.pi / 3, np.pi):
            est = it.extract_visibility(it.InterferencePattern(phi, 0.5 * (1 + v * np.cos(phi - alpha))))
            worst = max(worst, abs(est.v - v))
            assert -np.pi < est.alpha <= np.pi
            if v == 0.0:
                assert est.degenerate and est.alpha == 0.0
            else:
                worst = max(worst, angle_gap(est.alpha, alpha))
    criterion["detail"] = f"max parameter error {worst:.1e}"
    assert worst <= 1e-12


@pytest.mark.criterion("9 Raginsky fixtures 1 / 0 / 0.5 and symmetry, tol 1e-9")
def test_raginsky(criterion):
    idc, zc, dep = ch.unitary_channel(PAULI_I), ch.unitary_channel(PAULI_Z), ch.depolarizing(2)
    vals = [co.raginsky_fidelity(idc, idc), co.raginsky_fidelity(idc, zc), co.raginsky_fidelity(idc, dep)]
    rng = np.random.default_rng(9)
    asym = 0.0
    for i in range(30):
        d = int(rng.integers(2, 4))
        a = ch.random_channel(d, int(rng.integers(1, d * d + 1)), 9000 + i)
        b = ch.random_channel(d, int(rng.integers(1, d * d + 1)), 9100 + i)
        asym = max(asym, abs(co.raginsky_fidelity(a, b) - co.raginsky_fidelity(b, a)))
    criterion["detail"] = f"fixtures {vals[0]:.12f} {vals[1]:.12f} {vals[2]:.12f}, max asymmetry {asym:.1e}"
    assert abs(vals[0] - 1) <= 1e-9
    assert abs(vals[1]) <= 1e-9
    assert abs(vals[2] - 0.5) <= 1e-9
    assert asym <= 1e-9


SUITE = [
    ["random", "--dim", "2", "--kraus", "3", "--seed", "11", "--out", "rnd.json"],
    ["visibility", "--u", "id2.json", "--v", "id2.json"],
    ["visibility", "--u", "rnd.json", "--v", "pf25.json", "--rho", "pure:plus2.json", "--json"],
    ["pattern", "--u", "pf25.json", "--v", "pf25.json", "--samples", "8", "--out", "p.csv"],
    ["pattern", "--u", "rand3.json", "--v", "rand3.json", "--oracle", "--out", "q.csv"],
    ["self", "--ch", "depol2.json", "--maximize", "--out", "depol_max.json"],
    ["closest-unitary", "--ch", "rnd.json", "--after-maximize", "--out", "cu.json"],
    ["max-fidelity", "--u", "rnd.json", "--v", "depol2.json"],
    ["raginsky", "--u", "id2.json", "--v", "depol2.json", "--json"],
    ["distance", "--u", "id2.json", "--v", "had2.json"],
]


def _run_suite(workdir: Path) -> dict[str, bytes]:
    outputs = {}
    for i, argv in enumerate(SUITE):
        proc = subprocess.run(
            [sys.executable, "-m", "qinterf", *argv], cwd=workdir, capture_output=True, check=False
        )
        assert proc.returncode == 0, proc.stderr.decode()
        outputs[f"stdout{i}"] = proc.stdout
    for f in sorted(workdir.iterdir()):
        outputs[f.name] = f.read_bytes()
    return outputs


@pytest.mark.criterion("10 CLI determinism: full subcommand suite byte-identical across two runs")
def test_cli_determinism(criterion, tmp_path):
    runs = []
    for name in ("first", "second"):
        work = tmp_path / "corpus"
        if work.exists():
            shutil.rmtree(work)
        shutil.copytree(FIXTURES, work)
        runs.append(_run_suite(work))
    criterion["detail"] = f"{len(SUITE)} commands, {len(runs[0])} artifacts compared"
    assert runs[0].keys() == runs[1].keys()
    assert all(runs[0][k] == runs[1][k] for k in runs[0])


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
