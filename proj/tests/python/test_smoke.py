import json
import os
import subprocess
from fractions import Fraction

import pytest

import basicwalk


def test_walk_on_z2_is_seeded():
    a = basicwalk.walk("z2", seed=1, budget=100000)
    b = basicwalk.walk("z2", seed=1, budget=100000)
    assert a == b
    assert a["outcome"] in ("cycled", "budget_exhausted")
    if a["outcome"] == "cycled":
        assert a["steps"] == a["tail"] + a["period"]


def test_deterministic_walk():
    r = basicwalk.walk("z1", labeling="alternating", budget=1000)
    assert r["outcome"] == "budget_exhausted"
    assert r["max_distance"] == 1000
    assert r["monotone_escape"]


def test_trap_probability():
    t = basicwalk.trap_probability("t-lattice", dim=2)
    assert t["probability"] == "1/192"
    assert t["spiral_bound"] == "36866"
    assert basicwalk.trap_probability("t-lattice", dim=3)["probability"] == "1/25920"


def test_exact_processes():
    assert Fraction(basicwalk.z_process_exact_rational(2)) == Fraction(15, 4)
    assert basicwalk.z_process_exact(1) == pytest.approx(2.0)
    assert 1.75 <= basicwalk.z_process_exact(1000) / 1000 <= 1.85
    assert Fraction(basicwalk.occupancy_exact(3)) == Fraction(5, 2)
    assert Fraction(basicwalk.tree_escape_factor(2)) == Fraction(2, 3)


def test_errors_raise():
    with pytest.raises(basicwalk.BasicWalkError):
        basicwalk.walk("moebius", seed=1)
    with pytest.raises(ValueError):
        basicwalk.trap_probability("t-lattice", dim=1)


def test_cli_in_process(tmp_path):
    rc, out, err = basicwalk.cli(["bound", "--trap", "spire-hex"])
    assert rc == 0
    assert json.loads(out)["probability"] == "1/216"
    rc, _, err = basicwalk.cli(["walk", "--graph", "z2"])
    assert rc == 1 and "seed" in err


@pytest.mark.skipif(not os.environ.get("BASICWALK_EXE"), reason="executable not provided")
def test_executable_writes_csv_and_summary(tmp_path):
    out = tmp_path / "occ.csv"
    args = [os.environ["BASICWALK_EXE"], "experiment", "--preset", "occupancy", "--mode", "mc",
            "--n", "20", "--trials", "200", "--seed", "3", "--out", str(out)]
    subprocess.run(args, check=True, capture_output=True)
    first = out.read_bytes()
    assert first.startswith(b"trial,value\n")
    summary = json.loads((tmp_path / "occ.json").read_text())
    assert "exact" in summary["reference"]
    subprocess.run(args, check=True, capture_output=True)
    assert out.read_bytes() == first
