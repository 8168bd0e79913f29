import csv
import json
import os
import subprocess
import sys

import pytest

from transition_lab.cli import run
from transition_lab.report import CSV_COLUMNS, canonical_json


def call(*argv):
    out, err = [], []
    code = run(list(argv), out=out.append, err=err.append)
    return code, "\n".join(out), "\n".join(err)


def test_list():
    code, out, _ = call("list")
    assert code == 0 and "oct_collapse" in out and "borromean_double" in out


def test_check_exact_passes(tmp_path):
    path = tmp_path / "rep.json"
    code, out, _ = call("check", "ideal_octahedron", "--t", "1", "--exact", "--json", str(path))
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] and rep["exact"]
    assert path.read_text() == out + "\n"


@pytest.mark.parametrize("family,t", [("oct_collapse", "1/2"), ("quad_prime", "-0.5"),
                                      ("exp_quadrilateral", "0.7")])
def test_json_round_trip_is_byte_identical(family, t):
    code, out, _ = call("check", family, "--t", t)
    assert code == 0
    assert canonical_json(json.loads(out)) == out
    # and deterministic across runs
    assert call("check", family, "--t", t)[1] == out


def test_usage_errors():
    assert call("check", "nosuchfamily", "--t", "1")[0] == 2
    assert call("check", "oct_collapse", "--t", "abc")[0] == 2
    assert call("check", "oct_collapse", "--t", "3")[0] == 2
    assert call("bogus")[0] == 2
    assert call("holonomy", "torus_from_quadrilateral")[0] == 2
    assert call("holonomy", "torus_from_quadrilateral", "--t", "0.5", "--loop", "[a,q]")[0] == 2


def test_no_limit_is_check_failure():
    code, _, err = call("limit", "exp_quadrilateral", "--rescale", "gamma")
    assert code == 1 and "closed-form" in err


def test_limit_flags_degenerate_walls():
    code, out, _ = call("limit", "oct_prime", "--rescale", "eta", "--side", "pos")
    assert code == 0
    lines = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert len(lines) == 8
    assert sum(ln.endswith("degenerate") for ln in lines) == 4


def test_holonomy_output():
    code, out, _ = call("holonomy", "torus_from_quadrilateral", "--t", "0.5")
    rep = json.loads(out)
    assert code == 0 and rep["singularity"]["kind"] == "cone"
    code, out, _ = call("holonomy", "torus_from_quad_prime", "--limit", "eta")
    assert code == 0 and json.loads(out)["geometry"] == "hp"


def test_plot_csv(tmp_path):
    path = tmp_path / "p.csv"
    code, out, _ = call("plot", "ideal_octahedron", "--t", "1", "--out", str(path))
    assert code == 0
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == CSV_COLUMNS
    kinds = [r[1] for r in rows[1:]]
    assert kinds.count("wall") == 8 and kinds.count("vertex_ideal") == 6
    assert call("plot", "oct_collapse", "--t", "5", "--out", str(path))[0] == 2


def _module(*args, env=None):
    e = dict(os.environ)
    e.update(env or {})
    return subprocess.run([sys.executable, "-m", "transition_lab", *args], capture_output=True,
                          text=True, env=e)


def test_module_entry_point():
    r = _module("check", "nosuchfamily", "--t", "1")
    assert r.returncode == 2 and "unknown" in r.stderr.lower()


def test_env_tolerance_changes_classification():
    # corner walls of a Klein square slightly past ideal: |c| - 1 is about 4e-7
    code = ("from transition_lab.polytope import dihedral_angle;"
            "from transition_lab.forms import QuadraticForm as Q;"
            "s = (0.5 * (1 + 1e-7)) ** 0.5;"
            "print(dihedral_angle(Q.hyperbolic(2), [-s, 1, 0], [-s, 0, 1]).kind)")
    default = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True)
    loose = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                           env=dict(os.environ, TRANSITION_LAB_TOL="1e-5"))
    assert default.stdout.strip() == "ultraparallel"
    assert loose.stdout.strip() == "asymptotic"
