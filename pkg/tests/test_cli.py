import json
import os
import subprocess
import sys

import pytest

from coarsekit.cli import main, parse_vertex
from coarsekit.cli.manifest import ManifestError, load_manifest
from coarsekit.cli.reports import pin


def run(tmp_path, *argv):
    return main(["--out", str(tmp_path)] + list(argv))


def test_parse_vertex_literals():
    assert parse_vertex("3") == 3
    assert parse_vertex("-5") == -5
    assert parse_vertex("0,1") == (0, 1)
    assert parse_vertex("-2,7") == (-2, 7)
    assert parse_vertex("()") == ()
    assert parse_vertex("left") == "left"


def test_floyd_dist_pinned_line_example(tmp_path, capsys):
    code = run(tmp_path, "floyd", "dist", "--graph", "line",
               "--f", "geom:0.5", "--x", "1", "--y", "2", "--R", "8")
    assert code == 0
    out = capsys.readouterr().out
    assert "value 0.500000" in out
    assert "tail 0.007812" in out
    with open(os.path.join(str(tmp_path), "floyd-dist.json")) as fh:
        payload = json.load(fh)
    assert payload["value"] == 0.5
    assert payload["tail"] == pin(2.0 ** -7)


def test_graph_build_writes_artifact(tmp_path, capsys):
    code = run(tmp_path, "graph", "build", "--graph", "tree3",
               "--radius", "4")
    assert code == 0
    with open(os.path.join(str(tmp_path),
                           "graph-tree3-4.json")) as fh:
        payload = json.load(fh)
    # 1 + 3 + 3*2 + 3*4 + 3*8 vertices on the ternary-root tree ball
    assert payload["vertices"] == 46
    assert payload["edges"] == 45


def test_karlsson_table_and_csv(tmp_path, capsys):
    code = run(tmp_path, "floyd", "karlsson", "--graph", "line",
               "--f", "geom:0.5", "--radii", "4,6")
    assert code == 0
    with open(os.path.join(str(tmp_path), "karlsson-line.csv")) as fh:
        lines = fh.read().splitlines()
    assert lines[0] == "R,defect,bound"
    assert len(lines) == 3
    with open(os.path.join(str(tmp_path), "karlsson-line.json")) as fh:
        table = json.load(fh)["table"]
    assert all(row["defect"] <= row["bound"] for row in table)


def test_coarse_closure_membership(tmp_path, capsys):
    code = run(tmp_path, "coarse", "closure", "--carrier", "0,1,2",
               "--pairs", "0:1,1:0;1:2,2:1", "--check", "0:2")
    assert code == 0
    out = capsys.readouterr().out
    assert "member: yes" in out


def test_coarse_certify_equivalence(tmp_path, capsys):
    code = run(tmp_path, "coarse", "certify", "--radius", "6")
    assert code == 0
    with open(os.path.join(str(tmp_path), "coarse-certify.json")) as fh:
        payload = json.load(fh)
    assert payload["dense"] is True
    assert payload["certificate"]["ok"] is True


def test_action_sat_and_msvarc(tmp_path, capsys):
    assert run(tmp_path, "action", "sat", "--action", "z-line",
               "--base", "0;1", "--radius", "5") == 0
    assert run(tmp_path, "action", "msvarc", "--action", "z-line",
               "--x0", "0", "--radius", "5") == 0
    with open(os.path.join(str(tmp_path),
                           "action-msvarc-z-line.json")) as fh:
        payload = json.load(fh)
    assert payload["ok"] is True
    assert all(payload["certificates"].values())


def test_hyperbolic_delta_and_transport(tmp_path, capsys):
    assert run(tmp_path, "hyperbolic", "delta", "--graph", "cycle6",
               "--radius", "5") == 0
    assert "delta 1.000000" in capsys.readouterr().out
    assert run(tmp_path, "hyperbolic", "transport", "--case", "parent",
               "--length", "5") == 0
    with open(os.path.join(str(tmp_path),
                           "hyper-transport-parent.json")) as fh:
        payload = json.load(fh)
    assert payload["ok"] is True
    assert set(payload["bounds"]) == {0.0}


def test_usage_errors_exit_three(tmp_path, capsys):
    assert run(tmp_path, "bogus") == 3
    assert run(tmp_path, "floyd") == 3
    assert run(tmp_path, "floyd", "dist", "--graph", "line") == 3
    assert run(tmp_path, "verify", "no-such-suite") == 3
    assert "usage error" in capsys.readouterr().err


def test_unknown_graph_exits_three(tmp_path, capsys):
    code = run(tmp_path, "floyd", "dist", "--graph", "nosuch",
               "--f", "geom:0.5", "--x", "0", "--y", "1", "--R", "4")
    assert code == 3
    assert "manifest error" in capsys.readouterr().err


def test_verify_single_suite_passes(tmp_path, capsys):
    code = run(tmp_path, "verify", "topo-enumeration")
    assert code == 0
    out = capsys.readouterr().out
    assert "topo-enumeration" in out
    with open(os.path.join(str(tmp_path), "summary.json")) as fh:
        summary = json.load(fh)
    assert summary["failed"] == 0
    assert summary["inconclusive"] == 0
    assert summary["suites"][0]["status"] == "pass"
    with open(os.path.join(str(tmp_path), "summary.csv")) as fh:
        lines = fh.read().splitlines()
    assert lines[0] == "suite,status,instances,passed,failed,inconclusive"


def test_verify_artifacts_have_no_wall_clock(tmp_path):
    run(tmp_path, "verify", "topo-enumeration")
    with open(os.path.join(str(tmp_path),
                           "verify-topo-enumeration.json")) as fh:
        payload = json.load(fh)
    assert "wall_clock" not in payload
    assert "wall_clock" not in json.dumps(payload)


def test_verify_group_runs_are_byte_identical(tmp_path):
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    assert main(["--out", str(out1), "verify", "topo"]) == 0
    assert main(["--out", str(out2), "verify", "topo"]) == 0
    names = sorted(os.listdir(str(out1)))
    assert names == sorted(os.listdir(str(out2)))
    for name in names:
        with open(os.path.join(str(out1), name), "rb") as fh:
            blob1 = fh.read()
        with open(os.path.join(str(out2), name), "rb") as fh:
            blob2 = fh.read()
        assert blob1 == blob2, name


def test_tiny_budget_inconclusive_exits_two(tmp_path, capsys):
    code = run(tmp_path, "--budget", "tiny", "verify",
               "floyd-perspectivity")
    assert code == 2
    with open(os.path.join(str(tmp_path), "summary.json")) as fh:
        summary = json.load(fh)
    assert summary["failed"] == 0
    assert summary["inconclusive"] > 0
    assert summary["profile"] == "tiny"


def test_outdir_env_var(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("COARSEKIT_OUT", str(tmp_path / "envout"))
    code = main(["floyd", "dist", "--graph", "line", "--f", "geom:0.5",
                 "--x", "0", "--y", "1", "--R", "4"])
    assert code == 0
    assert os.path.exists(str(tmp_path / "envout" / "floyd-dist.json"))


def test_manifest_override_and_seed_flag(tmp_path, capsys):
    path = tmp_path / "man.json"
    path.write_text(json.dumps({"seed": 4242}))
    code = main(["--out", str(tmp_path), "--manifest", str(path),
                 "verify", "topo-enumeration"])
    assert code == 0
    with open(os.path.join(str(tmp_path), "summary.json")) as fh:
        assert json.load(fh)["seed"] == 4242
    code = main(["--out", str(tmp_path), "--seed", "7", "verify",
                 "topo-enumeration"])
    assert code == 0
    with open(os.path.join(str(tmp_path), "summary.json")) as fh:
        assert json.load(fh)["seed"] == 7


def test_manifest_rejects_dangling_references(tmp_path):
    path = tmp_path / "man.json"
    path.write_text(json.dumps(
        {"charts": {"broken": {"graph": "nosuch", "function": "geom-half",
                               "radius": 4}}}))
    with pytest.raises(ManifestError):
        load_manifest(str(path))
    assert main(["--out", str(tmp_path), "--manifest", str(path),
                 "verify", "topo-enumeration"]) == 3


def test_manifest_rejects_bad_json_and_profile(tmp_path):
    path = tmp_path / "man.json"
    path.write_text("{not json")
    with pytest.raises(ManifestError):
        load_manifest(str(path))
    with pytest.raises(ManifestError):
        load_manifest(None, budget_profile="huge")


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-c",
         "import sys; from coarsekit.cli import main; "
         "sys.exit(main(sys.argv[1:]))",
         "--out", str(tmp_path), "graph", "build", "--graph", "line",
         "--radius", "3"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "7 vertices" in proc.stdout
