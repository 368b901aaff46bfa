import csv
import io
import json

import pytest

from permuperc import experiments as ex
from permuperc.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def parse_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith("# ")
    header = json.loads(lines[0][2:])
    rows = list(csv.DictReader(io.StringIO("\n".join(l for l in lines[1:] if not l.startswith("#")))))
    return header, rows


def test_fmt():
    assert ex.fmt(True) == "true"
    assert ex.fmt(1 / 3) == "0.333333333"
    assert ex.fmt(7) == "7"


def test_percolate_json(capsys):
    code, out = run_cli(capsys, "percolate", "--n", "4", "--c", "2", "--seed", "5")
    assert code == 0
    header, body = out.splitlines()
    cfg = json.loads(header[2:])
    assert cfg["p"] == 0.5 and cfg["c"] == 2.0 and cfg["seed"] == 5
    rep = json.loads(body)
    assert sum(rep["component_sizes"]) == 120


def test_percolate_csv(capsys):
    code, out = run_cli(capsys, "percolate", "--n", "3", "--p", "0.4", "--format", "csv")
    _, rows = parse_csv(out)
    assert list(rows[0]) == ["n", "p", "seed", "largest", "second_largest", "num_components",
                             "isolated", "connected", "giant_fraction"]


def test_percolate_needs_one_parameter(capsys):
    with pytest.raises(SystemExit):
        main(["percolate", "--n", "3"])
    with pytest.raises(SystemExit):
        main(["percolate", "--n", "3", "--p", "0.1", "--c", "0.3"])


def test_percolate_cap(capsys):
    assert main(["percolate", "--n", "12", "--c", "2"]) == 2


def test_sweep_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["sweep", "--n", "5", "--c-grid", "0.5,1.5,2", "--trials", "6", "--seed", "3", "--out", str(a)])
    main(["sweep", "--n", "5", "--c-grid", "0.5,1.5,2", "--trials", "6", "--seed", "3",
          "--threads", "3", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    header, rows = parse_csv(a.read_text())
    assert header["c_grid"] == [0.5, 1.5, 2.0]
    assert [float(r["c"]) for r in rows] == [0.5, 1.5, 2.0]
    assert "lambda" in rows[0] and "second_over_nlogn" in rows[0]


def test_sweep_by_p(capsys):
    code, out = run_cli(capsys, "sweep", "--n", "4", "--p-grid", "0.25,0.5", "--trials", "3")
    _, rows = parse_csv(out)
    assert [float(r["c"]) for r in rows] == [1.0, 2.0]


def test_sweep_grid_must_be_sorted():
    with pytest.raises(ValueError):
        ex.SweepSpec(5, (2.0, 1.0))


def test_connectivity(capsys):
    code, out = run_cli(capsys, "connectivity", "--n", "4", "--lambdas", "0,1", "--trials", "30")
    _, rows = parse_csv(out)
    assert rows[0]["lambda_target"] == "0" and rows[0]["connectivity_rate"] == "1"


def test_hitting(capsys):
    code, out = run_cli(capsys, "hitting", "--n", "4", "--trials", "10", "--format", "json")
    lines = out.splitlines()
    data = json.loads(lines[1])
    assert len(data["rows"]) == 10
    assert all(r["t_connect"] >= r["t_min_deg_1"] for r in data["rows"])
    assert 0 <= data["summary"]["agreement"] <= 1


def test_pfs(capsys):
    code, out = run_cli(capsys, "pfs", "--n", "6", "--p", "0.3", "--mode", "two_phase", "--K", "2")
    summary = json.loads(out.splitlines()[1])
    assert {"rounds", "explored_per_round", "frontier_sizes", "max_weight",
            "min_face_dim_per_round"} <= set(summary)


def test_iso(capsys):
    code, out = run_cli(capsys, "iso", "--n", "3", "--k-max", "4", "--witness")
    _, rows = parse_csv(out)
    assert [r["i_k"] for r in rows] == ["3", "2", "1.66666667", "1"]
    assert len(rows[3]["witness_set"].split(",")) == 4


def test_spectral_and_trees(capsys):
    code, out = run_cli(capsys, "spectral")
    _, rows = parse_csv(out)
    assert all(float(r["abs_error"]) < 1e-9 for r in rows)
    code, out = run_cli(capsys, "trees", "--n-max", "2", "--m-max", "6")
    _, rows = parse_csv(out)
    assert rows[-1]["estimate"] == "36"


def test_embed_check(capsys):
    code, out = run_cli(capsys, "embed-check", "--n-max", "3")
    assert code == 0 and out.count("true") == 3


def test_verify_module(capsys):
    code, out = run_cli(capsys, "verify", "iso-spectral")
    assert code == 0 and "FAIL" not in out


def test_verify_fails_on_broken_generator(capsys, monkeypatch):
    from permuperc import verify

    def position_swap(pi, i):
        w = list(pi)
        w[i - 1], w[i] = w[i], w[i - 1]
        return tuple(w)

    original = verify.check_isometry
    monkeypatch.setattr(verify, "check_isometry", lambda n, gen=position_swap: original(n, gen))
    code, out = run_cli(capsys, "verify", "perm-core")
    assert code == 1 and "FAIL" in out


def test_verify_unknown_module(capsys):
    assert main(["verify", "nope"]) == 2
