"""
Command-line surface: every subcommand end to end, exit codes, determinism.

Run:  pytest tests/test_cli.py -v
"""
import csv
import io
import json
import time
from itertools import permutations

import pytest

from dowkernet.cli.main import build_parser, main
from tests.conftest import FIGURE1, TRADE32


def _rows(text):
    return list(csv.reader(line for line in io.StringIO(text) if not line.startswith("#")))


# ---------------------------------------------------------------------------
# transform
# ---------------------------------------------------------------------------

class TestTransform:
    def test_json_with_metadata(self, tmp_path):
        out = tmp_path / "gamma.json"
        assert main(["transform", "-i", str(FIGURE1), "-o", str(out)]) == 0
        data = json.loads(out.read_text(encoding="utf-8"))
        assert f"{data['config']['sentinel']:.4f}" == "24.0259"
        assert data["config"]["epsilon"] == 1e-10
        assert "threads" not in data["config"]
        assert data["nodes"][0] == "x3"

    def test_csv_header(self, capsys):
        assert main(["transform", "-i", str(FIGURE1), "--output-format", "csv"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert any(line.startswith("# sentinel=24.0259") for line in lines)
        assert "# command=transform" in lines

    def test_output_feeds_back_in(self, tmp_path, capsys):
        gamma = tmp_path / "gamma.json"
        main(["transform", "-i", str(FIGURE1), "-o", str(gamma)])
        capsys.readouterr()
        assert main(["centrality", "-i", str(gamma)]) == 0
        rows = dict(_rows(capsys.readouterr().out)[1:])
        assert float(rows["x3"]) == pytest.approx(62.577, abs=1e-3)


# ---------------------------------------------------------------------------
# centrality / compare
# ---------------------------------------------------------------------------

class TestCentrality:
    def test_quasi_csv(self, capsys):
        assert main(["centrality", "-i", str(FIGURE1)]) == 0
        rows = _rows(capsys.readouterr().out)
        assert rows[0] == ["node", "score"]
        scores = {label: float(v) for label, v in rows[1:]}
        assert round(scores["x6"], 3) == 0.288
        assert scores["x1"] == 0.0

    def test_all_measures(self, capsys):
        assert main(["centrality", "-i", str(FIGURE1), "--measure", "all"]) == 0
        rows = _rows(capsys.readouterr().out)
        assert len(rows[0]) == 9
        assert len(rows) == 7

    def test_compare_alias(self, capsys):
        main(["centrality", "-i", str(FIGURE1), "--measure", "all"])
        via_centrality = capsys.readouterr().out
        main(["compare", "-i", str(FIGURE1)])
        via_compare = capsys.readouterr().out
        # only the echoed command name differs
        assert via_centrality.replace("command=centrality", "command=compare") == via_compare

    def test_json(self, capsys):
        assert main(["centrality", "-i", str(FIGURE1), "--measure", "pagerank", "--output-format", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        report = data["reports"][0]
        assert report["measure"] == "pagerank"
        assert sum(report["scores"].values()) == pytest.approx(1.0)

    def test_alpha_needs_a_classical_measure(self, capsys):
        assert main(["centrality", "-i", str(FIGURE1), "--alpha", "0.2"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_single_node_is_domain_error(self, tmp_path):
        path = tmp_path / "solo.csv"
        path.write_text("source,target,weight\nsolo,solo,0\n", encoding="utf-8")
        assert main(["centrality", "-i", str(path)]) == 3

    def test_katz_not_convergent(self, tmp_path):
        nodes = [f"n{i}" for i in range(12)]
        lines = ["source,target,weight"] + [f"{a},{b},1" for a, b in permutations(nodes, 2)]
        path = tmp_path / "complete.csv"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        assert main(["centrality", "-i", str(path), "--measure", "katz"]) == 4


# ---------------------------------------------------------------------------
# persistence / bottleneck
# ---------------------------------------------------------------------------

class TestPersistence:
    def test_json(self, capsys):
        assert main(["persistence", "-i", str(FIGURE1)]) == 0
        data = json.loads(capsys.readouterr().out)
        dim0 = data["diagrams"][0]
        assert dim0["dimension"] == 0
        assert len(dim0["points"]) == 6

    def test_infinite_cap(self, capsys):
        assert main(["persistence", "-i", str(FIGURE1), "--cap", "inf"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["diagrams"][0]["points"][-1][1] is None

    def test_csv_and_svg(self, tmp_path):
        assert main(["persistence", "-i", str(FIGURE1), "--output-format", "csv", "-o", str(tmp_path / "b.csv")]) == 0
        rows = _rows((tmp_path / "b.csv").read_text(encoding="utf-8"))
        assert rows[0] == ["dim", "birth", "death", "essential"]
        svg = tmp_path / "b.svg"
        assert main(["persistence", "-i", str(FIGURE1), "--output-format", "svg", "-o", str(svg)]) == 0
        assert svg.read_text(encoding="utf-8").startswith("<svg")


class TestBottleneck:
    def test_same_file_is_zero(self, tmp_path, capsys):
        diagrams = tmp_path / "p.json"
        main(["persistence", "-i", str(FIGURE1), "-o", str(diagrams)])
        capsys.readouterr()
        assert main(["bottleneck", "-i", str(diagrams), str(diagrams)]) == 0
        assert capsys.readouterr().out == "0\n"

    def test_json_per_dimension(self, tmp_path, capsys):
        diagrams = tmp_path / "p.json"
        main(["persistence", "-i", str(FIGURE1), "-o", str(diagrams)])
        capsys.readouterr()
        assert main(["bottleneck", "-i", str(diagrams), str(diagrams), "--dims", "0", "--output-format", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["per_dimension"] == {"0": 0.0}

    def test_missing_second_file(self, tmp_path):
        diagrams = tmp_path / "p.json"
        main(["persistence", "-i", str(FIGURE1), "-o", str(diagrams)])
        assert main(["bottleneck", "-i", str(diagrams), str(tmp_path / "absent.json")]) == 2


# ---------------------------------------------------------------------------
# dendrogram
# ---------------------------------------------------------------------------

class TestDendrogram:
    def test_writes_directory(self, tmp_path, capsys):
        out = tmp_path / "tree"
        assert main(["dendrogram", "-i", str(FIGURE1), "-o", str(out)]) == 0
        printed = capsys.readouterr().out.splitlines()
        assert len(printed) == 5
        newick = (out / "dendrogram.nwk").read_text(encoding="utf-8")
        assert newick.startswith("[version=")
        assert "[command=dendrogram]" in newick
        assert "STANDARD" in newick
        impact = _rows((out / "join_times.csv").read_text(encoding="utf-8"))
        assert impact[0] == ["node", "t"]
        assert impact[1][0] == "x3"
        assert len(_rows((out / "distances.csv").read_text(encoding="utf-8"))) == 1 + 7 * 7

    def test_thread_count_does_not_change_files(self, tmp_path):
        for threads in ("1", "8"):
            main(["dendrogram", "-i", str(FIGURE1), "-o", str(tmp_path / threads), "--threads", threads])
        for name in ("dendrogram.nwk", "dendrogram.json", "dendrogram.svg", "join_times.csv", "distances.csv"):
            assert (tmp_path / "1" / name).read_bytes() == (tmp_path / "8" / name).read_bytes(), name


# ---------------------------------------------------------------------------
# Errors and determinism
# ---------------------------------------------------------------------------

class TestErrors:
    def test_missing_input_file(self, tmp_path, capsys):
        assert main(["centrality", "-i", str(tmp_path / "absent.csv")]) == 2
        assert capsys.readouterr().err.startswith("error:")

    def test_missing_input_flag(self):
        assert main(["persistence"]) == 1

    @pytest.mark.parametrize("argv", [
        ["centrality", "--bogus"],
        ["frobnicate"],
        [],
        ["centrality", "-i", "x.csv", "--epsilon", "2"],
        ["centrality", "-i", "x.csv", "--cap", "soon"],
        ["persistence", "-i", "x.csv", "--max-dim", "1"],
    ])
    def test_usage_errors(self, argv):
        assert main(argv) == 1

    def test_reduced_with_explicit_cap(self, capsys):
        argv = ["persistence", "-i", str(FIGURE1), "--reduced"]
        assert main(argv + ["--cap", "30"]) == 3
        assert main(argv + ["--cap", "inf"]) == 3
        assert "sentinel cap" in capsys.readouterr().err
        assert main(argv) == 0

    def test_table_alphas_need_all_measures(self):
        assert main(["centrality", "-i", str(FIGURE1), "--measure", "katz", "--katz-alpha", "0.01"]) == 1

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as info:
            build_parser().parse_args(["--version"])
        assert info.value.code == 0
        assert capsys.readouterr().out.startswith("dowkernet ")


class TestDeterminism:
    def test_trade_network_compare(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        # default Katz alpha is past 1/spectral radius on this network
        common = ["compare", "-i", str(TRADE32), "--format", "adjacency", "--katz-alpha", "0.01"]
        assert main(common + ["-o", str(a), "--threads", "1"]) == 0
        assert main(common + ["-o", str(b), "--threads", "8"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_trade_network_persistence(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        common = ["persistence", "-i", str(TRADE32), "--format", "adjacency", "--reduced"]
        assert main(common + ["-o", str(a)]) == 0
        assert main(common + ["-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_trade_network_dendrogram(self, tmp_path):
        elapsed = {}
        for threads in ("1", "8"):
            started = time.perf_counter()
            code = main(["dendrogram", "-i", str(TRADE32), "--format", "adjacency", "--reduced",
                         "-o", str(tmp_path / threads), "--threads", threads])
            elapsed[threads] = time.perf_counter() - started
            assert code == 0
        for name in ("dendrogram.nwk", "dendrogram.json", "dendrogram.svg", "join_times.csv", "distances.csv"):
            assert (tmp_path / "1" / name).read_bytes() == (tmp_path / "8" / name).read_bytes(), name
        assert max(elapsed.values()) < 300.0
