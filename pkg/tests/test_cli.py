import csv
import subprocess
import sys

import numpy as np
import pytest

from geomkit import shapes
from geomkit.cli import IngestError, PipelineConfig, PipelineError, ingest, run_pipeline
from geomkit.cli.ingest import read_csv_points, read_ply_ascii, write_csv_points, write_ply_ascii
from geomkit.cli.main import main, read_config


def rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture
def l_csv(tmp_path):
    p = tmp_path / "l.csv"
    write_csv_points(p, shapes.l_shape(200, noise=0.01, seed=1))
    return p


class TestIngest:
    def test_two_points(self, tmp_path):
        p = tmp_path / "a.csv"
        p.write_text("0,0\n1,0\n")
        np.testing.assert_array_equal(read_csv_points(p, 2), [[0, 0], [1, 0]])

    def test_header_and_blank_lines(self, tmp_path):
        p = tmp_path / "a.csv"
        p.write_text("x,y\n0,0\n\n1.5,-2e-3\n")
        np.testing.assert_array_equal(read_csv_points(p, 2), [[0, 0], [1.5, -2e-3]])

    def test_bad_row_reports_line(self, tmp_path):
        p = tmp_path / "a.csv"
        p.write_text("0,0\n1,1\na,b\n")
        with pytest.raises(IngestError, match=r"a\.csv:3:"):
            read_csv_points(p, 2)

    def test_wrong_arity(self, tmp_path):
        p = tmp_path / "a.csv"
        p.write_text("0,0\n1,1,1\n")
        with pytest.raises(IngestError, match=":2:"):
            read_csv_points(p, 2)

    def test_missing_file(self, tmp_path):
        with pytest.raises(IngestError):
            ingest(tmp_path / "nope.csv")

    def test_ply_roundtrip(self, tmp_path):
        pts = np.random.default_rng(0).normal(size=(100, 3))
        write_ply_ascii(tmp_path / "a.ply", pts)
        back = read_ply_ascii(tmp_path / "a.ply", 3)
        np.testing.assert_array_equal(back, pts)
        write_csv_points(tmp_path / "a.csv", back)
        np.testing.assert_array_equal(ingest(tmp_path / "a.csv", "csv", 3), pts)

    def test_ply_extra_properties_and_elements(self, tmp_path):
        p = tmp_path / "a.ply"
        p.write_text("ply\nformat ascii 1.0\ncomment x\nelement vertex 2\nproperty float y\nproperty float x\n"
                     "property uchar red\nelement face 1\nproperty list uchar int vertex_indices\nend_header\n"
                     "1 2 255\n3 4 0\n3 0 1 1\n")
        np.testing.assert_array_equal(read_ply_ascii(p, 2), [[2, 1], [4, 3]])

    def test_ply_binary_rejected(self, tmp_path):
        p = tmp_path / "a.ply"
        p.write_text("ply\nformat binary_little_endian 1.0\nelement vertex 0\nend_header\n")
        with pytest.raises(IngestError, match="(?i)ascii"):
            read_ply_ascii(p, 3)


class TestPipeline:
    def test_l_shape_two_segments(self, l_csv, tmp_path):
        cfg = PipelineConfig(input=str(l_csv), eps_min=0.5, sigma_max=0.05, out_tex=str(tmp_path / "f.tex"),
                             out_csv=str(tmp_path / "s.csv"), out_polyline=str(tmp_path / "p.csv"))
        res = run_pipeline(cfg)
        assert len(res.clusters) == 1
        segs = rows(tmp_path / "s.csv")
        assert len(segs) == 2
        assert list(segs[0]) == ["cluster_id", "seg_id", "x0", "y0", "x1", "y1", "sse", "count"]
        assert sum(int(r["count"]) for r in segs) == 200 + 1  # the corner sample is shared
        corners = rows(tmp_path / "p.csv")
        assert len(corners) == 3
        mid = np.array([float(corners[1]["x"]), float(corners[1]["y"])])
        assert np.linalg.norm(mid) < 0.05
        tex = (tmp_path / "f.tex").read_text()
        assert r"\begin{tikzpicture}" in tex and r"\end{document}" in tex

    @pytest.mark.parametrize("vectorizer", ["ftls", "ftls+global", "dp", "rw"])
    def test_vectorizers(self, vectorizer, tmp_path):
        cfg = PipelineConfig(shape="square", n=201, eps_min=0.5, vectorizer=vectorizer,
                             out_csv=str(tmp_path / "s.csv"))
        run_pipeline(cfg)
        assert len(rows(tmp_path / "s.csv")) == 4

    def test_helix_3d(self, tmp_path):
        cfg = PipelineConfig(shape="helix", n=600, dim=3, eps_min=0.5, sigma_max=0.1,
                             out_tex=str(tmp_path / "h.tex"), out_csv=str(tmp_path / "h.csv"))
        res = run_pipeline(cfg)
        assert len(res.clusters) >= 1
        assert "z0" in rows(tmp_path / "h.csv")[0]

    def test_empty_input(self, tmp_path):
        p = tmp_path / "e.csv"
        p.write_text("")
        with pytest.raises(PipelineError) as info:
            run_pipeline(PipelineConfig(input=str(p)))
        assert info.value.stage == "ingest" and "no points" in str(info.value)

    def test_identical_runs_identical_bytes(self, l_csv, tmp_path):
        outs = []
        for k in range(2):
            out = tmp_path / f"s{k}.csv"
            run_pipeline(PipelineConfig(input=str(l_csv), eps_min=0.5, out_csv=str(out),
                                        out_tex=str(tmp_path / f"f{k}.tex")))
            outs.append((out.read_bytes(), (tmp_path / f"f{k}.tex").read_bytes()))
        assert outs[0] == outs[1]

    @pytest.mark.parametrize("kw, stage", [
        ({"vectorizer": "magic"}, "vectorize"),
        ({"sigma_max": -1}, "vectorize"),
        ({"eps_min": -1}, "segment"),
        ({"dim": 4}, "ingest"),
        ({"format": "xyz"}, "ingest"),
    ])
    def test_invalid_config_stage(self, kw, stage, l_csv):
        with pytest.raises(PipelineError) as info:
            run_pipeline(PipelineConfig(input=str(l_csv), **kw))
        assert info.value.stage == stage

    def test_failed_compile_is_export_error(self, l_csv, tmp_path):
        cfg = PipelineConfig(input=str(l_csv), eps_min=0.5, out_tex=str(tmp_path / "f.tex"), compile=True,
                             latex_cmd=f"{sys.executable} -c 'import sys; sys.exit(1)'")
        with pytest.raises(PipelineError) as info:
            run_pipeline(cfg)
        assert info.value.stage == "export"

    def test_missing_compiler_skips(self, l_csv, tmp_path):
        cfg = PipelineConfig(input=str(l_csv), eps_min=0.5, out_tex=str(tmp_path / "f.tex"), compile=True,
                             latex_cmd="definitely-not-a-latex-binary")
        res = run_pipeline(cfg)
        assert str(res.compile_result) == "skipped: compiler not found"


class TestMain:
    def test_run(self, l_csv, tmp_path, capsys):
        out = tmp_path / "s.csv"
        rc = main(["run", "--input", str(l_csv), "--eps-min", "0.5", "--out-csv", str(out)])
        assert rc == 0
        assert len(rows(out)) == 2
        assert capsys.readouterr().out

    def test_empty_input_exit_code(self, tmp_path, capsys):
        p = tmp_path / "e.csv"
        p.write_text("")
        assert main(["run", "--input", str(p)]) == 1
        assert "error[ingest]: no points" in capsys.readouterr().err

    def test_malformed_input_names_line(self, tmp_path, capsys):
        p = tmp_path / "bad.csv"
        p.write_text("0,0\n1,x\n")
        assert main(["run", "--input", str(p)]) == 1
        err = capsys.readouterr().err
        assert "error[ingest]" in err and "bad.csv:2" in err

    def test_bench_rows(self, capsys):
        rc = main(["bench", "--sizes", "200,400", "--algorithms", "ftls,dp", "--repeats", "1"])
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 1 + 4

    def test_bench_output_file_and_table(self, tmp_path):
        rc = main(["bench", "--sizes", "200", "--algorithms", "rw", "--repeats", "1",
                   "--output", str(tmp_path / "b.csv"), "--out-tex", str(tmp_path / "b.tex")])
        assert rc == 0
        assert len(rows(tmp_path / "b.csv")) == 1
        assert r"\begin{tabular}" in (tmp_path / "b.tex").read_text()

    def test_bench_unknown_shape(self, capsys):
        assert main(["bench", "--shape", "torus"]) == 1
        err = capsys.readouterr().err
        assert "error[ingest]" in err
        for name in shapes.SHAPES:
            assert name in err

    def test_bench_unknown_algorithm(self, capsys):
        assert main(["bench", "--algorithms", "ftls,magic"]) == 1
        assert "error[vectorize]" in capsys.readouterr().err

    def test_config_file_and_flag_precedence(self, l_csv, tmp_path):
        conf = tmp_path / "run.conf"
        out = tmp_path / "s.csv"
        conf.write_text(f"# pipeline defaults\ninput = {l_csv}\neps-min = 0.5\nvectorizer = dp\ntol = 100\n"
                        f"out_csv = {out}\n")
        assert read_config(conf)["eps_min"] == "0.5"
        assert main(["run", "--config", str(conf)]) == 0
        assert len(rows(out)) == 1  # huge tolerance: a single chord
        assert main(["run", "--config", str(conf), "--tol", "0.05"]) == 0
        assert len(rows(out)) == 2

    def test_bad_config(self, tmp_path, capsys):
        conf = tmp_path / "run.conf"
        conf.write_text("eps_min = 0.5\nbogus line\n")
        assert main(["run", "--config", str(conf)]) == 1
        assert "error[ingest]: config" in capsys.readouterr().err

    def test_traits(self, capsys):
        assert main(["traits"]) == 0
        out = capsys.readouterr().out
        assert "VectorND" in out and "has_metric" in out

    def test_module_entry_point(self, tmp_path):
        out = tmp_path / "s.csv"
        proc = subprocess.run([sys.executable, "-m", "geomkit.cli", "run", "--shape", "l-shape", "--n", "200",
                               "--noise", "0.01", "--eps-min", "0.5", "--out-csv", str(out)],
                              capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        assert len(rows(out)) == 2
