import json
import subprocess
import sys

import numpy as np
import pytest

from langalloc.cli import main
from langalloc.similarity import SimilarityMatrix


LANGS = ("amh", "hau", "kin", "swa", "twi", "yor")


def write_fixture_matrix(path):
    # symmetric, unit diagonal; swa is hau's best source
    sims_to_hau = {"swa": 0.31, "yor": 0.22, "amh": 0.18, "kin": 0.16,
                   "twi": 0.12}
    n = len(LANGS)
    scores = np.full((n, n), 0.10)
    idx = {l: i for i, l in enumerate(LANGS)}
    for lang, s in sims_to_hau.items():
        scores[idx["hau"], idx[lang]] = s
        scores[idx[lang], idx["hau"]] = s
    np.fill_diagonal(scores, 1.0)
    SimilarityMatrix(LANGS, scores, provenance="cli test fixture").save_csv(path)


def write_fixture_availability(path):
    path.write_text(
        "language,count\nswa,1810\nyor,8000\namh,6000\nkin,5000\ntwi,4000\n"
    )


@pytest.fixture
def fixtures(tmp_path):
    sim = tmp_path / "sim.csv"
    avail = tmp_path / "avail.csv"
    write_fixture_matrix(str(sim))
    write_fixture_availability(avail)
    return tmp_path, sim, avail


def run_cli(args):
    return main([str(a) for a in args])


class TestAllocateCommand:
    def test_scarce_best_source_fixture(self, fixtures):
        tmp, sim, avail = fixtures
        out = tmp / "alloc.json"
        code = run_cli([
            "allocate", "--strategy", "all-from-best", "--budget", 5000,
            "--seed", 42, "--similarity", sim, "--availability", avail,
            "--target", "hau", "--out", out,
        ])
        assert code == 0
        obj = json.loads(out.read_text())
        assert obj["used"] == 1810
        assert obj["utilization"] == pytest.approx(0.362, abs=5e-4)
        assert obj["entries"] == [{"amount": 1810, "language": "swa"}]
        assert obj["strategy"] == "all-from-best"
        assert obj["budget"] == 5000

    def test_k_exceeding_pool_exits_1_naming_k(self, fixtures, capsys):
        tmp, sim, avail = fixtures
        code = run_cli([
            "allocate", "--strategy", "top-k-proportional", "--budget", 1000,
            "--k", 50, "--seed", 42, "--similarity", sim,
            "--availability", avail, "--target", "hau",
            "--out", tmp / "x.json",
        ])
        assert code == 1
        assert "k=50" in capsys.readouterr().err

    def test_unknown_flag_rejected(self, fixtures):
        tmp, sim, avail = fixtures
        code = run_cli([
            "allocate", "--strategy", "all-from-best", "--budget", 100,
            "--seed", 1, "--similarity", sim, "--availability", avail,
            "--target", "hau", "--out", tmp / "x.json", "--bogus-flag", "1",
        ])
        assert code == 1

    def test_byte_identical_reruns(self, fixtures):
        tmp, sim, avail = fixtures
        out1, out2 = tmp / "a1.json", tmp / "a2.json"
        for out in (out1, out2):
            assert run_cli([
                "allocate", "--strategy", "random-k", "--budget", 5000,
                "--k", 3, "--seed", 42, "--similarity", sim,
                "--availability", avail, "--target", "hau", "--out", out,
            ]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_missing_output_file_parent_is_io_error(self, fixtures):
        tmp, sim, avail = fixtures
        code = run_cli([
            "allocate", "--strategy", "all-from-best", "--budget", 100,
            "--seed", 1, "--similarity", sim, "--availability", avail,
            "--target", "hau", "--out", tmp / "nope" / "x.json",
        ])
        assert code == 3

    def test_all_zero_similarity_is_constraint_error(self, fixtures, tmp_path):
        tmp, sim, avail = fixtures
        # target absent from the matrix: every candidate gets similarity 0
        code = run_cli([
            "allocate", "--strategy", "all-from-best", "--budget", 100,
            "--seed", 1, "--similarity", sim, "--availability", avail,
            "--target", "zzz", "--out", tmp / "x.json",
        ])
        assert code == 2


class TestSimilarityCommand:
    def write_embeddings(self, tmp):
        emb = tmp / "emb"
        emb.mkdir()
        rng = np.random.default_rng(0)
        for lang in ("aaa", "bbb", "ccc"):
            rows = rng.standard_normal((6, 4))
            rows /= np.linalg.norm(rows, axis=1, keepdims=True)
            body = "\n".join(" ".join(f"{v:.17g}" for v in r) for r in rows)
            (emb / f"{lang}.txt").write_text(f"{lang} 6 4\n{body}\n")
        return emb

    def test_similarity_builds_loadable_matrix(self, tmp_path):
        emb = self.write_embeddings(tmp_path)
        out = tmp_path / "sim.csv"
        assert run_cli(["similarity", "--embeddings", emb, "--out", out,
                        "--provenance", "test"]) == 0
        m = SimilarityMatrix.load_csv(str(out))
        assert m.languages == ("aaa", "bbb", "ccc")

    def test_idempotent(self, tmp_path):
        emb = self.write_embeddings(tmp_path)
        o1, o2 = tmp_path / "s1.csv", tmp_path / "s2.csv"
        run_cli(["similarity", "--embeddings", emb, "--out", o1])
        run_cli(["similarity", "--embeddings", emb, "--out", o2])
        # the embedded config line records --out, so compare the matrix body
        body1 = [ln for ln in o1.read_text().splitlines() if not ln.startswith("#")]
        body2 = [ln for ln in o2.read_text().splitlines() if not ln.startswith("#")]
        assert body1 == body2


class TestManifestCommand:
    def test_end_to_end(self, fixtures):
        tmp, sim, avail = fixtures
        alloc = tmp / "alloc.json"
        run_cli([
            "allocate", "--strategy", "top-k-proportional", "--budget", 100,
            "--k", 3, "--seed", 42, "--similarity", sim,
            "--availability", avail, "--target", "hau", "--out", alloc,
        ])
        idx_dir = tmp / "idx"
        idx_dir.mkdir()
        for lang in ("swa", "yor", "amh", "kin", "twi"):
            (idx_dir / f"{lang}.txt").write_text(
                "\n".join(f"{lang}-{i}" for i in range(200)) + "\n"
            )
        out = tmp / "manifest.jsonl"
        assert run_cli([
            "manifest", "--allocation", alloc, "--index-dir", idx_dir,
            "--seed", 42, "--val-fraction", "0.1", "--out", out,
        ]) == 0
        lines = out.read_text().strip().split("\n")
        assert len(lines) == 100
        records = [json.loads(ln) for ln in lines]
        val = [r for r in records if r["split"] == "validation"]
        assert len(val) == 10
        meta = json.loads((tmp / "manifest.jsonl.meta.json").read_text())
        assert meta["seed"] == 42


class TestStatsAndSimulateCommands:
    def test_full_simulate_then_compare(self, tmp_path, capsys):
        spec = {
            "pools": [{
                "target": "hau",
                "sims": {"swa": 0.9, "yor": 0.55, "amh": 0.5, "kin": 0.45,
                         "twi": 0.4, "ibo": 0.35},
                "availability": {"swa": 1810, "yor": 4000, "amh": 4000,
                                 "kin": 4000, "twi": 4000, "ibo": 4000},
            }],
            "models": [{"tag": "m0", "tau": 2000.0, "beta": 0.0,
                        "noise_sd": 0.01, "seed": 5, "task": "synthetic"}],
            "configs": [
                {"strategy": "all-from-best", "budget": 5000},
                {"strategy": "top-k-proportional", "budget": 5000, "k": 5},
            ],
            "seeds": [42, 43, 44],
        }
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps(spec))
        results = tmp_path / "results.csv"
        assert run_cli(["simulate", "tournament", "--spec", spec_path,
                        "--out", results]) == 0
        results2 = tmp_path / "results2.csv"
        run_cli(["simulate", "tournament", "--spec", spec_path,
                 "--out", results2])
        assert results.read_bytes()[results.read_text().index("\n"):] \
            == results2.read_bytes()[results2.read_text().index("\n"):]

        report = tmp_path / "report.csv"
        assert run_cli([
            "stats", "compare", "--results", results, "--a", "all-from-best",
            "--b", "top-k-proportional", "--family-size", "4",
            "--out", report,
        ]) == 0
        text = report.read_text()
        assert "comparison,condition,n,delta" in text
        assert "all-from-best vs top-k-proportional" in text
        out = capsys.readouterr().out
        assert "delta=" in out


class TestHelp:
    def test_allocate_help_lists_defaults(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["allocate", "--help"])
        assert exc.value.code == 0
        text = capsys.readouterr().out
        assert "default: 5" in text       # k
        assert "default: 0.5" in text     # alpha
        assert "--seed" in text

    def test_manifest_help_lists_val_fraction_default(self, capsys):
        with pytest.raises(SystemExit):
            main(["manifest", "--help"])
        assert "default: 0.1" in capsys.readouterr().out


def test_out_dir_override(fixtures, monkeypatch, tmp_path):
    tmp, sim, avail = fixtures
    outdir = tmp_path / "redirected"
    outdir.mkdir()
    monkeypatch.setenv("LANGALLOC_OUT_DIR", str(outdir))
    monkeypatch.chdir(tmp_path)
    assert run_cli([
        "allocate", "--strategy", "all-from-best", "--budget", 100,
        "--seed", 1, "--similarity", sim, "--availability", avail,
        "--target", "hau", "--out", "alloc.json",
    ]) == 0
    assert (outdir / "alloc.json").exists()


def test_top_level_help_documents_out_dir(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    assert "LANGALLOC_OUT_DIR" in capsys.readouterr().out


def test_console_entrypoint_subprocess(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "langalloc", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "allocate" in proc.stdout
