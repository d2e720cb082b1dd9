import json

from fc_monodromy import cli


def run(args):
    return cli.main(args)


def write_params(tmp_path, obj, name="params.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return path


GENERIC_M2 = {"alpha": "2", "beta": "3", "gamma": ["5", "7"]}


class TestSampleParams:
    def test_deterministic_output(self, tmp_path):
        out1 = tmp_path / "a.json"
        out2 = tmp_path / "b.json"
        argv = ["--mode", "sample-params", "--m", "2", "--seed", "4", "--samples", "3"]
        assert run(argv + ["--out", str(out1)]) == 0
        assert run(argv + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_points_are_generic_and_seeded(self, tmp_path):
        out = tmp_path / "pts.json"
        assert run(["--mode", "sample-params", "--m", "3", "--seed", "5",
                    "--samples", "2", "--out", str(out)]) == 0
        obj = json.loads(out.read_text())
        assert [p["seed"] for p in obj["points"]] == [5, 6]

    def test_missing_m_is_config_error(self):
        assert run(["--mode", "sample-params"]) == cli.EXIT_CONFIG


class TestMatrices:
    def test_json_output(self, tmp_path):
        params = write_params(tmp_path, GENERIC_M2)
        out = tmp_path / "mats.json"
        assert run(["--mode", "matrices", "--params", str(params),
                    "--out", str(out)]) == 0
        obj = json.loads(out.read_text())
        assert set(obj["matrices"]) == {
            "M0", "M1", "M2", "P", "Mprime0", "Mprime1", "Mprime2", "H", "Lambda0",
        }
        assert obj["basis_order"] == [[], [1], [2], [1, 2]]
        assert obj["matrices"]["M1"]["basis"] == "delta"
        assert obj["matrices"]["Mprime1"]["basis"] == "delta_prime"

    def test_latex_output(self, tmp_path):
        params = write_params(tmp_path, GENERIC_M2)
        out = tmp_path / "mats.tex"
        assert run(["--mode", "matrices", "--params", str(params),
                    "--format", "latex", "--out", str(out)]) == 0
        text = out.read_text()
        assert "\\begin{pmatrix}" in text
        assert "Mprime0" in text

    def test_csv_needs_float_matrices(self, tmp_path):
        params = write_params(tmp_path, GENERIC_M2)
        rc = run(["--mode", "matrices", "--params", str(params),
                  "--format", "csv", "--out", str(tmp_path / "csvdir")])
        assert rc == cli.EXIT_CONFIG

    def test_csv_from_series_parameters(self, tmp_path):
        params = write_params(
            tmp_path, {"a": "1/3", "b": "-2/5", "c": ["1/7", "3/2"]}
        )
        outdir = tmp_path / "csvdir"
        assert run(["--mode", "matrices", "--params", str(params),
                    "--format", "csv", "--precision", "64",
                    "--out", str(outdir)]) == 0
        assert (outdir / "M0.csv").exists()
        assert len((outdir / "H.csv").read_text().splitlines()) == 4

    def test_from_sampled_seed(self, tmp_path):
        out = tmp_path / "mats.json"
        assert run(["--mode", "matrices", "--m", "2", "--seed", "3",
                    "--out", str(out)]) == 0
        obj = json.loads(out.read_text())
        assert obj["m"] == 2

    def test_non_generic_params_exit_3(self, tmp_path):
        params = write_params(tmp_path, {"alpha": "1", "beta": "3", "gamma": ["5"]})
        assert run(["--mode", "matrices", "--params", str(params)]) == cli.EXIT_NON_GENERIC

    def test_missing_file_exit_2(self, tmp_path):
        assert run(["--mode", "matrices", "--params", str(tmp_path / "nope.json")]) \
            == cli.EXIT_CONFIG


class TestVerify:
    def test_passes_and_is_deterministic(self, tmp_path):
        out1 = tmp_path / "v1.json"
        out2 = tmp_path / "v2.json"
        argv = ["--mode", "verify", "--m", "2", "--seed", "2", "--samples", "2",
                "--order", "5"]
        assert run(argv + ["--out", str(out1)]) == 0
        assert run(argv + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        report = json.loads(out1.read_text())
        assert report["all_passed"]
        assert [p["seed"] for p in report["points"]] == [2, 3]

    def test_samples_zero_is_config_error(self):
        assert run(["--mode", "verify", "--m", "2", "--samples", "0"]) == cli.EXIT_CONFIG

    def test_injected_failure_exits_1(self, tmp_path, monkeypatch):
        # fault injection: break the determinant comparison inside the suite
        def broken(p):
            return {
                "m": p.m,
                "checks": [{"name": "determinant_suite", "status": "fail",
                            "witness": {"injected": True}}],
                "all_passed": False,
            }

        monkeypatch.setattr(cli, "det_decomposition_check", broken)
        out = tmp_path / "v.json"
        rc = run(["--mode", "verify", "--m", "2", "--seed", "1", "--out", str(out)])
        assert rc == cli.EXIT_VERIFY_FAILED
        report = json.loads(out.read_text())
        assert not report["all_passed"]
        failing = [c for p in report["points"] for c in p["checks"]
                   if c["status"] == "fail"]
        assert failing and failing[0]["checks"][0]["witness"] == {"injected": True}

    def test_m1_supported(self, tmp_path):
        out = tmp_path / "v.json"
        assert run(["--mode", "verify", "--m", "1", "--seed", "0",
                    "--order", "4", "--out", str(out)]) == 0


class TestDet:
    def test_matches_and_reports(self, tmp_path):
        out = tmp_path / "det.json"
        assert run(["--mode", "det", "--m", "2", "--seed", "1", "--samples", "2",
                    "--out", str(out)]) == 0
        obj = json.loads(out.read_text())
        assert obj["all_passed"]
        assert all(pt["match"] for pt in obj["points"])

    def test_m1_is_config_error(self):
        assert run(["--mode", "det", "--m", "1"]) == cli.EXIT_CONFIG


class TestSeries:
    def test_value_at_origin(self, tmp_path):
        params = write_params(tmp_path, {"a": "1", "b": "1", "c": ["2"], "x": ["0"]})
        out = tmp_path / "s.json"
        assert run(["--mode", "series", "--params", str(params),
                    "--out", str(out)]) == 0
        obj = json.loads(out.read_text())
        assert obj["fc_value"].startswith("(1.0")

    def test_outside_domain_exit_4(self, tmp_path):
        params = write_params(tmp_path, {"a": "1", "b": "1", "c": ["2"], "x": ["1.5"]})
        assert run(["--mode", "series", "--params", str(params)]) == cli.EXIT_DOMAIN

    def test_local_solution_requested(self, tmp_path):
        params = write_params(
            tmp_path,
            {"a": "1/3", "b": "-2/5", "c": ["5/7"], "x": ["0.05"], "I": [1]},
        )
        out = tmp_path / "s.json"
        assert run(["--mode", "series", "--params", str(params), "--order", "10",
                    "--out", str(out)]) == 0
        obj = json.loads(out.read_text())
        assert "f_I_value" in obj and obj["I"] == [1]

    def test_missing_x_is_config_error(self, tmp_path):
        params = write_params(tmp_path, {"a": "1", "b": "1", "c": ["2"]})
        assert run(["--mode", "series", "--params", str(params)]) == cli.EXIT_CONFIG


class TestParsing:
    def test_unknown_mode_exit_2(self):
        assert run(["--mode", "bogus"]) == cli.EXIT_CONFIG

    def test_version_flag_exits_zero(self):
        assert run(["--version"]) == 0
