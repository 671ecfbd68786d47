"""Command-line surface: exit codes, JSON schema, determinism, check names."""

from __future__ import annotations

import json

import pytest

from ak4 import cli
from ak4.cli import RunConfig, run_report
from ak4.errors import AK4Error


def run_main(argv):
    return cli.main(argv)


class TestReport:
    def test_flat_report_passes(self, capsys):
        code = run_main(["report", "--chart", "flat", "--points", "8", "--seed", "1", "--order", "3"])
        out = capsys.readouterr().out
        assert code == 0
        assert "KAHLER" in out
        assert "overall: pass" in out

    def test_kodaira_thurston_report(self, capsys):
        code = run_main(["report", "--chart", "kodaira-thurston", "--points", "4", "--seed", "7"])
        out = capsys.readouterr().out
        assert code == 0
        assert "AK" in out
        assert "s-star" in out

    def test_missing_chart_file_exit_2(self, capsys):
        code = run_main(["report", "--chart", "missing.json"])
        err = capsys.readouterr().err
        assert code == 2
        assert "missing.json" in err

    def test_order_2_skips_second_order_checks(self, capsys):
        code = run_main(["report", "--chart", "flat", "--points", "2", "--order", "2"])
        out = capsys.readouterr().out
        assert code == 0
        assert "skipped" in out
        assert "bianchi" not in out.split("skipped")[0]

    def test_json_output_and_determinism(self, tmp_path):
        paths = []
        for k in range(2):
            path = tmp_path / f"report{k}.json"
            config = RunConfig(chart="kodaira-thurston", points=2, seed=9, order=4, json_path=str(path))
            doc, code = run_report(config)
            assert code == 0
            cli.write_json(doc, str(path))
            paths.append(path)
        docs = [json.loads(p.read_text()) for p in paths]
        for doc in docs:
            assert doc["schema"] == "ak4/1"
            del doc["timing_s"]
        assert json.dumps(docs[0], sort_keys=True) == json.dumps(docs[1], sort_keys=True)

    def test_tol_scale_flag(self, capsys):
        code = run_main(["report", "--chart", "flat", "--points", "2", "--tol-scale", "10.0"])
        assert code == 0

    def test_config_validation(self):
        with pytest.raises(AK4Error):
            RunConfig(points=0)
        with pytest.raises(AK4Error):
            RunConfig(order=5)
        with pytest.raises(AK4Error):
            RunConfig(tol_scale=-1.0)


class TestCheck:
    @pytest.mark.parametrize("name", ["kappa", "ric-id", "s-star"])
    def test_fast_checks_pass_on_catalog(self, name, capsys):
        code = run_main(["check", name, "--chart", "all", "--points", "2", "--seed", "3", "--order", "2"])
        out = capsys.readouterr().out
        assert code == 0, out
        assert "pass" in out

    def test_kappa_on_fubini_study(self, capsys):
        code = run_main(["check", "kappa", "--chart", "fubini-study", "--points", "4"])
        out = capsys.readouterr().out
        assert code == 0
        assert "worst residual" in out

    def test_bach_3way_on_product_surfaces(self, capsys):
        code = run_main(["check", "bach-3way", "--chart", "product-surfaces", "--points", "2"])
        assert code == 0

    def test_unknown_check_exit_2_lists_names(self, capsys):
        code = run_main(["check", "nosuch", "--chart", "flat"])
        out = capsys.readouterr().out
        assert code == 2
        assert "kappa" in out and "bianchi" in out

    def test_sandbox_checks(self, capsys):
        for name in ("sandbox-roundtrip", "sandbox-lemma5", "gray-chain"):
            code = run_main(["check", name, "--points", "4", "--seed", "2"])
            assert code == 0, name


class TestClassify:
    def test_catalog_verdicts(self, capsys):
        code = run_main(["classify", "--points", "2", "--seed", "3", "--order", "2"])
        out = capsys.readouterr().out
        assert code == 0
        assert "flat" in out and "KAHLER" in out
        # kodaira-thurston gets an AK-prefixed verdict with the ladder shown
        kt_line = [ln for ln in out.splitlines() if ln.startswith("kodaira-thurston")][0]
        assert "AK" in kt_line
        assert "|dOmega|" in kt_line

    def test_complex_hyperbolic_einstein_flag(self, capsys):
        code = run_main(["classify", "--chart", "complex-hyperbolic", "--points", "2", "--order", "2"])
        out = capsys.readouterr().out
        assert code == 0
        assert "KAHLER" in out and "einstein" in out


class TestCatalogCommand:
    def test_lists_charts(self, capsys):
        assert run_main(["catalog"]) == 0
        out = capsys.readouterr().out
        for name in ("flat", "product-surfaces", "fubini-study", "complex-hyperbolic", "kodaira-thurston"):
            assert name in out


class TestAllCheckNames:
    def test_every_named_check_runs(self, capsys):
        # Exercise each registered check end to end on a cheap configuration.
        for name in sorted(cli.CHECKS):
            code = run_main(["check", name, "--chart", "flat", "--points", "1", "--seed", "4"])
            out = capsys.readouterr()
            assert code == 0, f"{name}: {out.out}"


class TestCheckSelection:
    def test_checks_flag_filters_identities(self, capsys):
        code = run_main(["report", "--chart", "flat", "--points", "2", "--checks", "kappa,ric-id"])
        out = capsys.readouterr().out
        assert code == 0
        assert "kappa" in out and "ric-id" in out
        assert "bianchi" not in out


class TestUserChartFiles:
    def _write_chart(self, tmp_path, mutate=None):
        from ak4 import charts

        data = charts.chart_to_dict(charts.catalog_chart("product-surfaces"))
        data["name"] = "user-chart"
        if mutate:
            mutate(data)
        path = tmp_path / "user.json"
        path.write_text(json.dumps(data))
        return str(path)

    def test_report_on_chart_file(self, tmp_path, capsys):
        path = self._write_chart(tmp_path)
        code = run_main(["report", "--chart", path, "--points", "2", "--order", "2"])
        out = capsys.readouterr().out
        assert code == 0
        assert "user-chart" in out

    def test_structure_violation_exits_2(self, tmp_path, capsys):
        def break_j(data):
            data["J"]["2_1"] = "0.7"

        path = self._write_chart(tmp_path, break_j)
        code = run_main(["report", "--chart", path, "--points", "2", "--order", "2"])
        err = capsys.readouterr().err
        assert code == 2
        assert "J o J" in err

    def test_json_to_stdout(self, capsys):
        code = run_main(["report", "--chart", "flat", "--points", "1", "--order", "2", "--json", "-"])
        out = capsys.readouterr().out
        doc = json.loads(out)
        assert code == 0
        assert doc["schema"] == "ak4/1"
        assert doc["aggregate"]["all_pass"] is True
