import math

import pytest

from bosetail import basis
from bosetail.cli import main, parse_alpha_scheme, parse_scheme
from bosetail.gutzwiller import mott_boundary_j
from bosetail.sweep import (
    BracketError,
    ResultRecord,
    SweepSpec,
    bench,
    detect_mott_boundary,
    emit_csv,
    parse_csv,
    run_sweep,
)


def small_gutz_spec(**kw):
    defaults = dict(solver="gutzwiller", mu_list=(0.4,), j_list=(0.0, 0.05, 0.1),
                    schemes=(basis.fock(4), basis.fock(6)), repeats=3)
    defaults.update(kw)
    return SweepSpec(**defaults)


class TestRecordsAndCsv:
    def test_round_trip_exact(self):
        records = run_sweep(small_gutz_spec())
        text = emit_csv(records)
        assert parse_csv(text) == records

    def test_header_order(self):
        text = emit_csv([])
        assert text.splitlines()[0] == (
            "solver,scheme_kind,n_c,alpha_opt,mu_over_u,j_over_u,z,l_bath,"
            "phi,n_mean,e_tot,e_paper,g_c0,e_kin_con,iters,time_ms,converged")

    def test_twelve_significant_digits(self):
        rec = ResultRecord(
            solver="gutzwiller", scheme_kind="fock", n_c=4,
            alpha_opt=0.0, mu_over_u=1.0 / 3.0, j_over_u=0.1, z=6,
            l_bath=None, phi=math.pi, n_mean=1.0, e_tot=-0.4, e_paper=-0.4,
            g_c0=None, e_kin_con=None, iters=10, time_ms=1.5, converged=True)
        line = emit_csv([rec]).splitlines()[1]
        assert "0.333333333333" in line
        assert "3.14159265359" in line
        assert line.endswith("true")

    def test_lf_line_endings(self):
        text = emit_csv(run_sweep(small_gutz_spec(j_list=(0.0,))))
        assert "\r" not in text

    def test_gutzwiller_rows_have_empty_bdmft_columns(self):
        records = run_sweep(small_gutz_spec(j_list=(0.05,)))
        line = emit_csv(records).splitlines()[1]
        cells = line.split(",")
        header = emit_csv([]).splitlines()[0].split(",")
        assert cells[header.index("g_c0")] == ""
        assert cells[header.index("e_kin_con")] == ""
        assert cells[header.index("l_bath")] == ""
        assert cells[header.index("e_paper")] != ""


class TestSweep:
    def test_row_count_and_order(self):
        records = run_sweep(small_gutz_spec())
        assert len(records) == 2 * 1 * 3
        keys = [r.sort_key() for r in records]
        assert keys == sorted(keys)

    def test_determinism_excluding_time(self):
        spec = small_gutz_spec()
        a = run_sweep(spec)
        b = run_sweep(spec)
        strip = lambda rs: [r.__class__(**{**r.__dict__, "time_ms": 0.0}) for r in rs]
        assert strip(a) == strip(b)

    def test_parallel_equals_serial(self):
        spec = small_gutz_spec()
        serial = run_sweep(spec)
        parallel = run_sweep(small_gutz_spec(workers=2))
        strip = lambda rs: [r.__class__(**{**r.__dict__, "time_ms": 0.0}) for r in rs]
        assert strip(serial) == strip(parallel)

    def test_warm_start_matches_cold_results(self):
        # warm starting accelerates but must not change converged answers
        jc = mott_boundary_j(0.4, 6)
        js = (0.5 * jc, 1.5 * jc, 2.5 * jc)
        warm = run_sweep(small_gutz_spec(j_list=js, schemes=(basis.fock(7),)))
        cold = run_sweep(small_gutz_spec(j_list=js, schemes=(basis.fock(7),),
                                         cold_start=True))
        for a, b in zip(warm, cold):
            assert a.phi == pytest.approx(b.phi, abs=1e-7)
            assert a.e_tot == pytest.approx(b.e_tot, abs=1e-9)

    def test_empty_j_list_rejected(self):
        with pytest.raises(ValueError):
            small_gutz_spec(j_list=())

    def test_bdmft_sweep_smoke(self):
        spec = SweepSpec(solver="bdmft", mu_list=(0.4,), j_list=(0.05, 0.15),
                         schemes=(basis.fock(4),), l_b=1)
        records = run_sweep(spec)
        assert len(records) == 2
        assert all(r.converged for r in records)
        assert all(r.g_c0 is not None and r.g_c0 <= 1e-12 for r in records)
        assert all(r.e_paper is None for r in records)


class TestBoundary:
    def test_gutzwiller_boundary_against_analytic_formula(self):
        jc_formula = mott_boundary_j(0.4, 6)
        jc = detect_mott_boundary("gutzwiller", basis.fock(12), 0.4,
                                  (0.01, 0.06), tol_j=1e-4)
        assert abs(jc - jc_formula) <= 2e-4

    def test_invalid_bracket_reports_end(self):
        with pytest.raises(BracketError) as err:
            detect_mott_boundary("gutzwiller", basis.fock(12), 0.4,
                                 (0.05, 0.09), tol_j=1e-3)
        assert err.value.end == "lower"
        with pytest.raises(BracketError) as err:
            detect_mott_boundary("gutzwiller", basis.fock(12), 0.4,
                                 (0.001, 0.01), tol_j=1e-3)
        assert err.value.end == "upper"


class TestBench:
    def test_speedup_columns(self):
        records, speedups = bench(small_gutz_spec(j_list=(0.05, 0.1)))
        text = emit_csv(records, extra=speedups)
        header = text.splitlines()[0].split(",")
        assert header[-1] == "speedup_vs_ref"
        # the reference scheme is fock:6 here, so its own speedup is 1
        for line in text.splitlines()[1:]:
            cells = line.split(",")
            if cells[1] == "fock" and cells[2] == "6":
                assert float(cells[-1]) == pytest.approx(1.0)

    def test_repeats_validation(self):
        with pytest.raises(ValueError):
            bench(small_gutz_spec(repeats=1))


class TestCli:
    def test_gutzwiller_single_point(self, tmp_path, capsys):
        out = tmp_path / "row.csv"
        code = main(["gutzwiller", "--mu", "0.4", "--j", "0.0",
                     "--scheme", "fock:5", "--out", str(out)])
        assert code == 0
        recs = parse_csv(out.read_text())
        assert len(recs) == 1
        assert recs[0].e_tot == pytest.approx(-0.4, abs=1e-9)

    def test_sweep_to_stdout(self, capsys):
        code = main(["sweep", "--solver", "gutzwiller", "--mu", "0.4",
                     "--j-min", "0", "--j-max", "0.1", "--j-step", "0.05",
                     "--scheme", "fock:4"])
        assert code == 0
        text = capsys.readouterr().out
        assert len(parse_csv(text)) == 3

    def test_validation_exit_code(self, capsys):
        assert main(["sweep", "--solver", "gutzwiller", "--mu", "0.4",
                     "--scheme", "nope:4"]) == 1
        assert main(["sweep", "--solver", "gutzwiller",
                     "--scheme", "fock:4"]) == 1  # no mu / j grid

    def test_boundary_command(self, capsys):
        code = main(["boundary", "--solver", "gutzwiller", "--mu", "0.4",
                     "--scheme", "fock:12", "--j-min", "0.01",
                     "--j-max", "0.06", "--tol-j", "2e-4"])
        assert code == 0
        j_c = float(capsys.readouterr().out.strip())
        assert abs(j_c - mott_boundary_j(0.4, 6)) < 4e-4

    def test_boundary_exit_code_on_bad_bracket(self, capsys):
        code = main(["boundary", "--solver", "gutzwiller", "--mu", "0.4",
                     "--scheme", "fock:12", "--j-min", "0.05",
                     "--j-max", "0.09"])
        assert code == 3

    def test_config_file_with_flag_override(self, tmp_path, capsys):
        cfg = tmp_path / "run.conf"
        cfg.write_text("solver = gutzwiller\nmu = 0.4\n"
                       "j_min = 0\nj_max = 0.1\nj_step = 0.1\n"
                       "scheme = fock:4\n")
        code = main(["sweep", "--config", str(cfg), "--scheme", "fock:5"])
        assert code == 0
        recs = parse_csv(capsys.readouterr().out)
        assert {r.n_c for r in recs} == {5}

    def test_parse_helpers(self):
        assert parse_scheme("cts:5").kind == "cts"
        assert parse_alpha_scheme("fixed:0.8") == ("fixed", 0.8)
        with pytest.raises(ValueError):
            parse_scheme("fock")
        with pytest.raises(ValueError):
            parse_alpha_scheme("nope")


class TestTailBoundaryAccuracy:
    def test_tail_basis_tracks_the_lobe_tip_better(self):
        # fourth lobe at mu/U = 3.5: a four-state hard cutoff has no
        # particle-addition channel left, which pushes its transition far
        # out; the tail-extended variant stays near the reference
        ref = detect_mott_boundary("gutzwiller", basis.fock(20), 3.5,
                                   (0.004, 0.05), tol_j=2e-4)
        tail = detect_mott_boundary("gutzwiller", basis.cts(4, 0.0), 3.5,
                                    (0.004, 0.05), tol_j=2e-4)
        hard = detect_mott_boundary("gutzwiller", basis.fock(4), 3.5,
                                    (0.004, 0.3), tol_j=2e-4)
        assert abs(tail - ref) < abs(hard - ref)


class TestSelftestCli:
    def test_exit_zero_on_fresh_checkout(self, capsys):
        from bosetail.cli import main
        assert main(["selftest"]) == 0
        assert "selftest: PASS" in capsys.readouterr().out


class TestBdmftTailSweep:
    def test_warm_started_series_with_amplitude(self):
        spec = SweepSpec(solver="bdmft", mu_list=(0.4,), j_list=(0.1, 0.2),
                         schemes=(basis.cts(3, 0.0),), l_b=1,
                         alpha_scheme="eaim")
        records = run_sweep(spec)
        assert len(records) == 2
        assert all(r.converged for r in records)
        assert all(r.alpha_opt > 0.1 for r in records)
        # warm start must not change the converged answers
        cold = run_sweep(SweepSpec(solver="bdmft", mu_list=(0.4,),
                                   j_list=(0.1, 0.2),
                                   schemes=(basis.cts(3, 0.0),), l_b=1,
                                   alpha_scheme="eaim", cold_start=True))
        for a, b in zip(records, cold):
            assert a.e_tot == pytest.approx(b.e_tot, abs=5e-6)
            assert a.phi == pytest.approx(b.phi, abs=5e-5)
