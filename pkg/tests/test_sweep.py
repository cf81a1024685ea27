import filecmp
import math

import pytest

from shearorbits.kicked import TWO_PI, Stability
from shearorbits.sweep import (
    SweepConfig,
    TongueRecord,
    emit_csv,
    emit_svg,
    load_config,
    parse_real,
    run_sweep,
    tip_locations,
)


def single_cell(k, omega, **kw):
    return SweepConfig(
        k_min=k - 0.01, k_max=k + 0.01,
        omega_min=omega - 0.01, omega_max=omega + 0.01,
        nk=1, nomega=1, **kw,
    )


# --- config validation ---------------------------------------------------------

def test_config_rejects_empty_ranges():
    with pytest.raises(ValueError):
        SweepConfig(k_min=1.0, k_max=1.0).validate()
    with pytest.raises(ValueError):
        SweepConfig(omega_min=2.0, omega_max=1.0).validate()


def test_config_rejects_bad_grids_and_guards():
    with pytest.raises(ValueError):
        SweepConfig(nk=0).validate()
    with pytest.raises(ValueError):
        SweepConfig(max_period=17).validate()
    with pytest.raises(ValueError):
        SweepConfig(grid_n=0).validate()
    with pytest.raises(ValueError):
        SweepConfig(tol=0.0).validate()
    with pytest.raises(ValueError):
        SweepConfig(periods=((0, 0),)).validate()


def test_run_sweep_validates_before_work():
    with pytest.raises(ValueError):
        run_sweep(SweepConfig(nk=0))


def test_default_targets_are_reduced_fractions():
    cfg = SweepConfig(max_period=5)
    assert cfg.targets() == [
        (1, 0), (2, 1), (3, 1), (3, 2), (4, 1), (4, 3),
        (5, 1), (5, 2), (5, 3), (5, 4),
    ]


# --- run_sweep ------------------------------------------------------------------

def test_fixed_point_cell_found():
    # k = 0.2 > |omega| = 0.1: the p=1 fixed point exists
    recs = run_sweep(single_cell(0.2, 0.1, periods=((1, 0),)), workers=1)
    assert len(recs) == 1
    r = recs[0]
    assert r.found and r.p == 1 and r.w_J == 0
    assert r.alpha == pytest.approx(-0.1)
    assert r.residual <= 1e-10
    assert r.stability is not None


def test_fixed_point_cell_not_found_below_threshold():
    recs = run_sweep(single_cell(0.05, 0.1, periods=((1, 0),)), workers=1)
    assert len(recs) == 1
    r = recs[0]
    assert not r.found
    assert r.stability is None and r.alpha is None and r.residual is None


def test_figure2_cell_is_elliptic():
    recs = run_sweep(single_cell(TWO_PI / 15, math.pi, periods=((2, 1),)), workers=1)
    assert recs[0].found
    assert recs[0].stability is Stability.ELLIPTIC
    assert recs[0].alpha == pytest.approx(0.0, abs=1e-12)


def test_sweep_is_deterministic_and_schedule_independent():
    cfg = SweepConfig(
        k_min=0.0, k_max=0.4, omega_min=-0.5, omega_max=0.5,
        nk=8, nomega=8, periods=((1, 0), (2, 1)),
    )
    serial = run_sweep(cfg, workers=1)
    parallel = run_sweep(cfg, workers=2)
    assert serial == parallel
    assert serial == run_sweep(cfg, workers=1)


def test_records_sorted_by_cell_then_class():
    cfg = SweepConfig(
        k_min=0.0, k_max=0.2, omega_min=0.0, omega_max=0.2,
        nk=3, nomega=3, periods=((2, 1), (1, 0)),
    )
    recs = run_sweep(cfg, workers=1)
    keys = [(r.k, r.omega, r.p, r.w_J) for r in recs]
    assert keys == sorted(keys)
    assert len(recs) == 3 * 3 * 2


def test_p1_tongue_matches_analytic_oracle_100x100():
    # existence of the (1, 0) fixed point is exactly k >= |omega|
    cfg = SweepConfig(
        k_min=0.0, k_max=0.5, omega_min=-0.5, omega_max=0.5,
        nk=100, nomega=100, periods=((1, 0),),
    )
    recs = run_sweep(cfg)
    diag = math.hypot(0.5 / 100, 1.0 / 100)
    mismatches = [
        r for r in recs
        if abs(r.k - abs(r.omega)) > diag and r.found != (r.k >= abs(r.omega))
    ]
    assert mismatches == []
    # monotone in k at fixed omega within the analytic region
    by_omega = {}
    for r in recs:
        by_omega.setdefault(r.omega, []).append(r)
    for omega, rs in by_omega.items():
        rs.sort(key=lambda r: r.k)
        found_ks = [r.k for r in rs if r.found]
        if found_ks:
            threshold = min(found_ks)
            for r in rs:
                if r.k > threshold + diag:
                    assert r.found


def test_alpha_changes_sign_at_tongue_center():
    cfg = SweepConfig(
        k_min=0.29, k_max=0.31, omega_min=math.pi - 0.5, omega_max=math.pi + 0.5,
        nk=1, nomega=20, periods=((2, 1),),
    )
    recs = [r for r in run_sweep(cfg, workers=1) if r.found]
    assert recs, "expected the (2,1) tongue to cover cells near omega = pi at k = 0.3"
    for r in recs:
        assert r.alpha == pytest.approx(math.pi - r.omega)
        if r.omega < math.pi:
            assert r.alpha > 0
        else:
            assert r.alpha < 0


def test_tip_locations_small_sweep():
    cfg = SweepConfig(
        k_min=0.0, k_max=0.3, omega_min=0.0, omega_max=TWO_PI,
        nk=24, nomega=48, max_period=2,
    )
    recs = run_sweep(cfg)
    tips = tip_locations(recs)
    cell = TWO_PI / 48
    by_class = {(p, q): omega for p, q, omega in tips}
    assert set(by_class) == {(1, 0), (2, 1)}
    assert abs(by_class[(1, 0)] - 0.0) <= cell
    assert abs(by_class[(2, 1)] - math.pi) <= cell


def test_tip_locations_picks_minimal_k():
    recs = [
        TongueRecord(k=0.3, omega=1.0, p=2, w_J=1, found=True),
        TongueRecord(k=0.1, omega=2.0, p=2, w_J=1, found=True),
        TongueRecord(k=0.2, omega=3.0, p=2, w_J=1, found=False),
    ]
    assert tip_locations(recs) == [(2, 1, 2.0)]


# --- CSV ------------------------------------------------------------------------

def test_emit_csv_empty(tmp_path):
    path = tmp_path / "empty.csv"
    emit_csv([], str(path))
    assert path.read_text() == "k,omega,p,w_J,found,stability,alpha,residual\n"


def test_emit_csv_single_found_record(tmp_path):
    rec = TongueRecord(
        k=0.25, omega=0.5, p=1, w_J=0, found=True,
        stability=Stability.ELLIPTIC, alpha=-0.5, residual=1e-13,
    )
    path = tmp_path / "one.csv"
    emit_csv([rec], str(path))
    lines = path.read_text().splitlines()
    assert len(lines) == 2
    assert lines[1] == "0.25,0.5,1,0,true,elliptic,-0.5,1e-13"


def test_emit_csv_reruns_byte_identical(tmp_path):
    cfg = SweepConfig(
        k_min=0.0, k_max=0.3, omega_min=-0.3, omega_max=0.3,
        nk=6, nomega=6, periods=((1, 0),),
    )
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_csv(run_sweep(cfg, workers=1), str(a))
    emit_csv(run_sweep(cfg, workers=2), str(b))
    assert filecmp.cmp(a, b, shallow=False)
    assert a.read_text().splitlines()[0] == "k,omega,p,w_J,found,stability,alpha,residual"


# --- SVG ------------------------------------------------------------------------

def test_emit_svg_empty_is_valid(tmp_path):
    path = tmp_path / "empty.svg"
    emit_svg([], str(path))
    text = path.read_text()
    assert text.lstrip().startswith("<?xml")
    assert "<svg" in text and "</svg>" in text


def test_emit_svg_deterministic(tmp_path):
    cfg = SweepConfig(
        k_min=0.0, k_max=0.3, omega_min=-0.3, omega_max=0.3,
        nk=6, nomega=6, periods=((1, 0),),
    )
    recs = run_sweep(cfg, workers=1)
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    emit_svg(recs, str(a))
    emit_svg(recs, str(b))
    assert filecmp.cmp(a, b, shallow=False)
    assert "<svg" in a.read_text()


# --- config parsing ---------------------------------------------------------------

def test_parse_real_pi_suffix():
    assert parse_real("1pi") == math.pi
    assert parse_real("0.5pi") == 0.5 * math.pi
    assert parse_real("-0.5pi") == -0.5 * math.pi
    assert parse_real("pi") == math.pi
    assert parse_real("0.25") == 0.25
    with pytest.raises(ValueError):
        parse_real("abc")


def test_load_config(tmp_path):
    path = tmp_path / "sweep.cfg"
    path.write_text(
        "# tongue scan\n"
        "k_min = 0\n"
        "k_max = 0.3\n"
        "omega_min = 0\n"
        "omega_max = 2pi\n"
        "nk = 10\n"
        "nomega = 20\n"
        "max_period = 3\n"
        "grid_n = 2\n"
        "tol = 1e-9\n"
        "periods = 0/1, 1/2\n"
    )
    cfg = load_config(str(path))
    assert cfg.k_max == 0.3
    assert cfg.omega_max == pytest.approx(2 * math.pi)
    assert (cfg.nk, cfg.nomega) == (10, 20)
    assert cfg.tol == 1e-9
    assert cfg.periods == ((1, 0), (2, 1))
    cfg.validate()


def test_load_config_rejects_unknown_key(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("k_mim = 0\n")
    with pytest.raises(ValueError, match="unknown key"):
        load_config(str(path))


def test_load_config_rejects_garbage_line(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("k_min 0\n")
    with pytest.raises(ValueError, match="key=value"):
        load_config(str(path))
