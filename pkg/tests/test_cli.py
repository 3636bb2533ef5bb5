import json

import numpy as np
import pytest

from udwent import cli

BASE = {
    "pair": {"gamma": 1e-4, "omega": 2.3, "lambda_cut_0": 25, "lambda_cut_1": 25, "d": 1.0},
    "state": {"alpha": 1.1, "beta": 4.5},
    "grid": {"t_min": 0, "t_max": 30, "t_steps": 600, "d_values": [0.7, 2.0]},
    "method": "first_order",
}


def write(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(path)


def run(args, capsys=None):
    code = cli.main(args)
    err = capsys.readouterr().err if capsys else ""
    return code, err


# configuration

@pytest.mark.parametrize("patch, field", [
    ({"pair": {"omega": 2.3}}, "pair"),
    ({"pair": {"gamma": -1.0, "omega": 2.3, "d": 1.0}}, "pair.gamma"),
    ({"pair": {"gamma": 1e-4, "omega": 2.3, "d": 0.0}}, "pair.d"),
    ({"grid": {"d_values": []}}, "grid.d_values"),
    ({"grid": {"t_steps": 0}}, "grid.t_steps"),
    ({"grid": {"t_min": 5, "t_max": 1}}, "grid.t_max"),
    ({"method": "exact"}, "method"),
    ({"order": -1}, "order"),
    ({"colour": 1}, "colour"),
    ({"state": {"alpha": 1.0, "gamma": 2.0}}, "state.gamma"),
])
def test_invalid_config_names_the_field(patch, field):
    doc = dict(BASE, **patch)
    with pytest.raises(cli.ConfigError, match=field.replace(".", r"\.")):
        cli.parse_config(doc)


def test_config_defaults_and_grid():
    cfg = cli.parse_config({"pair": {"gamma": 1e-3, "omega": 2.3, "d": 2.0},
                            "grid": {"d_min": 1.0, "d_max": 100.0, "d_steps": 3}})
    assert cfg.d_values == pytest.approx([1.0, 10.0, 100.0])
    assert cfg.method == "first_order" and cfg.workers == 1
    assert len(cfg.t_grid()) == 101


def test_overrides():
    doc = cli.apply_overrides(BASE, ["grid.t_max=5", "state.alpha=2", "method=zeroth"])
    cfg = cli.parse_config(doc)
    assert cfg.t_max == 5.0 and cfg.alpha == 2.0 and cfg.method == "zeroth"
    assert BASE["grid"]["t_max"] == 30
    with pytest.raises(cli.ConfigError):
        cli.apply_overrides(BASE, ["grid.t_max"])


def test_json_syntax_error_reports_line(tmp_path, capsys):
    path = write(tmp_path, '{\n  "pair": {"gamma": 1e-4,,}\n}')
    code, err = run(["trajectory", "--config", path], capsys)
    assert code == 2
    assert "line 2" in err


def test_empty_separation_list_exit_code(tmp_path, capsys):
    path = write(tmp_path, dict(BASE, grid={"d_values": []}))
    code, err = run(["trajectory", "--config", path], capsys)
    assert code == 2 and "grid.d_values" in err


def test_missing_config_file(tmp_path, capsys):
    code, err = run(["scales", "--config", str(tmp_path / "nope.json")], capsys)
    assert code == 2


def test_numerical_failure_exit_code(tmp_path, capsys):
    doc = dict(BASE, pair=dict(BASE["pair"], d=0.05), grid={"t_max": 0.5, "t_steps": 5},
               method="full_series")
    code, err = run(["trajectory", "--config", write(tmp_path, doc)], capsys)
    assert code == 3 and "numerical failure" in err


def test_write_csv_refuses_nan(tmp_path):
    with pytest.raises(ArithmeticError):
        cli.write_csv(str(tmp_path / "x.csv"), ("a",), [[np.nan]], {})


# trajectory output

def test_output_identical_across_worker_counts(tmp_path):
    cfg_path = write(tmp_path, BASE)
    outs = []
    for w in (1, 8):
        out = tmp_path / f"w{w}.csv"
        assert cli.main(["trajectory", "--config", cfg_path, "--workers", str(w), "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert len(outs[0].splitlines()) == 2 + 2 * 600


def test_metadata_round_trip(tmp_path):
    out = tmp_path / "a.csv"
    assert cli.main(["trajectory", "--config", write(tmp_path, BASE), "--out", str(out),
                     "--set", "grid.t_steps=40"]) == 0
    meta, header, rows = cli.read_csv(str(out))
    assert tuple(header) == cli.COLUMNS
    assert np.all(np.isfinite(rows))
    assert list(rows[:, 1]) == sorted(rows[:, 1])
    again = tmp_path / "b.csv"
    assert cli.main(["trajectory", "--config", write(tmp_path, meta["config"], "meta.json"),
                     "--out", str(again)]) == 0
    assert again.read_bytes() == out.read_bytes()


@pytest.mark.parametrize("d, residual", [(15.0, 0.0), (5.0, 0.01)])
def test_zeroth_order_negativity_decays(tmp_path, d, residual):
    # the zeroth-order late state keeps a cross correlation ~ sinc(omega d),
    # so at moderate d the negativity settles just above zero
    doc = {"pair": {"gamma": 1e-5, "omega": 2.3, "lambda_cut_0": 20, "lambda_cut_1": 20, "d": d},
           "state": {"alpha": 1.1, "beta": 4.5},
           "grid": {"t_min": 0, "t_max": 6e5, "t_steps": 121}, "method": "zeroth"}
    out = tmp_path / "f1.csv"
    assert cli.main(["trajectory", "--config", write(tmp_path, doc), "--out", str(out)]) == 0
    _, _, rows = cli.read_csv(str(out))
    en = rows[:, 3]
    assert en[0] > 0.5 and en[-1] <= residual
    assert en[:20].max() > en[40:60].max() > en[-1]


def test_method_and_order_flags(tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    path = write(tmp_path, dict(BASE, grid={"t_max": 3.0, "t_steps": 7}))
    assert cli.main(["trajectory", "--config", path, "--method", "zeroth", "--out", str(out1)]) == 0
    assert cli.main(["trajectory", "--config", path, "--order", "0", "--out", str(out2)]) == 0
    _, _, a = cli.read_csv(str(out1))
    _, _, b = cli.read_csv(str(out2))
    assert np.array_equal(a, b)


# other commands

def test_scales_report(tmp_path, capsys):
    doc = {"pair": {"gamma": 1e-4, "omega": 2.3, "lambda_cut_1": 25, "d": 1.0}}
    assert cli.main(["scales", "--config", write(tmp_path, doc)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["classification"] == "stable"
    assert rep["d_ins"] == pytest.approx(3.8e-5, rel=0.03)
    assert rep["d_min"] == pytest.approx(9e-12, rel=0.2)
    assert rep["d_ent"] == pytest.approx(0.025, rel=0.1)
    assert rep["d_0"] == pytest.approx(616, rel=0.05)
    assert rep["ordered"] is True and rep["d_ent_exceeds_d_ins"] is True
    assert rep["gamma_plus"] > rep["gamma_minus"] > 0


def test_scales_unstable_and_marginal():
    cfg = cli.parse_config({"pair": {"gamma": 0.25, "omega": 0.3, "d": 1.0}})
    rep = cli.scales_report(cfg)
    assert rep["classification"] == "unstable" and "d_ins" in rep["note"]
    from udwent.stability import d_ins

    d = d_ins(cfg.params)
    rep = cli.scales_report(cli.parse_config({"pair": {"gamma": 0.25, "omega": 0.3, "d": d}}))
    assert rep["classification"] == "marginal"


def test_roots_csv(tmp_path):
    doc = {"pair": {"gamma": 0.25, "omega": 0.8, "d": 1.0}, "search_box": [6.0, -1.0, 2.2]}
    out = tmp_path / "r.csv"
    assert cli.main(["roots", "--config", write(tmp_path, doc), "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[1] == "branch,re_k,im_k,kind,residual"
    plus = [ln.split(",") for ln in lines[2:] if ln.startswith("+")]
    assert sum(r[3] == "purely_imaginary" for r in plus) == 3
    assert all(float(r[4]) < 1e-9 for r in plus)


def test_figure_fig8(tmp_path):
    assert cli.main(["figure", "fig8", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "fig8_roots.csv").read_text().splitlines()[2:]
    rows = [ln.split(",") for ln in lines if ln.split(",")[1] == "+"]
    counts = [sum(r[4] == "purely_imaginary" for r in rows if float(r[0]) == om) for om in cli.FIG8_OMEGAS]
    assert counts == [2, 3, 1]


def test_figure_fig2_crossing(tmp_path):
    assert cli.main(["figure", "fig2", "--out", str(tmp_path), "--set", "grid.d_steps=60"]) == 0
    _, header, rows = cli.read_csv(str(tmp_path / "fig2_upsilon0.csv"))
    assert header == ["d", "upsilon0", "lower_bound"]
    i = np.nonzero(np.diff(np.sign(rows[:, 2])))[0]
    assert len(i) == 1 and rows[i[0], 0] < 616 < rows[i[0] + 1, 0]


def test_figure_fig3_sign_change(tmp_path):
    assert cli.main(["figure", "fig3", "--out", str(tmp_path), "--set", "grid.d_steps=30"]) == 0
    _, _, rows = cli.read_csv(str(tmp_path / "fig3_late.csv"))
    i = np.nonzero(np.diff(np.sign(rows[:, 1])))[0]
    assert len(i) == 1 and rows[i[0], 0] < 0.025 < rows[i[0] + 1, 0]
    assert np.all(rows[:, 2] >= 0)


def test_figure_fig6_has_both_states(tmp_path):
    assert cli.main(["figure", "fig6", "--out", str(tmp_path), "--set", "grid.t_steps=5",
                     "--set", "grid.d_steps=3"]) == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["fig6_trajectory_a1.1_b4.5.csv", "fig6_trajectory_a1.5_b0.2.csv"]


def test_figure_fig7_relative_negativity(tmp_path):
    assert cli.main(["figure", "fig7", "--out", str(tmp_path), "--set", "grid.t_steps=5",
                     "--set", "grid.d_steps=3"]) == 0
    _, header, rows = cli.read_csv(str(tmp_path / "fig7_en_rel.csv"))
    assert header == ["t", "d", "en_rel"] and np.all(np.isfinite(rows))


def test_unknown_figure(capsys):
    code, err = run(["figure", "fig9"], capsys)
    assert code == 2 and "fig9" in err


def test_selftest(capsys):
    assert cli.main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 4
