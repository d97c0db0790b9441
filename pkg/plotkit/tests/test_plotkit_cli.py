"""CLI contract: exit codes, --out, loud schema errors naming files."""

from __future__ import annotations

import shutil
import subprocess

import pytest

from plotkit.cli import main_disorder, main_orders, main_trace

from pkhelpers import write_summary_csv, write_trace_csv


# ---------------------------------------------------------------------------
# plot-trace
# ---------------------------------------------------------------------------


def test_plot_trace_writes_figure(trace_csv, tmp_path, capsys):
    out = tmp_path / "fig.png"
    rc = main_trace([str(trace_csv), "--out", str(out)])
    assert rc == 0
    assert out.exists() and out.stat().st_size > 0
    assert str(out) in capsys.readouterr().out


def test_plot_trace_reference_forms(trace_csv, tmp_path):
    out = tmp_path / "fig.png"
    rc = main_trace(
        [str(trace_csv), "--ref", "ED=-2.236", "--ref", "-3.0", "--out", str(out)]
    )
    assert rc == 0
    assert out.exists()


def test_plot_trace_bad_reference_is_usage_error(trace_csv, tmp_path):
    with pytest.raises(SystemExit) as err:
        main_trace([str(trace_csv), "--ref", "nope", "--out", str(tmp_path / "f.png")])
    assert err.value.code == 2


def test_plot_trace_missing_column_exits_2_naming_file(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    rc = main_trace([str(bad), "--out", str(tmp_path / "f.png")])
    assert rc == 2
    err = capsys.readouterr().err
    assert str(bad) in err
    assert "missing required column" in err


def test_plot_trace_nonexistent_file_exits_2(tmp_path, capsys):
    rc = main_trace([str(tmp_path / "gone.csv"), "--out", str(tmp_path / "f.png")])
    assert rc == 2
    assert "gone.csv" in capsys.readouterr().err


def test_plot_trace_label_count_mismatch(trace_csv, tmp_path):
    with pytest.raises(SystemExit) as err:
        main_trace(
            [
                str(trace_csv),
                "--label", "one", "--label", "two",
                "--out", str(tmp_path / "f.png"),
            ]
        )
    assert err.value.code == 2


def test_plot_trace_multiple_csvs_with_labels(tmp_path):
    a = write_trace_csv(tmp_path / "a.csv", [(0, 0.1, -1.0, 0.1)])
    b = write_trace_csv(tmp_path / "b.csv", [(0, 0.2, -2.0, 0.1)])
    out = tmp_path / "both.png"
    rc = main_trace(
        [str(a), str(b), "--label", "first", "--label", "second",
         "--out", str(out), "--log-time", "--title", "pair"]
    )
    assert rc == 0
    assert out.exists()


# ---------------------------------------------------------------------------
# plot-orders
# ---------------------------------------------------------------------------


def test_plot_orders_writes_figure(orders_csv, tmp_path, capsys):
    out = tmp_path / "orders.png"
    rc = main_orders([str(orders_csv), "--out", str(out)])
    assert rc == 0
    assert out.exists() and out.stat().st_size > 0
    assert str(out) in capsys.readouterr().out


def test_plot_orders_site_and_value_flags(orders_csv, tmp_path):
    out = tmp_path / "site0.png"
    rc = main_orders(
        [str(orders_csv), "--site", "0", "--value", "l1", "--linear",
         "--out", str(out)]
    )
    assert rc == 0
    assert out.exists()


def test_plot_orders_empty_table_exits_2(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("site,order,max_abs,l1\n")
    rc = main_orders([str(empty), "--out", str(tmp_path / "f.png")])
    assert rc == 2
    err = capsys.readouterr().err
    assert str(empty) in err and "no data rows" in err


def test_plot_orders_unknown_site_exits_2(orders_csv, tmp_path, capsys):
    rc = main_orders([str(orders_csv), "--site", "7", "--out", str(tmp_path / "f.png")])
    assert rc == 2
    assert "no rows for site '7'" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# plot-disorder
# ---------------------------------------------------------------------------


def test_plot_disorder_writes_figure(summary_csv, tmp_path, capsys):
    out = tmp_path / "disorder.png"
    rc = main_disorder([str(summary_csv), "--out", str(out)])
    assert rc == 0
    assert out.exists() and out.stat().st_size > 0
    assert str(out) in capsys.readouterr().out


def test_plot_disorder_two_files(summary_csv, tmp_path):
    other = write_summary_csv(tmp_path / "half.csv", [(0.5, -19.0, 0.3, 5, 0)])
    out = tmp_path / "merged.png"
    rc = main_disorder([str(summary_csv), str(other), "--out", str(out)])
    assert rc == 0
    assert out.exists()


def test_plot_disorder_empty_exits_2(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("g,mean_energy,stderr,n_ok,n_failed\n")
    rc = main_disorder([str(empty), "--out", str(tmp_path / "f.png")])
    assert rc == 2
    assert str(empty) in capsys.readouterr().err


# ---------------------------------------------------------------------------
# Console-script wiring
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("tool", ["plot-trace", "plot-orders", "plot-disorder"])
def test_console_scripts_installed(tool):
    exe = shutil.which(tool)
    assert exe is not None, f"console script {tool} not on PATH"
    proc = subprocess.run([exe, "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "--out" in proc.stdout
