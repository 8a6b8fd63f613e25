import csv
import io
from fractions import Fraction

import pytest

from ricci_lab import emit
from ricci_lab.bounds import BoundReport, ReportOptions, builtin, report
from ricci_lab.momentum import equality_profile, ricci_lower_bound

F = Fraction
FAST = ReportOptions(deltas=(1e-2,), grid_size=1024, coarse_steps=32)


def test_render():
    assert emit.render(F(6, 7)) == "6/7 (≈ 0.857142857)"
    assert emit.render(F(1)) == "1 (≈ 1.000000000)"
    assert emit.render(0.25) == "≈ 0.250000000"
    assert emit.exact(F(1, 10**7)) == ""


def test_table_golden_rows():
    text = emit.table(report(builtin("m2"), FAST))
    lines = text.splitlines()
    assert any(l.startswith("vf-bound  upper  21/25 (≈ 0.840000000)") for l in lines)
    assert any(l.startswith("alpha     lower  1/2 (≈ 0.500000000)") for l in lines)
    assert "bracket: [1/2, 21/25]" in lines
    assert "consistent: yes" in lines


def test_table_m1_vf_row():
    rep = report(builtin("m1"), ReportOptions(deltas=(1e-2,), grid_size=1024, producers=("vf-bound",)))
    assert emit.table(rep).splitlines()[2].startswith("vf-bound  upper  6/7")


def test_limit_slope_csv_hits_zero(m1):
    rows = list(csv.DictReader(io.StringIO(emit.curve_csv(emit.limit_slope_curve(m1, (-1, 0))))))
    hit = [r for r in rows if r["s"] == "6/7"]
    assert len(hit) == 1 and hit[0]["value"] == "0"
    assert rows[0]["value"] == "4"


def test_ricci_csv_columns():
    rep = ricci_lower_bound(equality_profile(F(6, 7)), 128)
    rows = list(csv.reader(io.StringIO(emit.ricci_csv(rep))))
    assert rows[0] == ["tau", "A", "minus_C_prime"]
    assert len(rows) == 1 + len(rep.grid)


def test_outputs_are_byte_identical(m1, tmp_path):
    rep = report(builtin("m2"), FAST)
    for fmt in ("csv", "svg", "table"):
        a, b = tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"
        emit.emit(rep, fmt, a)
        emit.emit(report(builtin("m2"), FAST), fmt, b)
        assert a.read_bytes() == b.read_bytes()
    curve = emit.limit_slope_curve(m1, (-1, 0))
    assert emit.curve_svg(curve) == emit.curve_svg(emit.limit_slope_curve(m1, (-1, 0)))
    assert emit.curve_svg(curve).startswith("<svg")


def test_empty_report():
    with pytest.raises(emit.EmitError, match="nothing to emit"):
        emit.emit(BoundReport("x"), "table")


def test_bad_format():
    with pytest.raises(emit.EmitError):
        emit.emit(report(builtin("m2"), FAST), "pdf")
    with pytest.raises(emit.EmitError):
        emit.emit(42, "csv")
