from fractions import Fraction

import numpy as np
import pytest

from fareyprod import __version__
from fareyprod.output import (
    config_comment,
    format_ratio,
    format_value,
    get_file_extension,
    render_rows,
    write_rows,
)


def test_format_value():
    assert format_value(np.int64(-1529)) == "-1529"
    assert format_value(2**70) == str(2**70)
    assert format_value(Fraction(-4, 2)) == "-2"
    assert format_value(Fraction(1, 3)) == "0.333333333333"
    assert format_value(-0.0) == "0"
    assert format_value(float("nan")) == "nan"
    assert format_value(np.bool_(True)) == "1"
    assert format_value("P1") == "P1"


def test_format_ratio():
    assert format_ratio(1529 / 1023) == "1.4946"
    assert format_ratio(-0.0) == "0.0000"


def test_file_extensions():
    assert get_file_extension("csv") == ".csv"
    assert get_file_extension("tsv") == ".tsv"
    assert get_file_extension("json") == ".txt"


def test_render_rows():
    text = render_rows(["n", "value"], [[1, 0], [2, 1]], comment="p=2", trailer=["mismatches: 0"])
    lines = text.splitlines()
    assert lines[0] == f"# fareyprod {__version__} p=2"
    assert lines[1:4] == ["n,value", "1,0", "2,1"]
    assert lines[-1] == "# mismatches: 0"


def test_render_tsv_and_bad_format():
    assert render_rows(["a", "b"], [[1, 2]], fmt="tsv").splitlines()[1:] == ["a\tb", "1\t2"]
    with pytest.raises(ValueError):
        render_rows(["a"], [], fmt="xml")


def test_write_rows_adds_extension(tmp_path):
    path = write_rows(["n"], [[1]], str(tmp_path / "out"), fmt="tsv")
    assert path.name == "out.tsv"
    assert path.read_text().splitlines()[1:] == ["n", "1"]
    kept = write_rows(["n"], [[1]], str(tmp_path / "series.dat"))
    assert kept.name == "series.dat"


def test_config_comment():
    fields = {
        "prime": 2,
        "n_max": 10,
        "methods": ["inversion", "oracle"],
        "base": None,
        "format": "csv",
    }
    assert config_comment(fields, skip=["format"]) == "methods=inversion,oracle n_max=10 prime=2"
