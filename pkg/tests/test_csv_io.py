import numpy as np
import pytest

from crpd.core.exceptions import ConfigError, EmptyFile, FixtureMismatch, NonNumericCell, ParseError
from crpd.models.dataset import Dataset
from crpd.utils.csv_io import format_csv, parse_csv, parse_text, write_csv
from crpd.utils.fixtures import OWEN_SUMMARY, describe_column, load_owen_fixture
from crpd.utils.grids import parse_bounds, parse_grid, parse_recipe


def test_parse_single_column():
    dataset = parse_text("x\n1\n2\n3\n")
    assert dataset.columns == ("x",)
    assert dataset.n == 3
    np.testing.assert_array_equal(dataset.column("x"), [1.0, 2.0, 3.0])


def test_parse_keeps_row_order_and_trailing_blank_lines():
    dataset = parse_text("a,b\n3,-1.5\n1,2e-3\n\n\n")
    np.testing.assert_array_equal(dataset.values, [[3.0, -1.5], [1.0, 0.002]])


def test_blank_line_inside_body():
    with pytest.raises(ParseError) as info:
        parse_text("x\n1\n\n2\n")
    assert info.value.line == 3
    assert info.value.exit_code == 2


@pytest.mark.parametrize("text", ["", "\n\n", "x\n"])
def test_empty_input(text):
    with pytest.raises(EmptyFile):
        parse_text(text)


def test_non_numeric_cell_location():
    with pytest.raises(NonNumericCell) as info:
        parse_text("x,y\n1,2\n3,abc\n")
    assert (info.value.line, info.value.column) == (3, 2)
    assert "line 3, column 2" in info.value.one_line()


def test_non_finite_cell():
    with pytest.raises(NonNumericCell):
        parse_text("x\n1\nnan\n")


@pytest.mark.parametrize(
    "text",
    [
        "x,y\n1,2\n3\n",
        "x,x\n1,2\n",
        "x,\n1,2\n",
    ],
)
def test_malformed_tables(text):
    with pytest.raises(ParseError):
        parse_text(text)


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        parse_csv(tmp_path / "absent.csv")


def test_write_then_read(tmp_path):
    dataset = Dataset.from_columns({"x": [0.1, 1 / 3, -2.5e-7], "z": [1.0, 2.0, 3.0]})
    path = tmp_path / "data.csv"
    write_csv(dataset, path)
    assert path.read_text().splitlines()[0] == "x,z"
    np.testing.assert_array_equal(parse_csv(path).values, dataset.values)
    assert format_csv(parse_csv(path)) == format_csv(dataset)


def test_grid_expansion():
    grid = parse_grid("-2:2:0.05")
    assert len(grid) == 81
    assert grid[0] == -2.0 and grid[-1] == 2.0
    assert 0.0 in grid and 0.05 in grid
    assert parse_grid("-1:1:0.25") == [-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0]
    assert parse_grid("0.5") == [0.5]


@pytest.mark.parametrize("text", ["1:0:0.1", "0:1:0", "0:1:0.3", "a:b:c", "0:1"])
def test_bad_grids(text):
    with pytest.raises(ConfigError):
        parse_grid(text)


def test_bounds_and_recipe():
    assert parse_bounds("-1:1, 0.5:2") == [(-1.0, 1.0), (0.5, 2.0)]
    with pytest.raises(ConfigError):
        parse_bounds("1:1")
    assert parse_recipe("level, square,,cube") == ["level", "square", "cube"]


def test_describe_column():
    summary = describe_column(Dataset.from_columns({"x": [1.0, 2.0, 6.0]}), "x")
    assert summary.n == 3
    assert summary.mean == pytest.approx(3.0)
    assert summary.sd == pytest.approx(np.sqrt(7.0))
    assert (summary.minimum, summary.maximum) == (1.0, 6.0)


def test_fixture_rejects_other_data(tmp_path):
    path = tmp_path / "cows.csv"
    path.write_text("milk_lbs,days\n" + "".join(f"{3000 + 10 * i},{250 + i}\n" for i in range(22)))
    with pytest.raises(FixtureMismatch):
        load_owen_fixture(path)


def test_fixture_needs_columns(tmp_path):
    path = tmp_path / "cows.csv"
    path.write_text("x\n" + "1\n" * OWEN_SUMMARY.n)
    with pytest.raises(FixtureMismatch):
        load_owen_fixture(path)
