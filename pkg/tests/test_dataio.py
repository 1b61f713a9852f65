import json

import numpy as np
import pytest

from proj_inference.dataio import (RECORD_COLUMNS, ResultRecord, emit_results, format_params, load_binary_matrix,
                                   load_pointsets, records_frame, write_binary_matrix, write_pointsets)
from proj_inference.errors import DataError
from proj_inference.measures import Sample
from proj_inference.tomo import PointSet


@pytest.fixture
def write_text(tmp_path):
    def _write(text, name='data.csv'):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


# binary matrices
def test_load_binary_matrix(write_text):
    sample = load_binary_matrix(write_text("0,1,1\n1,0,0\n"))
    np.testing.assert_array_equal(sample.rows, [[0, 1, 1], [1, 0, 0]])
    assert not sample.has_labels


def test_load_with_header_and_labels(write_text):
    sample = load_binary_matrix(write_text("a,b,label\n0,1,1\n1, 1,0\n"), has_header=True, has_labels=True)
    np.testing.assert_array_equal(sample.rows, [[0, 1], [1, 1]])
    np.testing.assert_array_equal(sample.labels, [1, 0])


@pytest.mark.parametrize("text, has_header, message", [
    ("0,1,0\n1,2,0\n", False, "line 2, column 2"),
    ("x,y,z\n0,1,0\n1,0,a\n", True, "line 3, column 3"),
    ("0,0.5\n", False, "line 1, column 2"),
])
def test_load_non_binary_cell(write_text, text, has_header, message):
    with pytest.raises(DataError, match=message):
        load_binary_matrix(write_text(text), has_header=has_header)


def test_load_bad_label(write_text):
    with pytest.raises(DataError, match="line 2, column 3: expected a nonnegative integer label"):
        load_binary_matrix(write_text("0,1,1\n1,0,-1\n"), has_labels=True)


def test_load_empty_file(write_text):
    with pytest.raises(DataError, match="empty"):
        load_binary_matrix(write_text(""))


def test_load_ragged_rows(write_text):
    with pytest.raises(DataError, match="malformed"):
        load_binary_matrix(write_text("0,1\n0,1,1\n"))


def test_load_labels_without_features(write_text):
    with pytest.raises(DataError, match="no feature columns"):
        load_binary_matrix(write_text("1\n0\n"), has_labels=True)


def test_data_error_is_value_error():
    assert issubclass(DataError, ValueError)


@pytest.mark.parametrize("header", [True, False])
def test_write_then_load(tmp_path, header):
    rng = np.random.default_rng(0)
    sample = Sample((rng.random((20, 6)) < 0.5).astype(int), rng.integers(0, 2, 20))
    path = str(tmp_path / "m.csv")
    write_binary_matrix(sample, path, header=header)
    loaded = load_binary_matrix(path, has_header=header, has_labels=True)
    np.testing.assert_array_equal(loaded.rows, sample.rows)
    np.testing.assert_array_equal(loaded.labels, sample.labels)


def test_write_non_binary_raises(tmp_path):
    with pytest.raises(DataError, match="binary"):
        write_binary_matrix(Sample([[0.0, 0.5]]), str(tmp_path / "m.csv"))


# point lists
def test_pointsets_round_trip(tmp_path):
    images = [PointSet([[0.05, -1.25], [2.0, 0.1]]), PointSet([[0.5, 0.5]]), PointSet([[1.0, 1.0], [0.0, 0.0]])]
    path = str(tmp_path / "p.csv")
    write_pointsets(images, [1, 0, 1], path)
    loaded, labels = load_pointsets(path)
    np.testing.assert_array_equal(labels, [1, 0, 1])
    assert len(loaded) == 3
    for F, G in zip(images, loaded):
        np.testing.assert_allclose(G.points, F.points)


def test_pointsets_grouped_by_first_appearance(write_text):
    images, labels = load_pointsets(write_text("image,label,x,y\nb,1,0,0\na,0,1,1\nb,1,0.5,0\n"), grid_spacing=0.1)
    assert [len(F) for F in images] == [2, 1]
    np.testing.assert_array_equal(labels, [1, 0])
    assert images[0].grid_spacing == 0.1


@pytest.mark.parametrize("text, message", [
    ("image,x,z\n0,0,1\n", "missing columns"),
    ("image,label,x,y\n0,0,0,1\n0,0,1,abc\n", "line 3, column y"),
    ("image,label,x,y\n0,0,0,1\n1,-1,1,1\n", "line 3, column label"),
    ("image,label,x,y\n0,0.5,0,1\n", "line 2, column label"),
    ("image,label,x,y\n0,0,0,1\n0,1,1,1\n", "more than one label"),
])
def test_pointsets_invalid(write_text, text, message):
    with pytest.raises(DataError, match=message):
        load_pointsets(write_text(text))


def test_write_pointsets_needs_one_label_per_image(tmp_path):
    with pytest.raises(ValueError, match="'labels'"):
        write_pointsets([PointSet([[0.0, 0.0]])], [0, 1], str(tmp_path / "p.csv"))
    with pytest.raises(ValueError, match="'labels'"):
        write_pointsets([], [], str(tmp_path / "p.csv"))


# result records
def make_records():
    return [ResultRecord('classify', 'k=10', 'error', 0.1234567890123, 1, 99),
            ResultRecord('classify', 'k=10', 'error', 0.2, 0, 42),
            ResultRecord('bench1', 'corr=0.5', 'error_mean', 0.1, -1, 7)]


def test_format_params_sorted():
    assert format_params(b=0.5, a=2, c='tv') == "a=2;b=0.5;c=tv"
    assert format_params(x=1 / 3) == "x=0.3333333333"


def test_records_frame_sorted():
    df = records_frame(make_records())
    assert list(df.columns) == RECORD_COLUMNS
    assert list(df['experiment']) == ['bench1', 'classify', 'classify']
    assert list(df['replicate']) == [-1, 0, 1]


def test_emit_csv_is_byte_stable(tmp_path):
    a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    emit_results(make_records(), a)
    emit_results(list(reversed(make_records())), b)
    with open(a, 'rb') as fa, open(b, 'rb') as fb:
        content = fa.read()
        assert content == fb.read()
    lines = content.decode().splitlines()
    assert lines[0] == ','.join(RECORD_COLUMNS)
    assert lines[-1] == "classify,k=10,error,0.123456789,1,99"
    assert b'\r' not in content


def test_emit_json_lines(capsys):
    emit_results(make_records(), fmt='json-lines')
    lines = capsys.readouterr().out.strip().split('\n')
    assert len(lines) == 3
    rows = [json.loads(line) for line in lines]
    assert rows[0]['experiment'] == 'bench1'
    assert rows[2]['value'] == pytest.approx(0.123456789)


def test_emit_invalid_format():
    with pytest.raises(ValueError, match="'fmt'"):
        emit_results(make_records(), fmt='xml')
