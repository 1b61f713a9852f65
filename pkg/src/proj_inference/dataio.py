# -*- coding: utf-8 -*-
"""
binary matrix and point list I/O, tidy result records
"""
import io
import logging
import sys
from dataclasses import dataclass, asdict

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike

from proj_inference.errors import DataError
from proj_inference.measures import Sample
from proj_inference.tomo import GRID_SPACING, PointSet


logger = logging.getLogger(__name__)

FORMATS = ('csv', 'json-lines')
FLOAT_FORMAT = '%.10g'
RECORD_COLUMNS = ['experiment', 'params', 'metric', 'value', 'replicate', 'seed']
POINTSET_COLUMNS = ['image', 'label', 'x', 'y']


@dataclass(frozen=True)
class ResultRecord:
    """
    One metric value of one replicate. Aggregates over replicates use ``replicate = -1``.
    """
    experiment: str
    params: str
    metric: str
    value: float
    replicate: int
    seed: int


def format_params(**params) -> str:
    """Stable 'key=value;...' rendering of a parameter tuple (keys sorted)."""
    parts = []
    for key in sorted(params):
        value = params[key]
        if isinstance(value, float):
            value = FLOAT_FORMAT % value
        parts.append(f"{key}={value}")
    return ';'.join(parts)


def _read_table(path:str, has_header:bool, sep:str) -> pd.DataFrame:
    try:
        return pd.read_csv(path, header=0 if has_header else None, sep=sep, dtype=str, skipinitialspace=True, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise DataError(f"{path}: file is empty")
    except pd.errors.ParserError as e:
        raise DataError(f"{path}: malformed delimited text ({e})")


def load_binary_matrix(path:str, has_header:bool = False, has_labels:bool = False, sep:str = ',') -> Sample:
    """
    Read a delimiter-separated matrix of 0/1 entries, one observation per row.

    Args:
        path (str): file path
        has_header (bool, optional): the first line holds column names. Defaults to False.
        has_labels (bool, optional): the last column holds integer class labels. Defaults to False.
        sep (str, optional): delimiter. Defaults to ','.

    Returns:
        Sample: rows in {0,1}^d, labelled when ``has_labels``

    Raises:
        DataError: empty file, ragged rows, a non-binary cell or a bad label; messages give the 1-based line and
            column of the first offending cell
    """
    df = _read_table(path, has_header, sep)
    if df.shape[0] == 0 or df.shape[1] == 0:
        raise DataError(f"{path}: no data rows")

    n_features = df.shape[1] - 1 if has_labels else df.shape[1]
    if n_features < 1:
        raise DataError(f"{path}: no feature columns")

    first_line = 2 if has_header else 1
    cells = df.apply(lambda col: pd.to_numeric(col.str.strip(), errors='coerce'))
    values = cells.to_numpy(dtype=float)

    features = values[:, :n_features]
    bad = np.argwhere(~np.isin(features, (0.0, 1.0)))
    if bad.shape[0] > 0:
        i, j = bad[0]
        raise DataError(f"{path}: line {i + first_line}, column {j + 1}: expected 0 or 1, got {df.iat[i, j]!r}")

    labels = None
    if has_labels:
        raw = values[:, -1]
        bad = np.flatnonzero(~np.isfinite(raw) | (raw < 0) | (np.mod(np.where(np.isfinite(raw), raw, 0), 1) != 0))
        if bad.shape[0] > 0:
            i = bad[0]
            raise DataError(f"{path}: line {i + first_line}, column {df.shape[1]}: expected a nonnegative integer label, got {df.iat[i, df.shape[1] - 1]!r}")
        labels = raw.astype(np.int64)

    logger.info("loaded %d x %d binary matrix from %s", features.shape[0], n_features, path)
    return Sample(features.astype(np.int64), labels)


def write_binary_matrix(sample:Sample, path:str, header:bool = False, sep:str = ','):
    """
    Write a sample as a 0/1 matrix, the label (if any) as the last column. Reading it back with the same
    ``header`` / ``has_labels`` settings gives the same sample.
    """
    rows = np.asarray(sample.rows)
    if not np.all(np.isin(rows, (0.0, 1.0))):
        raise DataError("only binary samples can be written as a binary matrix")
    df = pd.DataFrame(rows.astype(np.int64), columns=[f"x{j + 1}" for j in range(sample.dim)])
    if sample.has_labels:
        df['label'] = sample.labels
    df.to_csv(path, index=False, header=header, sep=sep)


def load_pointsets(path:str, grid_spacing:float = GRID_SPACING):
    """
    Read labelled planar point lists, one row per point with columns ``image``, ``label``, ``x`` and ``y``.

    Rows sharing an ``image`` id form one image; images come back in order of first appearance.

    Returns:
        tuple: ``(images, labels)``, a list of PointSets and an integer array

    Raises:
        DataError: missing columns, a non-numeric coordinate, a label that is not a nonnegative integer, or two
            labels inside one image
    """
    df = _read_table(path, True, ',')
    missing = [c for c in POINTSET_COLUMNS if c not in df.columns]
    if missing:
        raise DataError(f"{path}: missing columns {missing}")

    xy = df[['x', 'y']].apply(lambda col: pd.to_numeric(col, errors='coerce')).to_numpy(dtype=float)
    bad = np.argwhere(~np.isfinite(xy))
    if bad.shape[0] > 0:
        i, j = bad[0]
        raise DataError(f"{path}: line {i + 2}, column {'xy'[j]}: expected a finite number")

    labels = pd.to_numeric(df['label'], errors='coerce').to_numpy(dtype=float)
    bad = np.flatnonzero(~np.isfinite(labels) | (labels < 0) | (np.mod(labels, 1) != 0))
    if bad.size > 0:
        raise DataError(f"{path}: line {bad[0] + 2}, column label: expected a nonnegative integer label")

    codes, ids = pd.factorize(df['image'])
    images, image_labels = [], []
    for g, image_id in enumerate(ids):
        rows = np.flatnonzero(codes == g)
        if np.any(labels[rows] != labels[rows[0]]):
            raise DataError(f"{path}: image {image_id!r} has more than one label")
        images.append(PointSet(xy[rows], grid_spacing=grid_spacing))
        image_labels.append(int(labels[rows[0]]))
    logger.debug("load_pointsets: %d images from %s", len(images), path)
    return images, np.asarray(image_labels, dtype=np.int64)


def write_pointsets(images:list, labels:ArrayLike, path:str):
    """Write labelled images as point lists with columns ``image``, ``label``, ``x``, ``y``; images are numbered from 0."""
    labels = np.asarray(labels).reshape(-1)
    if len(images) == 0 or labels.shape[0] != len(images):
        raise ValueError(f"Invalid 'labels': \n expected one label per image and at least one image")
    frames = [pd.DataFrame({'image': i, 'label': int(label), 'x': F.points[:, 0], 'y': F.points[:, 1]}, columns=POINTSET_COLUMNS)
              for i, (F, label) in enumerate(zip(images, labels))]
    pd.concat(frames, ignore_index=True).to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')


def records_frame(records:list) -> pd.DataFrame:
    """Records as a DataFrame sorted by (experiment, params, replicate, metric)."""
    df = pd.DataFrame([asdict(r) for r in records], columns=RECORD_COLUMNS)
    df = df.sort_values(['experiment', 'params', 'replicate', 'metric'], kind='mergesort').reset_index(drop=True)
    df['value'] = df['value'].astype(float)
    return df


def emit_results(records:list, path:str = None, fmt:str = 'csv'):
    """
    Write records as CSV or JSON lines with values rounded to 10 significant digits. Identical records give
    byte-identical output.

    Args:
        records (list): ResultRecords
        path (str, optional): output file; standard output when None
        fmt (str, optional): 'csv' or 'json-lines'. Defaults to 'csv'.
    """
    if fmt not in FORMATS:
        raise ValueError(f"Invalid 'fmt': \n must be one of {list(FORMATS)}, got {fmt!r}")

    df = records_frame(records)
    buffer = io.StringIO()
    if fmt == 'csv':
        df.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    else:
        df['value'] = df['value'].map(lambda v: float(FLOAT_FORMAT % v))
        df.to_json(buffer, orient='records', lines=True, double_precision=15)
        if not buffer.getvalue().endswith('\n'):
            buffer.write('\n')

    if path is None:
        sys.stdout.write(buffer.getvalue())
    else:
        with open(path, 'w', newline='') as f:
            f.write(buffer.getvalue())
        logger.info("wrote %d records to %s", len(records), path)
