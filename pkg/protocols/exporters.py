"""
File output for protocol results, sweeps, Wigner grids and Hamiltonian dumps.

JSON goes through DRF's JSONRenderer; CSV is written with the csv module.
I/O failures surface as OSError carrying the offending path.
"""

import csv
import io
import logging
from pathlib import Path

import numpy as np
from rest_framework.exceptions import ParseError
from rest_framework.parsers import JSONParser
from rest_framework.renderers import JSONRenderer

from hilbert.exceptions import ConfigError

from .serializers import result_from_dict, result_to_dict

logger = logging.getLogger(__name__)

EXPORT_FORMATS = ('json', 'csv')


def render_json(data):
    """Deterministic UTF-8 JSON bytes."""
    return JSONRenderer().render(data, renderer_context={'indent': 2}) + b'\n'


def _write(path, payload):
    path = Path(path)
    try:
        path.write_bytes(payload)
    except OSError as exc:
        raise OSError(exc.errno, f"Cannot write {path}: {exc.strerror}", str(path)) from exc
    logger.info(f"Wrote {len(payload)} bytes to {path}")


def _read(path):
    path = Path(path)
    try:
        return path.read_bytes()
    except OSError as exc:
        raise OSError(exc.errno, f"Cannot read {path}: {exc.strerror}", str(path)) from exc


def metrics_csv(result):
    """
    Metric time series as CSV text.

    Header ``t,<metric>...``; one row per sample, empty cells where a value is
    undefined. Without metrics only the header is written.
    """
    names = list(result.metrics)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(['t'] + names)
    if names:
        for i, t in enumerate(result.times):
            row = [repr(float(t))]
            for name in names:
                value = result.metrics[name][i]
                row.append('' if value is None else repr(float(value)))
            writer.writerow(row)
    return buffer.getvalue()


def export_result(result, fmt, path):
    """
    Write a ProtocolResult.

    Args:
        result: ProtocolResult
        fmt: 'json' (full result with states) or 'csv' (metric series only)
        path: output file
    """
    if fmt not in EXPORT_FORMATS:
        raise ConfigError([f"format: expected one of {', '.join(EXPORT_FORMATS)}, got {fmt!r}"])
    if fmt == 'json':
        _write(path, render_json(result_to_dict(result)))
    else:
        _write(path, metrics_csv(result).encode('utf-8'))


def load_json(path):
    try:
        return JSONParser().parse(io.BytesIO(_read(path)))
    except ParseError as exc:
        raise ConfigError([f"{path}: {exc.detail}"])


def load_result(path):
    """Read a JSON result written by ``export_result``."""
    return result_from_dict(load_json(path))


def export_sweep(rows, path):
    """Write RWA sweep rows as ``omega_over_g,infidelity`` CSV."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(['omega_over_g', 'infidelity'])
    for row in rows:
        writer.writerow([repr(float(row['omega_ratio'])), repr(float(row['infidelity']))])
    _write(path, buffer.getvalue().encode('utf-8'))


def export_wigner(grid, path, meta):
    """
    Write a Wigner grid as a CSV matrix plus a ``.meta.json`` sidecar.

    The first row holds the x axis after a ``p\\x`` corner cell; every
    following row starts with its p value. The sidecar records the grid
    integral and the boundary check, including a warning when it fails.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(['p\\x'] + [repr(float(x)) for x in grid.x_axis])
    for p, row in zip(grid.p_axis, grid.values):
        writer.writerow([repr(float(p))] + [repr(float(value)) for value in row])
    _write(path, buffer.getvalue().encode('utf-8'))
    meta = dict(meta)
    meta.update({
        'integral': grid.integral(),
        'minimum': grid.minimum,
        'boundary_max': grid.boundary_max,
        'boundary_ok': grid.boundary_ok,
        'warning': None if grid.boundary_ok else (
            f"grid too narrow: |W| reaches {grid.boundary_max:.3e} on the boundary"
        ),
    })
    meta_path = Path(f"{path}.meta.json")
    _write(meta_path, render_json(meta))
    return meta_path


def export_hamiltonian(H, path):
    """Write the non-zero entries of an operator as ``row,col,re,im`` CSV."""
    rows, cols = np.nonzero(H.entries)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(['row', 'col', 're', 'im'])
    for i, j in zip(rows, cols):
        value = H.entries[i, j]
        writer.writerow([int(i), int(j), repr(float(value.real)), repr(float(value.imag))])
    _write(path, buffer.getvalue().encode('utf-8'))


def read_text(path):
    try:
        return _read(path).decode('utf-8')
    except UnicodeDecodeError as exc:
        raise ConfigError([f"{path}: not UTF-8 text ({exc.reason})"])
