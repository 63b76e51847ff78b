"""CSV and JSON writers. Floats are written with 17 significant digits."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .config import as_jsonable

FRAME_HEADER = "t,x,u,R,S,ut,ux"
CURVE_HEADER = "tau,X,value"


def _write_rows(path, header, columns):
    arr = np.column_stack(columns)
    with open(path, "w", newline="") as fh:
        fh.write(header + "\n")
        np.savetxt(fh, arr, fmt="%.17g", delimiter=",")


def write_frame(path, state, grid, ws):
    n = grid.n
    _write_rows(path, FRAME_HEADER,
                [np.full(n, state.t), grid.x, state.u, state.R, state.S, state.ut, state.ux(ws)])


def write_frames(outdir, traj, which="all"):
    """Write one ``frame_NNNNN.csv`` per stored frame into ``outdir/frames``.

    Stale ``frame_*.csv`` files from an earlier run are removed first.
    """
    if which == "none":
        return []
    fdir = Path(outdir) / "frames"
    fdir.mkdir(parents=True, exist_ok=True)
    for old in fdir.glob("frame_*.csv"):
        old.unlink()
    idx = range(len(traj.frames)) if which == "all" else [len(traj.frames) - 1]
    paths = []
    for i in idx:
        p = fdir / f"frame_{i:05d}.csv"
        write_frame(p, traj.frames[i], traj.grid, traj.ws)
        paths.append(p)
    return paths


def write_curve(path, curve):
    _write_rows(path, CURVE_HEADER, [curve.tau, curve.X, curve.value])


def read_frame(path):
    """Load a frame CSV back into a dict of columns."""
    arr = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return dict(zip(FRAME_HEADER.split(","), arr.T))


def write_json(path, obj):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(as_jsonable(obj), fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")
