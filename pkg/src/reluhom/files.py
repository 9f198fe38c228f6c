"""Small file helpers shared by the CLI: point sets and bit-string files."""

import json

import numpy as np

from .errors import FormatError
from .network import BitVector


def read_points(path):
    """JSON {"points": [[...], ...]} -> list of float vectors."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
        pts = [np.asarray(p, dtype=np.float64) for p in doc["points"]]
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"cannot read points file {path}: {exc}") from exc
    if pts and any(p.shape != pts[0].shape for p in pts):
        raise FormatError(f"points in {path} have mixed lengths")
    return pts


def write_points(points, path):
    with open(path, "w") as fh:
        json.dump({"points": [np.asarray(p).tolist() for p in points]}, fh)


def read_bits(path):
    """One 0/1 string per line -> list of BitVector."""
    vectors = []
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if line:
                    try:
                        vectors.append(BitVector.from01(line))
                    except FormatError as exc:
                        raise FormatError(f"{path}:{lineno}: {exc}") from exc
    except OSError as exc:
        raise FormatError(f"cannot read bits file {path}: {exc}") from exc
    return vectors


def write_bits(vectors, path):
    with open(path, "w") as fh:
        for v in vectors:
            fh.write(v.to01())
            fh.write("\n")
