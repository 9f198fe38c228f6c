"""Hamming-distance matrices over activation patterns.

Distances are stored as doubles so Hamming, Euclidean, and min/max-combined
matrices share one type.  Hollow symmetry is enforced; the triangle
inequality deliberately is not (min-combined matrices can violate it and
are still valid persistence input).
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, FormatError
from .network import BitVector


@dataclass(frozen=True)
class DistanceMatrix:
    """Hollow symmetric non-negative matrix with row labels."""

    data: np.ndarray
    labels: tuple = None

    def __post_init__(self):
        d = np.asarray(self.data, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise DimensionMismatch(f"not square: {d.shape}")
        if np.any(np.diagonal(d) != 0.0):
            raise FormatError("matrix is not hollow")
        if not np.array_equal(d, d.T):
            raise FormatError("matrix is not symmetric")
        if np.any(d < 0.0):
            raise FormatError("matrix has negative entries")
        d.setflags(write=False)
        object.__setattr__(self, "data", d)
        labels = self.labels
        if labels is None:
            labels = tuple(str(i) for i in range(d.shape[0]))
        else:
            labels = tuple(str(l) for l in labels)
            if len(labels) != d.shape[0]:
                raise DimensionMismatch("label count != matrix size")
        object.__setattr__(self, "labels", labels)

    @property
    def size(self):
        return self.data.shape[0]


def hamming(a, b):
    """Number of differing bits between two equal-length bit vectors."""
    if len(a) != len(b):
        raise DimensionMismatch(f"bit vector lengths differ: {len(a)} vs {len(b)}")
    return int(np.bitwise_count(np.bitwise_xor(a.words, b.words)).sum())


def dedup_bitvectors(vectors):
    """Distinct vectors in first-occurrence order plus an index assignment."""
    lengths = {len(v) for v in vectors}
    if len(lengths) > 1:
        raise DimensionMismatch("mixed bit vector lengths")
    distinct = []
    index = {}
    assignment = []
    for v in vectors:
        k = index.get(v)
        if k is None:
            k = len(distinct)
            index[v] = k
            distinct.append(v)
        assignment.append(k)
    return distinct, assignment


def _pack_rows(vectors):
    nwords = vectors[0].words.size
    out = np.empty((len(vectors), nwords), dtype=np.uint64)
    for i, v in enumerate(vectors):
        out[i] = v.words
    return out


def hamming_matrix(vectors, deduplicate=False, labels=None):
    """Pairwise Hamming distances, optionally over distinct vectors only."""
    if not vectors:
        raise FormatError("no bit vectors given")
    lengths = {len(v) for v in vectors}
    if len(lengths) > 1:
        raise DimensionMismatch("mixed bit vector lengths")
    if labels is None:
        labels = [str(i) for i in range(len(vectors))]
    if deduplicate:
        distinct, assignment = dedup_bitvectors(vectors)
        first = {}
        for i, k in enumerate(assignment):
            first.setdefault(k, labels[i])
        labels = [first[k] for k in range(len(distinct))]
        vectors = distinct
    d = _kernels.hamming_matrix_packed(_pack_rows(vectors)).astype(np.float64)
    return DistanceMatrix(d, tuple(labels))


def combine(d1, d2, op):
    """Entrywise min or max of two aligned distance matrices."""
    if op not in ("min", "max"):
        raise FormatError(f"op must be 'min' or 'max', got {op!r}")
    if d1.size != d2.size:
        raise DimensionMismatch(f"sizes differ: {d1.size} vs {d2.size}")
    if d1.labels != d2.labels:
        raise DimensionMismatch("matrix labels are not aligned")
    f = np.minimum if op == "min" else np.maximum
    return DistanceMatrix(f(d1.data, d2.data), d1.labels)
