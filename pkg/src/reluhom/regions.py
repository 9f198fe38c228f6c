"""Per-pattern polyhedra: inequality assembly, facet pruning, affine maps.

Every activation pattern induces a system A x <= c whose rows stack
layer-major; pruning it to the essential subsystem identifies the active
bits, and flipping an active bit walks to the facet-neighbor.
"""

import json
from dataclasses import dataclass

import numpy as np

from . import lp
from .errors import (
    BoundaryPointError,
    DegenerateSystemError,
    DimensionMismatch,
    InfeasibleSystemError,
)
from .network import BitVector, TAU_BIT, bit_vector, on_boundary

_DUP_TOL = 1e-9


@dataclass(frozen=True)
class Region:
    """A full-dimensional linear region and its pruned description."""

    bits: BitVector
    A: np.ndarray
    c: np.ndarray
    A_essential: np.ndarray
    c_essential: np.ndarray
    active_bits: tuple
    affine: tuple          # (M, v) with network output = M x + v on the region
    interior: np.ndarray   # Chebyshev-style strict interior witness

    def to_json(self):
        M, v = self.affine
        return json.dumps(
            {
                "bits": self.bits.to01(),
                "essential_rows": [
                    {"a": a.tolist(), "c": float(ci)}
                    for a, ci in zip(self.A_essential, self.c_essential)
                ],
                "active_bits": list(self.active_bits),
                "affine": {"matrix": M.tolist(), "offset": v.tolist()},
                "interior_point": self.interior.tolist(),
            }
        )


def _hat_maps(net, bits):
    """Composed affine maps (What_j, bhat_j) for every hidden layer."""
    offsets = net.bit_offsets()
    bit_arr = bits.to_array().astype(np.float64)
    hats = []
    w_hat = net.weights[0]
    b_hat = net.biases[0]
    hats.append((w_hat, b_hat))
    for j in range(1, net.n_hidden_layers):
        s_prev = bit_arr[offsets[j - 1]: offsets[j]]
        w_hat = net.weights[j] @ (s_prev[:, None] * w_hat)
        b_hat = net.weights[j] @ (s_prev * b_hat) + net.biases[j]
        hats.append((w_hat, b_hat))
    return hats


def assemble(net, bits):
    """Inequality system A x <= c of an activation pattern (rows layer-major)."""
    if len(bits) != net.h:
        raise DimensionMismatch(f"bit vector length {len(bits)} != h = {net.h}")
    offsets = net.bit_offsets()
    bit_arr = bits.to_array().astype(np.float64)
    A_blocks = []
    c_blocks = []
    for j, (w_hat, b_hat) in enumerate(_hat_maps(net, bits)):
        sign = 1.0 - 2.0 * bit_arr[offsets[j]: offsets[j + 1]]  # bit 1 -> -1
        A_blocks.append(sign[:, None] * w_hat)
        c_blocks.append(sign * (-b_hat))
    return np.vstack(A_blocks), np.concatenate(c_blocks)


def affine_map(net, bits):
    """The affine map (M, v) the network applies on this pattern's region."""
    if len(bits) != net.h:
        raise DimensionMismatch(f"bit vector length {len(bits)} != h = {net.h}")
    offsets = net.bit_offsets()
    bit_arr = bits.to_array().astype(np.float64)
    w_hat, b_hat = _hat_maps(net, bits)[-1]
    s_last = bit_arr[offsets[-2]: offsets[-1]]
    w_out = net.weights[-1]
    M = w_out @ (s_last[:, None] * w_hat)
    v = w_out @ (s_last * b_hat) + net.biases[-1]
    return M, v


def _duplicate_rows(A, c):
    """Indices of rows repeating an earlier hyperplane (same row up to scale)."""
    norms = np.linalg.norm(A, axis=1)
    dup = np.zeros(A.shape[0], dtype=bool)
    scale = np.where(norms > 0, norms, 1.0)
    normed = np.hstack([A / scale[:, None], (c / scale)[:, None]])
    for i in range(A.shape[0]):
        if norms[i] == 0 or dup[i]:
            continue
        later = np.nonzero(
            (norms > 0)
            & (np.arange(A.shape[0]) > i)
            & (np.abs(normed - normed[i]).max(axis=1) <= _DUP_TOL)
        )[0]
        dup[later] = True
    return dup


def essentialize(A, c, tau_lp=lp.TAU_LP, tau_dim=lp.TAU_DIM):
    """Minimal subsystem (A', c') plus the surviving row indices.

    Requires a feasible, full-dimensional system; identical hyperplanes keep
    the lowest-index copy, then rows are tested for redundancy in ascending
    order against the current survivor set.
    """
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    c = np.asarray(c, dtype=np.float64)
    if A.shape[0] != c.size:
        raise DimensionMismatch(f"rows {A.shape[0]} != rhs length {c.size}")
    if not lp.is_feasible(A, c, tau_lp):
        raise InfeasibleSystemError("system has no solution")
    if lp.chebyshev_radius(A, c) <= tau_dim:
        raise DegenerateSystemError("region is not full-dimensional")

    norms = np.linalg.norm(A, axis=1)
    keep = [int(i) for i in np.nonzero((norms > 0) & ~_duplicate_rows(A, c))[0]]
    pos = 0
    while pos < len(keep):
        if lp.is_redundant(A[keep], c[keep], pos, tau_lp):
            del keep[pos]
        else:
            pos += 1
    keep = np.array(keep, dtype=np.int64)
    return A[keep], c[keep], keep


def region_of(net, x, tau_bit=TAU_BIT, tau_lp=lp.TAU_LP, tau_dim=lp.TAU_DIM):
    """The region containing x, with pruned system, actives, and affine map."""
    if on_boundary(net, x, tau_bit):
        raise BoundaryPointError(
            "point has a pre-activation within tolerance of zero"
        )
    bits = bit_vector(net, x, tau_bit)
    return region_from_bits(net, bits, tau_lp=tau_lp, tau_dim=tau_dim)


def region_from_bits(net, bits, extra_A=None, extra_c=None,
                     tau_lp=lp.TAU_LP, tau_dim=lp.TAU_DIM):
    """Build a Region for a pattern, optionally intersected with extra rows.

    Extra rows (e.g. box bounds) take indices h, h+1, ... in active_bits.
    """
    A, c = assemble(net, bits)
    if extra_A is not None:
        A = np.vstack([A, extra_A])
        c = np.concatenate([c, extra_c])
    A_ess, c_ess, active = essentialize(A, c, tau_lp, tau_dim)
    center, _ = lp.chebyshev_center(A, c, r_cap=1.0)
    return Region(
        bits=bits,
        A=A,
        c=c,
        A_essential=A_ess,
        c_essential=c_ess,
        active_bits=tuple(int(i) for i in active),
        affine=affine_map(net, bits),
        interior=center,
    )


def neighbors(region, h=None):
    """Bit vectors of the facet-neighbors: one active-bit flip each.

    Active indices >= h (box rows, when present) are not flippable and are
    skipped; pass h to make the cutoff explicit, default = bit count.
    """
    if h is None:
        h = len(region.bits)
    return [region.bits.flip(k) for k in region.active_bits if k < h]


def facet_points(A, c, k, count, rng, tau_dim=lp.TAU_DIM):
    """Sample `count` points from the relative interior of facet k.

    The facet is {x : a_k x = c_k} intersected with the remaining rows;
    points are drawn inside the facet's inscribed ball and along random
    chords through its center.
    """
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    c = np.asarray(c, dtype=np.float64)
    a = A[k]
    rest = np.delete(np.arange(A.shape[0]), k)
    x0 = a * (c[k] / (a @ a))
    # orthonormal basis of the hyperplane through x0
    _, _, vh = np.linalg.svd(a[None, :])
    basis = vh[1:].T
    if basis.shape[1] == 0:
        # one-dimensional input: the facet is the single point x0, which
        # must satisfy every other row (strictly, unless the row is the
        # same hyperplane) to be a genuine shared wall
        slack = c[rest] - A[rest] @ x0
        parallel = np.abs(
            np.abs(A[rest] @ a) - np.linalg.norm(A[rest], axis=1) * np.linalg.norm(a)
        ) <= 1e-12
        if np.any(slack < np.where(parallel, -tau_dim, tau_dim)):
            raise DegenerateSystemError("facet is lower-dimensional")
        return [x0 for _ in range(count)]
    A_red = A[rest] @ basis
    c_red = c[rest] - A[rest] @ x0
    z0, r = lp.chebyshev_center(A_red, c_red, r_cap=1.0)
    if r <= tau_dim:
        raise DegenerateSystemError("facet is lower-dimensional")
    pts = []
    for _ in range(count):
        d = rng.standard_normal(basis.shape[1])
        d /= np.linalg.norm(d)
        t = rng.uniform(0.0, 0.9 * min(r, 1.0))
        pts.append(x0 + basis @ (z0 + t * d))
    return pts
