"""Sample families: anchor-plane circles, torus grids, uniform box points.

Circle points are offset + sin(t) A1 + cos(t) A2 over a half-open parameter
interval, so N samples tile a closed loop with no duplicate endpoint.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch

ORTHO_TOL = 1e-6


@dataclass(frozen=True)
class AnchorFamily:
    """Up to five equal-length anchor vectors with a scale and optional center.

    With require_orthogonal set, pairwise inner products must stay below
    ORTHO_TOL times the norms involved.
    """

    anchors: tuple
    alpha: float = 1.0
    offset_index: int = None
    require_orthogonal: bool = False

    def __post_init__(self):
        anchors = tuple(np.asarray(a, dtype=np.float64).ravel() for a in self.anchors)
        if not anchors:
            raise DimensionMismatch("at least one anchor required")
        size = anchors[0].size
        if any(a.size != size for a in anchors):
            raise DimensionMismatch("anchors must share one flattened length")
        if self.offset_index is not None and not 0 <= self.offset_index < len(anchors):
            raise DimensionMismatch("offset_index out of range")
        if self.require_orthogonal:
            for i in range(len(anchors)):
                for j in range(i + 1, len(anchors)):
                    bound = ORTHO_TOL * np.linalg.norm(anchors[i]) * np.linalg.norm(
                        anchors[j]
                    )
                    if abs(anchors[i] @ anchors[j]) > bound:
                        raise DimensionMismatch(
                            f"anchors {i} and {j} are not orthogonal"
                        )
        object.__setattr__(self, "anchors", anchors)

    @property
    def dim(self):
        return self.anchors[0].size

    def offset(self):
        if self.offset_index is None:
            return np.zeros(self.dim)
        return self.anchors[self.offset_index]


def circle_samples(family, count, theta_range=(0.0, 2.0 * np.pi)):
    """count points offset + sin(t) A1 + cos(t) A2, endpoint excluded."""
    if len(family.anchors) < 2:
        raise DimensionMismatch("circle sampling needs two circle anchors")
    if count < 1:
        raise DimensionMismatch("count must be >= 1")
    t0, t1 = theta_range
    a1, a2 = family.anchors[0], family.anchors[1]
    off = family.offset()
    thetas = t0 + (t1 - t0) * np.arange(count) / count
    return [off + np.sin(t) * a1 + np.cos(t) * a2 for t in thetas]


def torus_samples(family, n1, n2, alpha=None, mode="grid", rng=None):
    """Grid (or seeded-uniform) torus points from four circle anchors.

    Formula: offset + alpha * (sin(t1) A1 + cos(t1) A2 + sin(t2) A3 + cos(t2) A4);
    the offset defaults to the fifth anchor.
    """
    if len(family.anchors) < 5 and family.offset_index is None:
        raise DimensionMismatch("torus sampling needs 4 circle anchors + offset")
    if len(family.anchors) < 4:
        raise DimensionMismatch("torus sampling needs four circle anchors")
    if alpha is None:
        alpha = family.alpha
    a1, a2, a3, a4 = family.anchors[:4]
    off = (
        family.anchors[4]
        if family.offset_index is None
        else family.anchors[family.offset_index]
    )
    if mode == "grid":
        t1 = 2.0 * np.pi * np.arange(n1) / n1
        t2 = 2.0 * np.pi * np.arange(n2) / n2
        params = [(u, v) for u in t1 for v in t2]
    elif mode == "uniform":
        if rng is None:
            rng = np.random.default_rng(0)
        params = [tuple(p) for p in rng.uniform(0.0, 2.0 * np.pi, size=(n1 * n2, 2))]
    else:
        raise DimensionMismatch(f"unknown mode {mode!r}")
    return [
        off + alpha * (np.sin(u) * a1 + np.cos(u) * a2 + np.sin(v) * a3 + np.cos(v) * a4)
        for u, v in params
    ]


def random_orthogonal_anchors(dim, count, seed):
    """count pairwise-orthogonal unit vectors, deterministic per seed.

    Gram-Schmidt on seeded Gaussian draws; redraws on (improbable) rank loss.
    """
    if count > dim:
        raise DimensionMismatch(f"cannot fit {count} orthogonal vectors in R^{dim}")
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        v = rng.standard_normal(dim)
        for u in out:
            v = v - (u @ v) * u
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            out.append(v / norm)
    return out
