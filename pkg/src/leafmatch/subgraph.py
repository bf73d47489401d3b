"""Matching an occluded curve's feature graph into a full contour's graph."""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .geometry import OpenCurve, arc_positions, PERIMETER


@dataclass(frozen=True)
class MatchConfig:
    """Subgraph matching parameters, in units of the full contour.

    ``extent`` bounds the fraction of the full contour the occluded curve may
    cover once scaled; it rejects degenerate reference pairs that would
    shrink the query onto a tiny stretch of contour.
    """

    lambda_: float = 0.05 * PERIMETER
    nn_reject: float = 0.1 * PERIMETER
    extent: tuple = (0.05, 1.05)

    def __post_init__(self):
        if not (np.isfinite(self.lambda_) and self.lambda_ >= 0):
            raise ValueError("lambda_ must be finite and >= 0")
        if not (np.isfinite(self.nn_reject) and self.nn_reject > 0):
            raise ValueError("nn_reject must be finite and > 0")


@dataclass(frozen=True)
class NodeMapping:
    """G1 node ``i`` maps to G2 node ``pairs[i][1]`` (None when unmapped)."""

    pairs: tuple
    orientation: int = 1
    cost: float = 0.0
    scale: float = 1.0

    @classmethod
    def from_assign(cls, assign, orientation=1, cost=0.0, scale=1.0):
        pairs = tuple((i, None if j < 0 else int(j)) for i, j in enumerate(np.asarray(assign)))
        return cls(pairs, int(orientation), float(cost), float(scale))

    @property
    def assign(self):
        return np.array([-1 if j is None else j for _, j in self.pairs], dtype=np.int64)

    @property
    def matched(self):
        return [(i, j) for i, j in self.pairs if j is not None]

    def inverted(self, n2):
        back = np.full(n2, -1, dtype=np.int64)
        for i, j in self.matched:
            back[j] = i
        return NodeMapping.from_assign(back, self.orientation, self.cost, 1.0 / self.scale)


def expected_position(g1, g2, f_g1, f_g2, g_i, r=1):
    """Image of ``g_i`` under the similarity taking (g1, g2) to (f_g1, f_g2).

    ``r = -1`` composes the similarity with a reflection.
    """
    z1, z2, zi = (complex(*p) for p in (g1, g2, g_i))
    w1, w2 = complex(*f_g1), complex(*f_g2)
    if z1 == z2 or w1 == w2:
        raise ValueError("reference points must be distinct")
    if r == 1:
        w = w1 + (zi - z1) * (w2 - w1) / (z2 - z1)
    elif r == -1:
        w = w1 + (zi - z1).conjugate() * (w2 - w1) / (z2 - z1).conjugate()
    else:
        raise ValueError("r must be +1 or -1")
    return np.array([w.real, w.imag])


def mapping_cost(mapping, g1, g2, cfg=MatchConfig()):
    """Pairwise distance disagreement plus ``lambda_`` per unmapped G1 node.

    G1 distances are multiplied by ``mapping.scale`` before comparison and
    G2 distances follow ``mapping.orientation`` (see ``FeatureGraph.oriented``).
    """
    fwd = g1.forward()
    d2 = g2.oriented(mapping.orientation)
    matched = sorted(mapping.matched)
    cost = cfg.lambda_ * (len(g1) - len(matched))
    for a, (i, fi) in enumerate(matched):
        for j, fj in matched[a + 1:]:
            cost += abs(mapping.scale * fwd[i, j] - d2[fi, fj])
    return float(cost)


def reference_pairs(k):
    """G1 reference pairs: (first, last) first, then every other i < j."""
    pairs = [(0, k - 1)] + [(i, j) for i in range(k) for j in range(i + 1, k) if (i, j) != (0, k - 1)]
    return np.array(pairs, dtype=np.int64)


def _search(g1, g2, cfg, keep):
    args = (
        np.ascontiguousarray(g1.points), np.ascontiguousarray(g2.points),
        np.ascontiguousarray(g1.forward()),
        np.ascontiguousarray(g2.oriented(1)), np.ascontiguousarray(g2.oriented(-1)),
        reference_pairs(len(g1)), g1.length, g2.length,
        float(cfg.lambda_), float(cfg.nn_reject), float(cfg.extent[0]), float(cfg.extent[1]), int(keep),
    )
    return kernels.subgraph_search(*args)


def subgraph_candidates(g1, g2, cfg=MatchConfig(), top=None):
    """Per-reference-pair greedy mappings of G1 into G2, cheapest first.

    Each reference pair contributes its best greedy mapping; duplicates are
    dropped and ties keep reference-pair order, so the first entry is the
    :func:`subgraph_match` result. At most ``top`` mappings are returned.
    """
    if len(g1) < 2 or len(g2) < 2:
        raise ValueError("both graphs need at least two nodes")
    if len(g1) > len(g2):
        return [m.inverted(len(g1)) for m in subgraph_candidates(g2, g1, cfg, top)]
    keep = len(reference_pairs(len(g1))) if top is None else max(int(top), 1)
    cost, assign, r, s = _search(g1, g2, cfg, keep)
    out, seen = [], set()
    for q in np.argsort(cost, kind="stable"):
        if not np.isfinite(cost[q]):
            break
        key = (int(r[q]), assign[q].tobytes())
        if key in seen:
            continue
        seen.add(key)
        out.append(NodeMapping.from_assign(assign[q], r[q], cost[q], s[q]))
        if top is not None and len(out) >= top:
            break
    if not out:
        # no admissible reference pair: everything unmapped
        out.append(NodeMapping.from_assign(np.full(len(g1), -1), 1, cfg.lambda_ * len(g1), 1.0))
    return out


def subgraph_match(g1, g2, cfg=MatchConfig()):
    """Best greedy reference-pair mapping of G1 into G2.

    Every G1 reference pair, every ordered G2 image pair and both orientations
    are tried; remaining G1 nodes go to the nearest free G2 node to their
    expected position, or stay unmapped (cost ``lambda_``) when none lies
    within ``nn_reject``. If G1 has more nodes than G2 the search runs the
    other way round and the result is inverted.
    """
    return subgraph_candidates(g1, g2, cfg, top=1)[0]


def _similarity_fit(src, dst, reflect):
    # least-squares similarity dst ~ w1 + c * (z or conj z)
    z = src[:, 0] + 1j * src[:, 1]
    w = dst[:, 0] + 1j * dst[:, 1]
    if reflect:
        z = z.conj()
    zc, wc = z - z.mean(), w - w.mean()
    c = (np.conj(zc) @ wc) / max(float((np.abs(zc) ** 2).sum()), 1e-300)

    def apply(p):
        q = p[..., 0] + 1j * p[..., 1]
        if reflect:
            q = q.conj()
        out = w.mean() + c * (q - z.mean())
        return np.stack([out.real, out.imag], axis=-1)

    return apply


def extract_section(full, g1, g2, mapping, occluded_len=None, search=0.1):
    """Contour arcs of ``full`` corresponding to the occluded curve.

    The arc runs between the images of the first and last matched G1 nodes,
    extended by the (scaled) unmatched tails of the occluded curve; each end
    is then snapped to the contour point nearest to the query endpoint mapped
    through the least-squares similarity of the matched nodes, searching
    ``search * perimeter`` around the predicted position. Both arcs between
    the two ends are returned, each traversed from the image of the query's
    start to the image of its end, ordered by how closely their scaled
    length matches ``occluded_len``.
    """
    matched = sorted(mapping.matched)
    if len(matched) < 2:
        raise ValueError("need at least two matched nodes to extract a section")
    pts = full.points if hasattr(full, "points") else np.asarray(full, dtype=np.float64)
    n = len(pts)
    cum, perim = arc_positions(pts, True)
    r = mapping.orientation
    s = mapping.scale
    q_arc = g1.arc if g1.arc is not None else np.zeros(len(g1))
    q_len = g1.length if occluded_len is None else float(occluded_len)
    (i0, j0), (i1, j1) = matched[0], matched[-1]
    a0 = g2.arc[j0] if g2.arc is not None else cum[g2.indices[j0]]
    a1 = g2.arc[j1] if g2.arc is not None else cum[g2.indices[j1]]
    # predicted arc positions of the query endpoints, walking in direction r
    p_start = a0 - r * s * (q_arc[i0] - 0.0)
    p_end = a1 + r * s * (q_len - q_arc[i1]) if g1.arc is not None else a1

    ends = [p_start, p_end]
    src = g1.points[[i for i, _ in matched]]
    dst = g2.points[[j for _, j in matched]]
    if g1.source is not None and len(matched) >= 2:
        qpts = g1.source.points if hasattr(g1.source, "points") else np.asarray(g1.source)
        fit = _similarity_fit(src, dst, reflect=(r == -1))
        targets = fit(np.array([qpts[0], qpts[-1]]))
        half = search * perim
        for e in range(2):
            rel = np.mod(cum - ends[e] + 0.5 * perim, perim) - 0.5 * perim
            cand = np.flatnonzero(np.abs(rel) <= half)
            if cand.size:
                d = np.sum((pts[cand] - targets[e]) ** 2, axis=1)
                ends[e] = cum[cand[int(np.argmin(d))]]
    idx = [int(np.argmin(np.abs(np.mod(cum - e + 0.5 * perim, perim) - 0.5 * perim))) for e in ends]
    i_start, i_end = idx
    if i_start == i_end:
        # the query wraps the whole contour: take the full lap in direction r
        i_end = (i_start - r) % n

    def ccw(a, b):
        return np.mod(np.arange(a, a + (b - a) % n + 1), n)

    forward = ccw(i_start, i_end)             # CCW from start to end
    backward = ccw(i_end, i_start)[::-1]      # CW from start to end
    arcs = [forward, backward] if r == 1 else [backward, forward]
    out = []
    for ids in arcs:
        if len(ids) >= OpenCurve.min_points:
            sec = OpenCurve._unchecked(pts[ids])
            out.append((abs(sec.length / s - q_len), sec, ids))
    out.sort(key=lambda t: t[0])
    return [(sec, ids) for _, sec, ids in out]
