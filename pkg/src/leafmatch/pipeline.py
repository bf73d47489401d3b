"""Database construction and the staged query: subgraph -> Frechet -> energy."""

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .alignment import CandidateMatch, prune_candidates, refine_section, section_score
from .config import RunConfig
from .dce import FeatureGraph, extract_features
from .energy import build_bundle
from .geometry import Contour, Curve, OpenCurve, normalize, resample_arclength, resample_uniform, savgol_smooth
from .gnccp import gnccp_optimize
from .io import read_any, read_curve, write_curve
from .spline import spline_resample
from .subgraph import extract_section, subgraph_candidates

FORMAT_VERSION = 1


@dataclass
class LeafRecord:
    id: str
    species: str
    contour: Contour
    spline_points: Contour
    features: FeatureGraph


@dataclass
class LeafDatabase:
    records: list
    config: RunConfig
    skipped: list = field(default_factory=list)

    def __post_init__(self):
        if not self.records:
            raise ValueError("database is empty")
        ids = [r.id for r in self.records]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate record ids: {dup}")

    def __len__(self):
        return len(self.records)

    @property
    def ids(self):
        return [r.id for r in self.records]

    @property
    def species(self):
        return [r.species for r in self.records]

    def species_of(self, rid):
        for r in self.records:
            if r.id == rid:
                return r.species
        raise KeyError(rid)


@dataclass
class QueryResult:
    ranked: list
    best_id: str
    stage_stats: dict
    frechet_best_id: str = None

    def __post_init__(self):
        if self.ranked and self.ranked[0].record_id != self.best_id:
            raise ValueError("best_id must be the first ranked record")


def prepare(curve, cfg):
    """Normalize, smooth and spline-resample a curve at ``cfg.spline_points``."""
    closed = curve.closed
    n = cfg.spline_points
    c = normalize(curve)
    c = resample_uniform(c, n)
    if cfg.smooth_window and cfg.smooth_window <= n / 4:
        c = savgol_smooth(c, cfg.smooth_window)
    c = spline_resample(c, n, cfg.tension)
    c = normalize(c)
    kind = Contour if closed else OpenCurve
    return kind._unchecked(c.points)


def make_record(rid, species, contour, cfg):
    base = normalize(contour)
    spl = prepare(base, cfg)
    return LeafRecord(rid, species, base, spl, extract_features(spl, cfg.dce_k))


def species_from_id(rid):
    return rid.split("_")[0]


def build_database(sources, labels=None, config=None):
    """Build a database from contour files and/or ``(id, curve)`` pairs.

    Files that cannot be read or are degenerate are skipped and listed in
    ``db.skipped`` as ``(source, reason)``. Species come from ``labels``
    (id -> species) when given, otherwise from the id prefix before ``_``.
    """
    cfg = config or RunConfig()
    labels = labels or {}
    records, skipped, seen = [], [], set()
    for src in sources:
        if isinstance(src, tuple):
            rid, curve = src
        else:
            rid = os.path.splitext(os.path.basename(src))[0]
            try:
                curve = read_any(src)
            except (OSError, ValueError) as exc:
                skipped.append((str(src), str(exc)))
                continue
        if rid in seen:
            raise ValueError(f"duplicate record id: {rid}")
        seen.add(rid)
        if not isinstance(curve, Contour):
            skipped.append((str(rid), "not a closed contour"))
            continue
        try:
            rec = make_record(rid, labels.get(rid, species_from_id(rid)), curve, cfg)
        except (ValueError, RuntimeError, np.linalg.LinAlgError) as exc:
            skipped.append((str(rid), str(exc)))
            continue
        records.append(rec)
    if not records:
        raise ValueError("no contours could be ingested")
    return LeafDatabase(records, cfg, skipped)


def save_database(db, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    files = []
    for i, r in enumerate(db.records):
        stem = f"record_{i:05d}"
        write_curve(os.path.join(out_dir, stem + ".txt"), r.contour)
        np.savez(os.path.join(out_dir, stem + ".npz"),
                 spline_points=r.spline_points.points, indices=r.features.indices,
                 arc=r.features.arc, length=r.features.length)
        files.append(stem)
    manifest = {
        "format_version": FORMAT_VERSION,
        "ids": db.ids,
        "species": db.species,
        "files": files,
        "config": db.config.to_dict(),
    }
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_database(db_dir):
    path = os.path.join(db_dir, "manifest.json")
    if not os.path.isfile(path):
        raise FileNotFoundError(f"no database manifest at {path}")
    with open(path) as fh:
        man = json.load(fh)
    if man.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported database format {man.get('format_version')!r}")
    cfg = RunConfig.from_dict(man["config"])
    records = []
    for rid, sp, stem in zip(man["ids"], man["species"], man["files"]):
        contour = read_curve(os.path.join(db_dir, stem + ".txt"))
        with np.load(os.path.join(db_dir, stem + ".npz")) as z:
            spl = Contour._unchecked(z["spline_points"])
            idx = z["indices"]
            g = FeatureGraph(idx, spl.points[idx], float(z["length"]), True, arc=z["arc"], source=spl)
        records.append(LeafRecord(rid, sp, contour, spl, g))
    return LeafDatabase(records, cfg)


def _map(fn, items, threads):
    if threads is None or threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def _candidates_for(order, rec, qs, qcoarse, g1, cfg):
    """Best refined Frechet candidate of one record, or None.

    The ``cfg.mappings`` cheapest per-reference-pair mappings each propose
    two contour arcs; every distinct arc is scored once without refinement
    and the ``cfg.refine_top`` best are refined. ``qs`` is the query
    resampled to ``cfg.frechet_points`` and ``qcoarse`` the same at the
    screening resolution. The affine transform stored on the
    candidate maps the section into the query frame.
    """
    pts = rec.spline_points.points
    screened, seen = [], set()
    for mapping in subgraph_candidates(g1, rec.features, cfg.match_config(), cfg.mappings):
        if len(mapping.matched) < 2:
            continue
        try:
            sections = extract_section(rec.spline_points, g1, rec.features, mapping)
        except ValueError:
            continue
        for _, ids in sections:
            # start, direction and length fix the arc
            key = (int(ids[0]), int(ids[1]), len(ids))
            if key in seen:
                continue
            seen.add(key)
            try:
                f, _ = section_score(pts[ids], qcoarse)
            except ValueError:
                continue
            screened.append((f, len(screened), ids, mapping))
    screened.sort(key=lambda t: t[:2])
    best = None
    for _, _, ids, mapping in screened[:cfg.refine_top]:
        try:
            fd, xf, ids = refine_section(pts, ids, qs)
        except ValueError:
            continue
        if best is None or fd < best.frechet:
            best = CandidateMatch(rec.id, OpenCurve._unchecked(pts[ids]), mapping, xf, fd, None, order, rec.species)
    return best


def _energy_for(cand, qbundle, cfg):
    sec = resample_uniform(cand.section, cfg.energy_points)
    sb = build_bundle(sec, cfg=cfg.bundle_config())
    _, e = gnccp_optimize(qbundle, sb, cfg.energy_weights(), cfg.gnccp_config())
    cand.energy = float(e)
    return cand


def query(db, occluded, config=None, threads=1):
    """Rank database records for an occluded open curve.

    Records without a usable candidate are ranked last (Frechet = inf) in
    database order so that every record appears exactly once.
    """
    if db is None or not len(db):
        raise ValueError("database is empty")
    cfg = config or db.config
    if not isinstance(occluded, Curve):
        occluded = OpenCurve(occluded)
    stats = {}
    t0 = time.perf_counter()
    q = prepare(occluded, cfg)
    g1 = extract_features(q, cfg.dce_k)
    stats["prepare"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    qs = resample_arclength(q.points, cfg.frechet_points)
    qc = resample_arclength(q.points, cfg.screen_points)
    cands = _map(lambda it: _candidates_for(it[0], it[1], qs, qc, g1, cfg), list(enumerate(db.records)), threads)
    stats["subgraph_frechet"] = time.perf_counter() - t0

    found = [c for c in cands if c is not None]
    missing = [CandidateMatch(r.id, None, None, None, float("inf"), None, i, r.species)
               for i, (r, c) in enumerate(zip(db.records, cands)) if c is None]
    survivors = prune_candidates(found, cfg.eta)
    keep = {id(c) for c in survivors}
    rest = sorted([c for c in found if id(c) not in keep], key=lambda c: (c.frechet, c.mapping.cost, c.order))

    t0 = time.perf_counter()
    if survivors:
        qb = build_bundle(resample_uniform(q, cfg.energy_points), cfg=cfg.bundle_config())
        survivors = _map(lambda c: _energy_for(c, qb, cfg), survivors, threads)
    stats["energy"] = time.perf_counter() - t0

    frechet_best = survivors[0].record_id if survivors else None
    survivors = sorted(survivors, key=lambda c: (c.energy, c.frechet, c.order))
    ranked = survivors + rest + missing
    return QueryResult(ranked, ranked[0].record_id, stats, frechet_best)


from .evaluation import rank_metrics  # noqa: E402  (re-export)
