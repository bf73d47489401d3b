"""Precision/recall over rankings and the occlusion evaluation harness."""

from dataclasses import dataclass

import numpy as np

from .geometry import Contour, occlude


@dataclass(frozen=True)
class RankTable:
    """Mean precision and recall at every rank cutoff 1..len(rank)."""

    rank: np.ndarray
    precision: np.ndarray
    recall: np.ndarray
    n_queries: int

    @property
    def accuracy(self):
        """Rank-1 species accuracy (precision at rank 1)."""
        return float(self.precision[0])


def _ranked_species(result):
    seen = set()
    out = []
    for c in result.ranked:
        if c.record_id in seen:
            continue
        seen.add(c.record_id)
        out.append(c.species)
    return out


def rank_metrics(results, truth, db_species, equivalent=None):
    """Species-level precision/recall per rank cutoff, averaged over queries.

    Parameters
    ----------
    results : list of QueryResult
    truth : list of str
        True species of each query.
    db_species : list of str
        Species of every database record (defines how many are relevant).
    equivalent : dict, optional
        Species -> group name; species in one group count as the same answer.
    """
    if not results:
        raise ValueError("no query results")
    if len(results) != len(truth):
        raise ValueError("one truth label per query result is required")
    group = (lambda s: equivalent.get(s, s)) if equivalent else (lambda s: s)
    dbg = [group(s) for s in db_species]
    known = set(dbg)
    n = len(db_species)
    prec = np.zeros(n)
    rec = np.zeros(n)
    for res, t in zip(results, truth):
        tg = group(t)
        if tg not in known:
            raise ValueError(f"truth label {t!r} is not a database species")
        relevant = sum(1 for s in dbg if s == tg)
        hits = np.array([group(s) == tg for s in _ranked_species(res)], dtype=np.float64)
        if len(hits) < n:
            hits = np.concatenate([hits, np.zeros(n - len(hits))])
        cum = np.cumsum(hits[:n])
        prec += cum / np.arange(1, n + 1)
        rec += cum / relevant
    k = len(results)
    return RankTable(np.arange(1, n + 1), prec / k, rec / k, k)


def occlusion_fraction(seed, i, lo, hi):
    rng = np.random.default_rng([seed, i])
    return float(lo if hi <= lo else rng.uniform(lo, hi))


def make_query(curve, seed, i, lo, hi):
    """Occluded version of query ``i``; open curves pass through unchanged."""
    if isinstance(curve, Contour):
        f = occlusion_fraction(seed, i, lo, hi)
        return occlude(curve, f, [seed, i, 1]), f
    return curve, None


def evaluate(db, queries, occlusion=(0.2, 0.5), seed=0, config=None, threads=1, equivalent=None):
    """Occlude and query every ``(id, curve, species)`` and tabulate ranks.

    Returns ``(table, results, fractions)``.
    """
    from .pipeline import query

    if not queries:
        raise ValueError("no queries")
    lo, hi = occlusion
    if not 0.0 <= lo <= hi <= 0.95:
        raise ValueError("occlusion range must satisfy 0 <= lo <= hi <= 0.95")
    results, truth, fracs = [], [], []
    known = set(db.species)
    for i, (qid, curve, species) in enumerate(queries):
        if (equivalent or {}).get(species, species) not in {(equivalent or {}).get(s, s) for s in known}:
            raise ValueError(f"query {qid}: species {species!r} is not in the database")
        occ, f = make_query(curve, seed, i, lo, hi)
        results.append(query(db, occ, config, threads))
        truth.append(species)
        fracs.append(f)
    return rank_metrics(results, truth, db.species, equivalent), results, fracs
