"""Seeded superformula shape families used as a stand-in leaf corpus."""

import os
from dataclasses import dataclass

import numpy as np

from .io import as_curve, write_curve


@dataclass(frozen=True)
class ShapeClass:
    m: float
    n1: float
    n2: float
    n3: float
    b: float
    elong: float
    bend: float


def _class_params(rng):
    return ShapeClass(
        m=float(rng.integers(2, 9)),
        n1=float(rng.uniform(1.5, 8.0)),
        n2=float(rng.uniform(1.5, 8.0)),
        n3=float(rng.uniform(1.5, 8.0)),
        b=float(rng.uniform(0.75, 1.25)),
        elong=float(rng.uniform(0.45, 1.0)),
        bend=float(rng.uniform(-0.25, 0.25)),
    )


def superformula(phi, m, n1, n2, n3, a=1.0, b=1.0):
    t = m * phi / 4.0
    r = np.abs(np.cos(t) / a) ** n2 + np.abs(np.sin(t) / b) ** n3
    return r ** (-1.0 / n1)


def class_table(classes, seed):
    rng = np.random.default_rng([seed, 0])
    return [_class_params(rng) for _ in range(classes)]


def make_instance(cls, rng, n=400, jitter=0.04):
    """One closed shape of class ``cls`` with parameter and radial jitter,
    random rotation and random scale."""
    phi = np.arange(n) * (2 * np.pi / n)
    j = 1.0 + jitter * rng.uniform(-1, 1, 4)
    r = superformula(phi, cls.m, cls.n1 * j[0], cls.n2 * j[1], cls.n3 * j[2], 1.0, cls.b * j[3])
    r = r / r.max()
    # low-frequency radial wobble
    for h in (2, 3, 5):
        r = r * (1.0 + 0.5 * jitter * rng.uniform(-1, 1) * np.cos(h * phi + rng.uniform(0, 2 * np.pi)))
    x = r * np.cos(phi)
    y = r * np.sin(phi) * cls.elong * (1.0 + jitter * rng.uniform(-1, 1))
    y = y + cls.bend * x * x
    ang = rng.uniform(0, 2 * np.pi)
    scale = rng.uniform(50.0, 200.0)
    c, s = np.cos(ang), np.sin(ang)
    pts = scale * np.column_stack([c * x - s * y, s * x + c * y]) + rng.uniform(-100, 100, 2)
    return as_curve(pts, True)


def generate(classes=10, per_class=5, seed=0, n=400):
    """Return ``[(id, species, Contour)]`` in class-major order."""
    if classes < 1 or per_class < 1:
        raise ValueError("classes and per_class must be >= 1")
    table = class_table(classes, seed)
    out = []
    for ci, cls in enumerate(table):
        for k in range(per_class):
            rng = np.random.default_rng([seed, 1, ci, k])
            out.append((f"c{ci:02d}_{k:02d}", f"c{ci:02d}", make_instance(cls, rng, n)))
    return out


def write_corpus(out_dir, classes=10, per_class=5, seed=0, n=400):
    """Write the corpus as contour files plus ``labels.csv``; returns the ids."""
    os.makedirs(out_dir, exist_ok=True)
    items = generate(classes, per_class, seed, n)
    for cid, _, curve in items:
        write_curve(os.path.join(out_dir, cid + ".txt"), curve)
    with open(os.path.join(out_dir, "labels.csv"), "w") as fh:
        fh.write("id,species\n")
        for cid, sp, _ in items:
            fh.write(f"{cid},{sp}\n")
    return [cid for cid, _, _ in items]
