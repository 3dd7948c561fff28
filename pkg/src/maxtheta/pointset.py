"""Finite point configurations: charge optimisation and midpoint-centered energies.

Energies per point follow the pairwise convention (1/N) sum_{i != j}, so each
unordered pair counts twice. Potentials act on squared distances.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import Delaunay, QhullError

from .energy import Potential
from .errors import DegenerateInput, OddCount, TooLargeForExhaustive
from .lattice import LatticeParam, hexagonal, square

EXHAUSTIVE_MAX = 16
COCIRCULAR_TOL = 1e-9


@dataclass
class PointConfig:
    points: np.ndarray
    charges: np.ndarray | None = None
    density: float = 1.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.asarray(self.points, float).reshape(-1, 2)
        if self.charges is not None:
            self.charges = np.asarray(self.charges, int)
            if self.charges.shape != (len(self.points),):
                raise ValueError("one charge per point is required")
            if not np.all(np.abs(self.charges) == 1):
                raise ValueError("charges must be +1 or -1")
            if self.charges.sum() != 0:
                raise ValueError("charges must sum to zero")

    @property
    def n(self) -> int:
        return len(self.points)

    def with_charges(self, charges) -> "PointConfig":
        return PointConfig(self.points.copy(), np.asarray(charges, int), self.density, dict(self.meta))


# ---------------------------------------------------------------------------
# patches


def make_patch(kind: str, R: float, center=(0.0, 0.0)) -> PointConfig:
    """Points of the unit-density square or hexagonal lattice inside the disc |p - center| <= R."""
    if not R > 0:
        raise ValueError(f"patch radius must be positive, got {R}")
    L = {"hexagonal": hexagonal, "square": square}.get(kind)
    if L is None:
        raise ValueError(f"unknown patch kind {kind!r}")
    return lattice_patch(L(), R, center, kind)


def lattice_patch(L: LatticeParam, R: float, center=(0.0, 0.0), label: str | None = None) -> PointConfig:
    B = L.basis()
    # |k v1 + l v2| >= sqrt(lambda_min) * |(k, l)|
    smin = np.linalg.svd(B, compute_uv=False).min()
    n = int(math.ceil((R + np.hypot(*center)) / smin)) + 1
    k, l = np.meshgrid(np.arange(-n, n + 1), np.arange(-n, n + 1), indexing="ij")
    pts = np.stack([k.ravel(), l.ravel()], axis=1) @ B.T
    keep = np.hypot(pts[:, 0] - center[0], pts[:, 1] - center[1]) <= R + 1e-12
    pts = pts[keep]
    order = np.lexsort((pts[:, 0], pts[:, 1]))
    meta = {"lattice": label or str(L), "x": L.x, "y": L.y, "R": R, "center": list(center)}
    return PointConfig(pts[order], density=1.0, meta=meta)


def grid_patch(n: int, m: int) -> PointConfig:
    """n x m block of the square lattice, unit spacing."""
    k, l = np.meshgrid(np.arange(n), np.arange(m), indexing="ij")
    pts = np.stack([k.ravel(), l.ravel()], axis=1).astype(float)
    return PointConfig(pts, meta={"lattice": "square", "block": [n, m]})


# ---------------------------------------------------------------------------
# Delaunay


@dataclass
class Triangulation:
    points: np.ndarray
    triangles: np.ndarray
    cells: list[tuple[int, ...]]
    edges: np.ndarray
    midpoints: np.ndarray


def _circumcircle(p):
    a, b, c = p
    d = 2 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
    sa, sb, sc = a @ a, b @ b, c @ c
    ux = (sa * (b[1] - c[1]) + sb * (c[1] - a[1]) + sc * (a[1] - b[1])) / d
    uy = (sa * (c[0] - b[0]) + sb * (a[0] - c[0]) + sc * (b[0] - a[0])) / d
    centre = np.array([ux, uy])
    return centre, float(np.linalg.norm(a - centre))


def delaunay(points, tol: float = COCIRCULAR_TOL) -> Triangulation:
    """Delaunay triangulation with cocircular neighbours merged into cells.

    A cell holds all points on one empty circle. Its chord midpoints (every
    pair of its vertices) go into the midpoint set, which covers every
    triangulation the degenerate cell admits.
    """
    pts = np.asarray(points, float).reshape(-1, 2)
    if len(pts) < 3:
        raise DegenerateInput("need at least three points")
    try:
        tri = Delaunay(pts)
    except QhullError as exc:
        raise DegenerateInput("points are collinear or otherwise degenerate") from exc
    simplices = tri.simplices
    circles = [_circumcircle(pts[s]) for s in simplices]
    parent = list(range(len(simplices)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, nbrs in enumerate(tri.neighbors):
        c, r = circles[i]
        for j in nbrs:
            if j < 0 or j < i:
                continue
            opposite = set(simplices[j]) - set(simplices[i])
            (v,) = opposite
            if abs(np.linalg.norm(pts[v] - c) - r) <= tol * r:
                parent[find(j)] = find(i)
    groups: dict[int, set[int]] = {}
    for i, s in enumerate(simplices):
        groups.setdefault(find(i), set()).update(int(v) for v in s)
    cells = sorted(tuple(sorted(g)) for g in groups.values())
    edges = set()
    for s in simplices:
        for a, b in itertools.combinations(sorted(int(v) for v in s), 2):
            edges.add((a, b))
    chords = set()
    for cell in cells:
        chords.update(itertools.combinations(cell, 2))
    chords = np.array(sorted(chords), dtype=int)
    mids = 0.5 * (pts[chords[:, 0]] + pts[chords[:, 1]])
    mids = _dedupe(mids)
    return Triangulation(pts, np.sort(simplices, axis=1), cells, np.array(sorted(edges), dtype=int), mids)


def _dedupe(p, decimals=9):
    _, idx = np.unique(np.round(p, decimals), axis=0, return_index=True)
    return p[np.sort(idx)]


def empty_circle_violations(tri: Triangulation, tol: float = COCIRCULAR_TOL) -> list[tuple[int, int]]:
    """(triangle, point) pairs with the point strictly inside the triangle's circumcircle."""
    bad = []
    for i, s in enumerate(tri.triangles):
        c, r = _circumcircle(tri.points[s])
        d = np.linalg.norm(tri.points - c, axis=1)
        for j in np.nonzero(d < r * (1 - tol))[0]:
            bad.append((i, int(j)))
    return bad


# ---------------------------------------------------------------------------
# charges


def interaction_matrix(X: PointConfig, f: Potential) -> np.ndarray:
    diff = X.points[:, None, :] - X.points[None, :, :]
    r = np.einsum("ijk,ijk->ij", diff, diff)
    np.fill_diagonal(r, 1.0)
    F = np.asarray(f(r), float)
    np.fill_diagonal(F, 0.0)
    return F


def charge_energy_of(F: np.ndarray, charges) -> float:
    phi = np.asarray(charges, float)
    return float(phi @ F @ phi) / len(phi)


@dataclass(frozen=True)
class AnnealSchedule:
    seed: int = 0
    sweeps: int = 400
    t_start: float = 2.0
    t_end: float = 1e-3
    restarts: int = 4


def _exhaustive(F):
    n = len(F)
    # fix the first charge to +1, the flipped assignment has the same energy
    best_e, best_phi = math.inf, None
    rest = np.arange(1, n)
    for block in _chunks(itertools.combinations(rest, n // 2 - 1), 4096):
        phi = -np.ones((len(block), n))
        phi[:, 0] = 1.0
        rows = np.repeat(np.arange(len(block)), n // 2 - 1)
        if n > 2:
            phi[rows, np.asarray(block).ravel()] = 1.0
        e = np.einsum("ai,ij,aj->a", phi, F, phi)
        i = int(np.argmin(e))
        if e[i] < best_e:
            best_e, best_phi = float(e[i]), phi[i].astype(int)
    return best_e / n, best_phi


def _chunks(it, size):
    while True:
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield block


def _anneal(F, schedule: AnnealSchedule):
    n = len(F)
    rng = np.random.default_rng(schedule.seed)
    scale = float(np.max(np.abs(F))) or 1.0
    steps = schedule.sweeps * n
    temps = scale * schedule.t_start * (schedule.t_end / schedule.t_start) ** (np.arange(steps) / max(steps - 1, 1))
    best_e, best_phi = math.inf, None
    for _ in range(schedule.restarts):
        phi = np.ones(n)
        phi[rng.permutation(n)[: n // 2]] = -1.0
        h = F @ phi
        e = phi @ h
        for T in temps:
            i = rng.integers(n)
            js = np.nonzero(phi != phi[i])[0]
            j = js[rng.integers(len(js))]
            delta = -4 * phi[i] * h[i] - 4 * phi[j] * h[j] + 8 * phi[i] * phi[j] * F[i, j]
            if delta <= 0 or rng.random() < math.exp(-delta / T):
                h -= 2 * phi[i] * F[:, i] + 2 * phi[j] * F[:, j]
                phi[i], phi[j] = -phi[i], -phi[j]
                e += delta
                if e < best_e:
                    best_e, best_phi = e, phi.copy()
    # re-evaluate to drop accumulated update error
    best_phi = best_phi.astype(int)
    if best_phi[0] < 0:
        best_phi = -best_phi
    return charge_energy_of(F, best_phi), best_phi


def charge_energy(X: PointConfig, f: Potential, method: str = "exhaustive", schedule: AnnealSchedule | None = None):
    """Minimum over neutral +-1 charges of (1/N) sum_{i != j} phi_i phi_j f(|x_i - x_j|^2).

    Returns (energy per point, charges). Charges are normalised so that the
    first point carries +1.
    """
    n = X.n
    if n % 2:
        raise OddCount(f"neutral charges need an even number of points, got {n}")
    if n == 0:
        raise DegenerateInput("empty configuration")
    F = interaction_matrix(X, f)
    if method == "exhaustive":
        if n > EXHAUSTIVE_MAX:
            raise TooLargeForExhaustive(f"exhaustive search is limited to {EXHAUSTIVE_MAX} points, got {n}")
        return _exhaustive(F)
    if method == "anneal":
        return _anneal(F, schedule or AnnealSchedule())
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# centered energy


def midpoint_energies(X: PointConfig, f: Potential, mids: np.ndarray) -> np.ndarray:
    diff = mids[:, None, :] - X.points[None, :, :]
    r = np.einsum("ijk,ijk->ij", diff, diff)
    return np.asarray(f(r), float).sum(axis=1)


def center_energy(X: PointConfig, f: Potential, within: float | None = None, tri: Triangulation | None = None):
    """Minimum over Delaunay midpoints m of sum_x f(|x - m|^2); returns (value, m).

    ``within`` keeps only midpoints at most that far from the patch centre,
    which measures a bulk cell instead of a boundary one.
    """
    tri = tri or delaunay(X.points)
    mids = tri.midpoints
    if within is not None:
        c = np.asarray(X.meta.get("center", X.points.mean(axis=0)), float)
        mids = mids[np.linalg.norm(mids - c, axis=1) <= within]
        if len(mids) == 0:
            raise DegenerateInput(f"no midpoint within {within} of the centre")
    e = midpoint_energies(X, f, mids)
    i = int(np.argmin(e))
    return float(e[i]), mids[i]


def rigid_motion(X: PointConfig, angle: float, shift) -> PointConfig:
    c, s = math.cos(angle), math.sin(angle)
    R = np.array([[c, -s], [s, c]])
    return PointConfig(X.points @ R.T + np.asarray(shift, float), X.charges, X.density, dict(X.meta))


# ---------------------------------------------------------------------------
# io


def to_csv(X: PointConfig) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "charge"] if X.charges is not None else ["x", "y"])
    for i, (px, py) in enumerate(X.points):
        row = [repr(float(px)), repr(float(py))]
        if X.charges is not None:
            row.append(int(X.charges[i]))
        w.writerow(row)
    return buf.getvalue()


def from_csv(text: str) -> PointConfig:
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows or "x" not in rows[0] or "y" not in rows[0]:
        raise ValueError("CSV needs a header with columns x, y and optionally charge")
    pts = [(float(r["x"]), float(r["y"])) for r in rows]
    charges = None
    if "charge" in rows[0] and all(r.get("charge") not in (None, "") for r in rows):
        charges = [int(r["charge"]) for r in rows]
    return PointConfig(pts, charges)


def to_json(X: PointConfig) -> str:
    doc = {"points": X.points.tolist(), "density": X.density, "meta": X.meta}
    if X.charges is not None:
        doc["charges"] = X.charges.tolist()
    return json.dumps(doc)


def from_json(text: str) -> PointConfig:
    doc = json.loads(text)
    return PointConfig(doc["points"], doc.get("charges"), doc.get("density", 1.0), doc.get("meta", {}))


def load(path: str) -> PointConfig:
    with open(path) as fh:
        text = fh.read()
    return from_json(text) if path.endswith(".json") else from_csv(text)


def save(X: PointConfig, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(to_json(X) if path.endswith(".json") else to_csv(X))
