"""Essential paths: cell bases, the orthogonal projector, the graded product.

A path vector is *essential* when every backtrack-removal operator C_k kills
it.  Within the cell of paths from a to b of length l the essential subspace
is the kernel of the stacked constraint matrix [C_1; ...; C_{l-1}], computed
by SVD with a relative rank threshold.  Kernel bases are canonicalized
(reduced echelon over the lex path order, Gram-Schmidt, sign fix) so runs
are reproducible; golden values should nevertheless be basis-independent
(dimensions, norms, Gram data) because any orthonormal basis of the same
kernel is equally valid.

The graded product is e * f = P(concat(e, f)) where P is the orthogonal
projector onto the essential subspace; it is associative because
P(P(p)P(q)) = P(pq).
"""

from __future__ import annotations

import hashlib
import json
import math
import threading
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path as FsPath
from typing import Optional, Sequence

import numpy as np

from .errors import InputError, NonEssentialInputWarning, NumericError
from .graphs import DEFAULT_TOL, Graph, PerronData, perron_frobenius
from .paths import (
    Path,
    PathVector,
    TensorPathVector,
    concat,
    enumerate_paths,
    path_length,
)

DEFAULT_RANK_TOL = 1e-7

_CACHE_FORMAT = 1


@dataclass(frozen=True)
class EssentialCellBasis:
    """Orthonormal basis of the essential paths from ``start`` to ``end`` of
    a fixed length, stored as coordinates over the lex-ordered elementary
    paths of the cell."""

    start: int
    end: int
    length: int
    paths: tuple[Path, ...]
    coordinates: np.ndarray  # (dim, len(paths))
    gram_residual: float
    annihilator_residual: float

    @property
    def dim(self) -> int:
        return self.coordinates.shape[0]

    def vector(self, i: int) -> PathVector:
        row = self.coordinates[i]
        return PathVector({p: row[j] for j, p in enumerate(self.paths)})

    @property
    def vectors(self) -> list[PathVector]:
        return [self.vector(i) for i in range(self.dim)]


@dataclass(frozen=True)
class GradeBasis:
    """Concatenation of all cell bases of one length, cells ordered by
    (start, end) vertex index.  Global indices are used by the endomorphism
    blocks and the structure-constant tensors."""

    length: int
    cells: tuple[EssentialCellBasis, ...]
    offsets: tuple[int, ...]
    dim: int
    starts: np.ndarray
    ends: np.ndarray

    def cell_at(self, start: int, end: int) -> tuple[Optional[EssentialCellBasis], int]:
        for cell, off in zip(self.cells, self.offsets):
            if cell.start == start and cell.end == end:
                return cell, off
        return None, 0

    def vector(self, i: int) -> PathVector:
        for cell, off in zip(self.cells, self.offsets):
            if off <= i < off + cell.dim:
                return cell.vector(i - off)
        raise IndexError(i)

    def locate(self, i: int) -> tuple[EssentialCellBasis, int]:
        for cell, off in zip(self.cells, self.offsets):
            if off <= i < off + cell.dim:
                return cell, i - off
        raise IndexError(i)


@dataclass(frozen=True)
class Decomposition:
    """Coefficients gamma_{vij} writing an essential path of length L as a
    sum of graded products of essential paths of lengths l and L - l over
    intermediate vertices v.  The squared coefficients sum to the squared
    norm of the decomposed vector."""

    start: int
    end: int
    total_length: int
    split: int
    entries: tuple[tuple[int, int, int, float], ...]  # (v, i, j, gamma)

    @property
    def sum_squares(self) -> float:
        return sum(g * g for *_, g in self.entries)


def _rref(mat: np.ndarray, pivot_tol: float = 1e-8) -> np.ndarray:
    """Reduced row echelon form with partial pivoting; rows spanning the
    same subspace always yield the same result."""
    m = mat.astype(float).copy()
    nrows, ncols = m.shape
    r = 0
    for col in range(ncols):
        if r >= nrows:
            break
        piv = r + int(np.argmax(np.abs(m[r:, col])))
        if abs(m[piv, col]) <= pivot_tol:
            continue
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = m[r] / m[r, col]
        for other in range(nrows):
            if other != r and abs(m[other, col]) > 0:
                m[other] -= m[other, col] * m[r]
        r += 1
    return m[:r]


def _gram_schmidt(rows: np.ndarray) -> np.ndarray:
    out = rows.astype(float).copy()
    for i in range(out.shape[0]):
        for j in range(i):
            out[i] -= (out[j] @ out[i]) * out[j]
        nrm = np.linalg.norm(out[i])
        out[i] = out[i] / nrm
    return out


class EssentialSpace:
    """All cached essential-path data of one graph.

    Cell bases, grade bases, structure-constant tensors and the star
    (orientation reversal) matrices are computed once and then read-only,
    so a warmed instance is safe to use from several threads.
    """

    def __init__(self, graph: Graph, pf: Optional[PerronData] = None,
                 tol: float = DEFAULT_TOL, rank_tol: float = DEFAULT_RANK_TOL):
        if tol <= 0 or rank_tol <= 0:
            raise InputError("tolerances must be positive")
        self.graph = graph
        self.tol = tol
        self.rank_tol = rank_tol
        self.pf = pf if pf is not None else perron_frobenius(graph, tol)
        self._cells: dict[tuple[int, int, int], EssentialCellBasis] = {}
        self._grades: dict[int, GradeBasis] = {}
        self._mul: dict[tuple[int, int], np.ndarray] = {}
        self._mul_rows: dict[tuple[int, int], tuple[dict, dict]] = {}
        self._star: dict[int, np.ndarray] = {}
        self._lock = threading.Lock()

    # -- cell bases -----------------------------------------------------

    @property
    def max_length(self) -> Optional[int]:
        """Largest length carrying essential paths (kappa - 2), or None when
        the spectral radius is >= 2 and every length is populated."""
        return None if self.pf.kappa is None else self.pf.kappa - 2

    def cell(self, a, b, length: int) -> EssentialCellBasis:
        """Cell basis with endpoints given by vertex labels."""
        return self._cell(self.graph.vertex_index(a), self.graph.vertex_index(b),
                          length)

    def _cell(self, ai: int, bi: int, length: int) -> EssentialCellBasis:
        if length < 0:
            raise InputError(f"length must be >= 0, got {length}")
        key = (ai, bi, length)
        got = self._cells.get(key)
        if got is None:
            computed = self._compute_cell(ai, bi, length)
            with self._lock:
                got = self._cells.setdefault(key, computed)
        return got

    def _compute_cell(self, a: int, b: int, length: int) -> EssentialCellBasis:
        paths = tuple(enumerate_paths(self.graph, self.graph.label(a),
                                      self.graph.label(b), length))
        npaths = len(paths)
        if npaths == 0:
            return EssentialCellBasis(a, b, length, paths,
                                      np.zeros((0, 0)), 0.0, 0.0)
        constraints = self._constraint_matrix(a, b, length, paths)
        if constraints.shape[0] == 0:
            kernel = np.eye(npaths)
        else:
            # rank from singular values alone (cheap); the vectors are only
            # needed when a kernel actually exists, and the full square left
            # factor never is
            svals = np.linalg.svd(constraints, compute_uv=False)
            top = svals[0] if svals.size else 0.0
            thresh = self.rank_tol * (top if top > 0 else 1.0)
            rank = int(np.sum(svals > thresh))
            if rank == npaths:
                return EssentialCellBasis(a, b, length, paths,
                                          np.zeros((0, npaths)), 0.0, 0.0)
            economy = constraints.shape[0] >= npaths
            _, _, vt = np.linalg.svd(constraints, full_matrices=not economy)
            kernel = vt[rank:]
        basis = _gram_schmidt(_rref(kernel))
        for i in range(basis.shape[0]):  # first |coeff| > tol in lex order positive
            lead = np.flatnonzero(np.abs(basis[i]) > self.tol)
            if lead.size and basis[i, lead[0]] < 0:
                basis[i] = -basis[i]
        gram = basis @ basis.T
        gram_res = float(np.max(np.abs(gram - np.eye(basis.shape[0])))) if basis.size else 0.0
        if constraints.shape[0] and basis.size:
            ann_res = float(np.max(np.abs(constraints @ basis.T)))
        else:
            ann_res = 0.0
        return EssentialCellBasis(a, b, length, paths, basis, gram_res, ann_res)

    def _constraint_matrix(self, a: int, b: int, length: int,
                           paths: Sequence[Path]) -> np.ndarray:
        if length <= 1:
            return np.zeros((0, len(paths)))
        shorter = enumerate_paths(self.graph, self.graph.label(a),
                                  self.graph.label(b), length - 2)
        tindex = {p: i for i, p in enumerate(shorter)}
        nshort = len(shorter)
        mu = self.pf.mu
        mat = np.zeros(((length - 1) * nshort, len(paths)))
        for j, p in enumerate(paths):
            for k in range(1, length):
                if p[k - 1] == p[k + 1]:
                    w = math.sqrt(mu[p[k]] / mu[p[k - 1]])
                    row = (k - 1) * nshort + tindex[p[:k] + p[k + 2:]]
                    mat[row, j] += w
        return mat

    # -- grade bases ------------------------------------------------------

    def grade_basis(self, length: int) -> GradeBasis:
        got = self._grades.get(length)
        if got is not None:
            return got
        ml = self.max_length
        if ml is not None and length > ml + 1:
            # Grade ml+1 is computed honestly below and must come out empty;
            # an essential path of length L splits into essential paths of
            # lengths l and L-l for any 0 < l < L, so emptiness propagates to
            # every longer grade.  Enumerating the (huge) longer path spaces
            # would add nothing.
            if self.grade_basis(ml + 1).dim != 0:
                raise NumericError(
                    f"grade {ml + 1} unexpectedly nonzero on {self.graph.name}"
                )
            empty = GradeBasis(length, (), (), 0,
                               np.zeros(0, dtype=int), np.zeros(0, dtype=int))
            with self._lock:
                return self._grades.setdefault(length, empty)
        cells = []
        offsets = []
        dim = 0
        for a in range(self.graph.n_vertices):
            for b in range(self.graph.n_vertices):
                cell = self._cell(a, b, length)
                if cell.dim:
                    cells.append(cell)
                    offsets.append(dim)
                    dim += cell.dim
        starts = np.zeros(dim, dtype=int)
        ends = np.zeros(dim, dtype=int)
        for cell, off in zip(cells, offsets):
            starts[off:off + cell.dim] = cell.start
            ends[off:off + cell.dim] = cell.end
        gb = GradeBasis(length, tuple(cells), tuple(offsets), dim, starts, ends)
        with self._lock:
            return self._grades.setdefault(length, gb)

    def dims(self, max_length: Optional[int] = None) -> list[int]:
        """Dimensions of the graded components, length 0 up to the last
        nonzero one.  Each entry is an honest kernel computation; on graphs
        without a Coxeter number a cap must be supplied because the list
        never terminates."""
        if max_length is None:
            if self.pf.kappa is None:
                raise InputError(
                    "graph has spectral radius >= 2; dims needs an explicit "
                    "max_length cap"
                )
            cap = self.pf.kappa - 1
        else:
            if max_length < 0:
                raise InputError("max_length must be >= 0")
            cap = max_length
        out: list[int] = []
        for length in range(cap + 1):
            d = self.grade_basis(length).dim
            if d == 0:
                break
            out.append(d)
        return out

    def warm(self, lengths: Sequence[int], jobs: int = 1) -> None:
        """Precompute all cell bases for the given lengths; with jobs > 1
        cells are computed in parallel (results are identical to serial)."""
        work = [
            (a, b, l)
            for l in lengths
            for a in range(self.graph.n_vertices)
            for b in range(self.graph.n_vertices)
        ]
        if jobs <= 1:
            for a, b, l in work:
                self._cell(a, b, l)
            return
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(lambda t: self._cell(*t), work))

    # -- projector and graded product ------------------------------------

    def project(self, p: PathVector) -> PathVector:
        """Orthogonal projection onto the essential subspace, cell by cell."""
        nbrs = self.graph.neighbors
        nverts = self.graph.n_vertices
        by_cell: dict[tuple[int, int, int], dict[Path, float]] = {}
        for pp, c in p.items():
            if (not all(0 <= x < nverts for x in pp)
                    or any(y not in nbrs[x] for x, y in zip(pp, pp[1:]))):
                raise InputError(
                    f"term {pp} is not an elementary path of the graph"
                )
            by_cell.setdefault((pp[0], pp[-1], path_length(pp)), {})[pp] = c
        out = PathVector()
        for (a, b, length), terms in by_cell.items():
            cell = self._cell(a, b, length)
            if not cell.dim:
                continue
            x = np.zeros(len(cell.paths))
            index = {q: i for i, q in enumerate(cell.paths)}
            for pp, c in terms.items():
                x[index[pp]] = c
            y = cell.coordinates.T @ (cell.coordinates @ x)
            out = out + PathVector(
                {q: y[i] for i, q in enumerate(cell.paths)}
            )
        return out

    def is_essential(self, p: PathVector) -> bool:
        return (self.project(p) - p).norm() <= self.tol * (1.0 + p.norm())

    def _ensure_essential(self, p: PathVector, who: str) -> PathVector:
        proj = self.project(p)
        if (proj - p).norm() > self.tol * (1.0 + p.norm()):
            warnings.warn(
                f"{who}: input was not essential and has been projected",
                NonEssentialInputWarning,
                stacklevel=3,
            )
        return proj

    def bullet(self, e: PathVector, f: PathVector) -> PathVector:
        """Graded product P(concat(e, f)); non-essential inputs are projected
        first (with a warning), which cannot change the result."""
        e = self._ensure_essential(e, "bullet")
        f = self._ensure_essential(f, "bullet")
        return self.project(concat(e, f))

    def unit_essential(self) -> PathVector:
        """Sum of the zero-length paths: the unit for the graded product."""
        return PathVector({(v,): 1.0 for v in range(self.graph.n_vertices)})

    # -- structure constants ---------------------------------------------

    def structure_constants(self, n: int, m: int) -> np.ndarray:
        """Tensor mul[i, j, k] = <e_k^{(n+m)}, e_i^{(n)} e_j^{(m)}> over the
        global graded bases.  Self-adjointness of the projector makes the
        concatenation inner product equal the graded-product one, so no
        projection is applied."""
        key = (n, m)
        got = self._mul.get(key)
        if got is not None:
            return got
        gn, gm, gt = self.grade_basis(n), self.grade_basis(m), self.grade_basis(n + m)
        out = np.zeros((gn.dim, gm.dim, gt.dim))
        if gt.dim:
            for c1, o1 in zip(gn.cells, gn.offsets):
                for c2, o2 in zip(gm.cells, gm.offsets):
                    if c1.end != c2.start:
                        continue
                    c3, o3 = gt.cell_at(c1.start, c2.end)
                    if c3 is None or not c3.dim:
                        continue
                    tindex = {p: i for i, p in enumerate(c3.paths)}
                    splice = np.empty((len(c1.paths), len(c2.paths)), dtype=int)
                    for i1, p1 in enumerate(c1.paths):
                        for i2, p2 in enumerate(c2.paths):
                            splice[i1, i2] = tindex[p1 + p2[1:]]
                    gathered = c3.coordinates[:, splice]  # (d3, P1, P2)
                    block = np.einsum("ip,jq,Kpq->ijK", c1.coordinates,
                                      c2.coordinates, gathered, optimize=True)
                    out[o1:o1 + c1.dim, o2:o2 + c2.dim, o3:o3 + c3.dim] = block
        out.setflags(write=False)
        with self._lock:
            return self._mul.setdefault(key, out)

    def structure_rows(self, n: int, m: int) -> tuple[dict, dict]:
        """Sparse view of the (n, m) structure tensor for joins: a map
        (i, k) -> ((K, value), ...) over nonzero rows, plus the partner map
        i -> (k, ...) of indices with some nonzero row."""
        key = (n, m)
        got = self._mul_rows.get(key)
        if got is not None:
            return got
        mul = self.structure_constants(n, m)
        rows: dict[tuple[int, int], tuple] = {}
        partners: dict[int, tuple] = {}
        if mul.shape[2]:
            nz = np.abs(mul) > 1e-15
            for i, k in zip(*np.nonzero(nz.any(axis=2))):
                ks = np.flatnonzero(nz[i, k])
                rows[(int(i), int(k))] = tuple(
                    (int(x), float(mul[i, k, x])) for x in ks
                )
            part: dict[int, list] = {}
            for i, k in rows:
                part.setdefault(i, []).append(k)
            partners = {i: tuple(sorted(ks)) for i, ks in part.items()}
        with self._lock:
            return self._mul_rows.setdefault(key, (rows, partners))

    # -- decomposition -----------------------------------------------------

    def _homogeneous_cell_of(self, e: PathVector, who: str) -> tuple[int, int, int]:
        keys = {(pp[0], pp[-1], path_length(pp)) for pp, _ in e.items()}
        if len(keys) != 1:
            raise InputError(
                f"{who} needs a vector with fixed endpoints and homogeneous "
                f"length; found {len(keys)} cells"
            )
        return keys.pop()

    def decompose(self, e: PathVector, split: int) -> Decomposition:
        """Write an essential vector of length L as a combination of graded
        products of essential paths of lengths split and L - split."""
        a, b, total = self._homogeneous_cell_of(e, "decompose")
        if not (0 < split < total):
            raise InputError(
                f"split must satisfy 0 < split < {total}, got {split}"
            )
        if not self.is_essential(e):
            raise InputError("decompose needs an essential input vector")
        entries: list[tuple[int, int, int, float]] = []
        for v in range(self.graph.n_vertices):
            left = self._cell(a, v, split)
            right = self._cell(v, b, total - split)
            if not left.dim or not right.dim:
                continue
            x = np.zeros((len(left.paths), len(right.paths)))
            for i1, p1 in enumerate(left.paths):
                for i2, p2 in enumerate(right.paths):
                    x[i1, i2] = e.coefficient(p1 + p2[1:])
            gam = np.einsum("ip,jq,pq->ij", left.coordinates,
                            right.coordinates, x, optimize=True)
            for i in range(left.dim):
                for j in range(right.dim):
                    if abs(gam[i, j]) > 1e-14:
                        entries.append((v, i, j, float(gam[i, j])))
        return Decomposition(a, b, total, split, tuple(entries))

    def reconstruct(self, d: Decomposition) -> PathVector:
        out = PathVector()
        for v, i, j, gamma in d.entries:
            left = self._cell(d.start, v, d.split).vector(i)
            right = self._cell(v, d.end, d.total_length - d.split).vector(j)
            out = out + gamma * self.bullet(left, right)
        return out

    def coproduct_paths(self, e: PathVector) -> TensorPathVector:
        """Coproduct dual to the graded product, for a homogeneous essential
        vector: the direct sum over splits of its decompositions, including
        the trivial end pieces [a] (x) e and e (x) [b]."""
        a, b, total = self._homogeneous_cell_of(e, "coproduct_paths")
        if not self.is_essential(e):
            raise InputError("coproduct_paths needs an essential input vector")
        out: dict[tuple[Path, Path], float] = {}

        def put(lv: PathVector, rv: PathVector, coeff: float):
            for p1, c1 in lv.items():
                for p2, c2 in rv.items():
                    key = (p1, p2)
                    out[key] = out.get(key, 0.0) + coeff * c1 * c2

        if total == 0:
            put(e, e, 1.0)  # [v] (x) [v]
            return TensorPathVector(out)
        put(PathVector.single((a,)), e, 1.0)
        put(e, PathVector.single((b,)), 1.0)
        for split in range(1, total):
            d = self.decompose(e, split)
            for v, i, j, gamma in d.entries:
                put(self._cell(a, v, split).vector(i),
                    self._cell(v, b, total - split).vector(j), gamma)
        return TensorPathVector(out)

    # -- star -------------------------------------------------------------

    def star_matrix(self, length: int) -> np.ndarray:
        """Orthogonal matrix of orientation reversal in the global graded
        basis: T[p, i] = <f_p, reverse(e_i)>.  Computed once per grade."""
        got = self._star.get(length)
        if got is not None:
            return got
        gb = self.grade_basis(length)
        t = np.zeros((gb.dim, gb.dim))
        for cell, off in zip(gb.cells, gb.offsets):
            target, toff = gb.cell_at(cell.end, cell.start)
            if target is None:
                continue
            tindex = {p: i for i, p in enumerate(target.paths)}
            perm = np.array([tindex[p[::-1]] for p in cell.paths], dtype=int)
            rev_coords = np.zeros((cell.dim, len(target.paths)))
            rev_coords[:, perm] = cell.coordinates
            t[toff:toff + target.dim, off:off + cell.dim] = (
                target.coordinates @ rev_coords.T
            )
        t.setflags(write=False)
        with self._lock:
            return self._star.setdefault(length, t)

    # -- persistence --------------------------------------------------------

    def cache_key(self) -> str:
        payload = json.dumps(
            {
                "format": _CACHE_FORMAT,
                "vertices": list(self.graph.vertices),
                "edges": [list(e) for e in self.graph.edges],
                "distinguished": self.graph.distinguished,
                "tol": self.tol,
                "rank_tol": self.rank_tol,
            },
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:24]

    def save_cache(self, directory) -> FsPath:
        path = FsPath(directory) / f"esspath-cells-{self.cache_key()}.json"
        with self._lock:
            cells = {
                f"{a}|{b}|{l}": {
                    "paths": [list(p) for p in cell.paths],
                    "coordinates": [list(map(float, row)) for row in cell.coordinates],
                    "gram_residual": cell.gram_residual,
                    "annihilator_residual": cell.annihilator_residual,
                }
                for (a, b, l), cell in sorted(self._cells.items())
            }
        blob = json.dumps(
            {"format": _CACHE_FORMAT, "key": self.cache_key(), "cells": cells}
        )
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(blob)
        tmp.replace(path)
        return path

    def load_cache(self, directory) -> int:
        path = FsPath(directory) / f"esspath-cells-{self.cache_key()}.json"
        if not path.exists():
            return 0
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError):
            return 0
        if data.get("format") != _CACHE_FORMAT or data.get("key") != self.cache_key():
            return 0
        loaded = 0
        for key, payload in data.get("cells", {}).items():
            a, b, l = (int(x) for x in key.split("|"))
            paths = tuple(tuple(p) for p in payload["paths"])
            rows = payload["coordinates"]
            if rows:
                coords = np.array(rows, dtype=float)
            else:
                coords = np.zeros((0, len(paths)))
            cell = EssentialCellBasis(
                a, b, l, paths, coords,
                float(payload["gram_residual"]),
                float(payload["annihilator_residual"]),
            )
            with self._lock:
                self._cells.setdefault((a, b, l), cell)
            loaded += 1
        return loaded


_SPACES: dict[Graph, EssentialSpace] = {}


def space(g: Graph) -> EssentialSpace:
    """Shared per-graph instance with default tolerances."""
    got = _SPACES.get(g)
    if got is None:
        got = _SPACES.setdefault(g, EssentialSpace(g))
    return got


def essential_basis(g: Graph, a, b, length: int) -> EssentialCellBasis:
    return space(g).cell(a, b, length)


def project(g: Graph, p: PathVector) -> PathVector:
    return space(g).project(p)


def bullet(g: Graph, e: PathVector, f: PathVector) -> PathVector:
    return space(g).bullet(e, f)


def structure_constants(g: Graph, n: int, m: int) -> np.ndarray:
    return space(g).structure_constants(n, m)


def decompose(g: Graph, e: PathVector, split: int) -> Decomposition:
    return space(g).decompose(e, split)


def dims(g: Graph, max_length: Optional[int] = None) -> list[int]:
    return space(g).dims(max_length)


def unit_essential(g: Graph) -> PathVector:
    return space(g).unit_essential()


def coproduct_paths(g: Graph, e: PathVector) -> TensorPathVector:
    return space(g).coproduct_paths(e)
