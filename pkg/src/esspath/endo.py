"""Grade-preserving endomorphisms of the essential path space.

The space B = (+)_n End(E_n) carries three interacting structures: the
blockwise composition product, the graded convolution product built from
the graded product on essential paths, and the coproduct dual to
composition.  Together they form a weak bialgebra: the coproduct is an
algebra homomorphism for the convolution product exactly when the Gram
matrices of the structure constants are the identity, the unit is not
group-like, comonoidality holds, and no antipode can exist (verified here
as a least-squares infeasibility).

Coefficients are stored over the canonical essential bases, so composition
is a plain blockwise matrix product and the coproduct is a literal basis
sum.  With orthonormal bases and real scalars, the pairing that identifies
a vector with a functional is just the transpose of coefficient positions;
block entry [i][j] means e_i (x) (dual of e_j) throughout, and no separate
dualization object is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .errors import InputError
from .essential import EssentialSpace, space
from .graphs import Graph
from .paths import Path, enumerate_paths

_CUT = 1e-15

SpaceLike = Union[Graph, EssentialSpace]


def as_space(g: SpaceLike) -> EssentialSpace:
    return g if isinstance(g, EssentialSpace) else space(g)


# ---------------------------------------------------------------------------
# graded endomorphisms


class GradedEndo:
    """Element of the graded endomorphism algebra, stored as one coefficient
    matrix per length over the canonical essential basis.  Entry [i][j] of
    block n is the coefficient of e_i (x) e^j."""

    __slots__ = ("space", "blocks")

    def __init__(self, sp: EssentialSpace, blocks: dict[int, np.ndarray]):
        self.space = sp
        clean: dict[int, np.ndarray] = {}
        for n, mat in blocks.items():
            mat = np.asarray(mat, dtype=float)
            d = sp.grade_basis(n).dim
            if mat.shape != (d, d):
                raise InputError(
                    f"block {n} must be {d}x{d}, got {mat.shape}"
                )
            if np.any(np.abs(mat) > _CUT):
                clean[n] = mat
        self.blocks = clean

    @classmethod
    def zero(cls, sp: EssentialSpace) -> "GradedEndo":
        return cls(sp, {})

    @classmethod
    def monomial(cls, sp: EssentialSpace, n: int, i: int, j: int,
                 coeff: float = 1.0) -> "GradedEndo":
        d = sp.grade_basis(n).dim
        mat = np.zeros((d, d))
        mat[i, j] = coeff
        return cls(sp, {n: mat})

    @classmethod
    def identity(cls, sp: EssentialSpace, lengths: Iterable[int]) -> "GradedEndo":
        """Identity blocks on the given grades: the unit for composition."""
        return cls(sp, {n: np.eye(sp.grade_basis(n).dim) for n in lengths
                        if sp.grade_basis(n).dim})

    def block(self, n: int) -> np.ndarray:
        d = self.space.grade_basis(n).dim
        return self.blocks.get(n, np.zeros((d, d)))

    def grades(self) -> list[int]:
        return sorted(self.blocks)

    def __add__(self, other: "GradedEndo") -> "GradedEndo":
        out = {n: m.copy() for n, m in self.blocks.items()}
        for n, m in other.blocks.items():
            out[n] = out.get(n, 0.0) + m
        return GradedEndo(self.space, out)

    def __sub__(self, other: "GradedEndo") -> "GradedEndo":
        return self + (other * -1.0)

    def __mul__(self, scalar: float) -> "GradedEndo":
        return GradedEndo(self.space, {n: m * scalar for n, m in self.blocks.items()})

    __rmul__ = __mul__

    def norm(self) -> float:
        return math.sqrt(sum(float(np.sum(m * m)) for m in self.blocks.values()))

    def __repr__(self) -> str:
        return f"GradedEndo(grades={self.grades()})"


def unit_endo(g: SpaceLike) -> GradedEndo:
    """Unit for the convolution product: the all-ones matrix on the
    zero-length block (sum of all [v] tensor dual [w])."""
    sp = as_space(g)
    d = sp.grade_basis(0).dim
    return GradedEndo(sp, {0: np.ones((d, d))})


def counit(r: GradedEndo) -> float:
    """Counit of the composition coproduct: the trace, block by block."""
    return sum(float(np.trace(m)) for m in r.blocks.values())


def compose(r: GradedEndo, s: GradedEndo) -> GradedEndo:
    """Blockwise matrix product (grade-preserving composition)."""
    sp = r.space
    out = {}
    for n in r.blocks.keys() & s.blocks.keys():
        out[n] = r.blocks[n] @ s.blocks[n]
    return GradedEndo(sp, out)


def conv_bullet(r: GradedEndo, s: GradedEndo) -> GradedEndo:
    """Graded convolution: on monomials, (e_i (x) e^j) * (e_k (x) e^l) =
    (e_i * e_k) (x) (e^j * e^l), expanded through the structure constants."""
    sp = r.space
    out: dict[int, np.ndarray] = {}
    for n, rn in r.blocks.items():
        for m, sm in s.blocks.items():
            mul = sp.structure_constants(n, m)
            if mul.shape[2] == 0:
                continue
            block = np.einsum("ij,kl,ikK,jlL->KL", rn, sm, mul, mul,
                              optimize=True)
            tgt = n + m
            if tgt in out:
                out[tgt] = out[tgt] + block
            else:
                out[tgt] = block
    return GradedEndo(sp, out)


def star_endo(r: GradedEndo) -> GradedEndo:
    """Orientation reversal on both tensor legs, realized per grade by the
    orthogonal change-of-basis matrix of the reversal map."""
    sp = r.space
    out = {}
    for n, mat in r.blocks.items():
        t = sp.star_matrix(n)
        out[n] = t @ mat @ t.T
    return GradedEndo(sp, out)


# ---------------------------------------------------------------------------
# sparse tensors of endomorphisms

Leg = tuple[int, int, int]  # (grade, row index, column index)


class EndoTensor:
    """Sparse tensor power of the endomorphism space.

    Terms map leg tuples ((n1,i1,j1), ..., (nk,ik,jk)) to real coefficients;
    a 2-leg instance is the codomain of the coproduct, 3-leg instances show
    up in the comonoidality identities.
    """

    __slots__ = ("space", "legs", "_terms")

    def __init__(self, sp: EssentialSpace, legs: int,
                 terms: Optional[dict[tuple[Leg, ...], float]] = None):
        self.space = sp
        self.legs = legs
        clean: dict[tuple[Leg, ...], float] = {}
        if terms:
            for key, c in terms.items():
                if abs(c) > _CUT:
                    clean[key] = float(c)
        self._terms = clean

    @classmethod
    def from_graded(cls, rho: GradedEndo) -> "EndoTensor":
        terms = {}
        for n, mat in rho.blocks.items():
            for i, j in zip(*np.nonzero(np.abs(mat) > _CUT)):
                terms[((n, int(i), int(j)),)] = float(mat[i, j])
        return cls(rho.space, 1, terms)

    def to_graded(self) -> GradedEndo:
        if self.legs != 1:
            raise InputError("only 1-leg tensors convert to GradedEndo")
        blocks: dict[int, np.ndarray] = {}
        for ((n, i, j),), c in self._terms.items():
            if n not in blocks:
                d = self.space.grade_basis(n).dim
                blocks[n] = np.zeros((d, d))
            blocks[n][i, j] += c
        return GradedEndo(self.space, blocks)

    @property
    def terms(self) -> dict[tuple[Leg, ...], float]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: "EndoTensor") -> "EndoTensor":
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0.0) + c
        return EndoTensor(self.space, self.legs, out)

    def __sub__(self, other: "EndoTensor") -> "EndoTensor":
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0.0) - c
        return EndoTensor(self.space, self.legs, out)

    def __mul__(self, scalar: float) -> "EndoTensor":
        return EndoTensor(self.space, self.legs,
                          {k: c * scalar for k, c in self._terms.items()})

    __rmul__ = __mul__

    def norm(self) -> float:
        return math.sqrt(sum(c * c for c in self._terms.values()))

    def tensor(self, other: "EndoTensor") -> "EndoTensor":
        out = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                out[k1 + k2] = out.get(k1 + k2, 0.0) + c1 * c2
        return EndoTensor(self.space, self.legs + other.legs, out)

    # -- leg operations ---------------------------------------------------

    def contract_counit(self, leg: int) -> "EndoTensor":
        """Apply the counit (trace pairing: delta_ij on a monomial) to one leg."""
        out: dict[tuple[Leg, ...], float] = {}
        for key, c in self._terms.items():
            n, i, j = key[leg]
            if i != j:
                continue
            red = key[:leg] + key[leg + 1:]
            out[red] = out.get(red, 0.0) + c
        return EndoTensor(self.space, self.legs - 1, out)

    def coproduct_leg(self, leg: int) -> "EndoTensor":
        """Apply the composition coproduct to one leg: (n,i,j) becomes the
        sum over I of (n,i,I) (x) (n,I,j)."""
        out: dict[tuple[Leg, ...], float] = {}
        for key, c in self._terms.items():
            n, i, j = key[leg]
            for cap in range(self.space.grade_basis(n).dim):
                new = key[:leg] + ((n, i, cap), (n, cap, j)) + key[leg + 1:]
                out[new] = out.get(new, 0.0) + c
        return EndoTensor(self.space, self.legs + 1, out)

    def bullet(self, other: "EndoTensor") -> "EndoTensor":
        """Legwise convolution product of two tensors of equal leg count."""
        if self.legs != other.legs:
            raise InputError("leg counts differ")
        sp = self.space
        rows_cache: dict[tuple[int, int], tuple[dict, dict]] = {}

        def rows(n, m):
            got = rows_cache.get((n, m))
            if got is None:
                got = rows_cache.setdefault((n, m), sp.structure_rows(n, m))
            return got

        # bucket the right factor by its first leg, then only visit
        # candidates whose first leg can multiply ours to something nonzero
        buckets: dict[Leg, list[tuple[tuple[Leg, ...], float]]] = {}
        grades0: set[int] = set()
        for key2, c2 in other._terms.items():
            buckets.setdefault(key2[0], []).append((key2, c2))
            grades0.add(key2[0][0])

        out: dict[tuple[Leg, ...], float] = {}
        for key1, c1 in self._terms.items():
            n0, i0, j0 = key1[0]
            for m0 in grades0:
                _, partners = rows(n0, m0)
                for k0 in partners.get(i0, ()):
                    for l0 in partners.get(j0, ()):
                        for key2, c2 in buckets.get((m0, k0, l0), ()):
                            self._accumulate_bullet(out, key1, c1, key2, c2, rows)
        return EndoTensor(sp, self.legs, out)

    @staticmethod
    def _accumulate_bullet(out, key1, c1, key2, c2, rows):
        partial: list[tuple[tuple[Leg, ...], float]] = [((), c1 * c2)]
        for (n, i, j), (m, k, l) in zip(key1, key2):
            sparse, _ = rows(n, m)
            left = sparse.get((i, k))
            if not left:
                return
            right = sparse.get((j, l))
            if not right:
                return
            grade = n + m
            options = [
                ((grade, kk, ll), vi * vj)
                for kk, vi in left
                for ll, vj in right
            ]
            partial = [
                (acc + (leg,), c * oc)
                for acc, c in partial
                for leg, oc in options
            ]
        for acc, c in partial:
            out[acc] = out.get(acc, 0.0) + c

    def compose_legwise(self, other: "EndoTensor") -> "EndoTensor":
        """Legwise composition product: matrix-unit contraction per leg."""
        if self.legs != other.legs:
            raise InputError("leg counts differ")
        buckets: dict[tuple[int, int], list[tuple[tuple[Leg, ...], float]]] = {}
        for key2, c2 in other._terms.items():
            n, k, _ = key2[0]
            buckets.setdefault((n, k), []).append((key2, c2))
        out: dict[tuple[Leg, ...], float] = {}
        for key1, c1 in self._terms.items():
            n0, _, j0 = key1[0]
            for key2, c2 in buckets.get((n0, j0), ()):
                legs_out = []
                for (n, i, j), (m, k, l) in zip(key1, key2):
                    if n != m or j != k:
                        legs_out = None
                        break
                    legs_out.append((n, i, l))
                if legs_out is not None:
                    acc = tuple(legs_out)
                    out[acc] = out.get(acc, 0.0) + c1 * c2
        return EndoTensor(self.space, self.legs, out)

    def star(self) -> "EndoTensor":
        """Orientation reversal on every leg (densified per grade profile)."""
        sp = self.space
        dense = self.dense_blocks()
        out: dict[tuple[Leg, ...], float] = {}
        for profile, arr in dense.items():
            for t, n in enumerate(profile):
                tmat = sp.star_matrix(n)
                arr = np.moveaxis(arr, (2 * t, 2 * t + 1), (0, 1))
                arr = np.einsum("pi,qj,ij...->pq...", tmat, tmat, arr,
                                optimize=True)
                arr = np.moveaxis(arr, (0, 1), (2 * t, 2 * t + 1))
            idx = np.argwhere(np.abs(arr) > _CUT)
            for flat in idx:
                key = tuple(
                    (profile[t], int(flat[2 * t]), int(flat[2 * t + 1]))
                    for t in range(self.legs)
                )
                out[key] = out.get(key, 0.0) + float(arr[tuple(flat)])
        return EndoTensor(sp, self.legs, out)

    def dense_blocks(self) -> dict[tuple[int, ...], np.ndarray]:
        """Group terms by the tuple of leg grades into dense arrays of shape
        (d1, d1, d2, d2, ...)."""
        sp = self.space
        out: dict[tuple[int, ...], np.ndarray] = {}
        for key, c in self._terms.items():
            profile = tuple(n for n, _, _ in key)
            if profile not in out:
                shape = []
                for n in profile:
                    d = sp.grade_basis(n).dim
                    shape.extend((d, d))
                out[profile] = np.zeros(tuple(shape))
            flat = tuple(x for _, i, j in key for x in (i, j))
            out[profile][flat] += c
        return out

    def __repr__(self) -> str:
        return f"EndoTensor(legs={self.legs}, terms={len(self._terms)})"


def coproduct(r: GradedEndo) -> EndoTensor:
    """Composition coproduct: block entry [i][j] of grade n becomes the sum
    over the grade-n basis of (n,i,I) (x) (n,I,j)."""
    sp = r.space
    terms: dict[tuple[Leg, ...], float] = {}
    for n, mat in r.blocks.items():
        d = sp.grade_basis(n).dim
        for i, j in zip(*np.nonzero(np.abs(mat) > _CUT)):
            c = float(mat[i, j])
            for cap in range(d):
                key = ((n, int(i), cap), (n, cap, int(j)))
                terms[key] = terms.get(key, 0.0) + c
    return EndoTensor(sp, 2, terms)


def convolution_coproduct(r: GradedEndo) -> EndoTensor:
    """Coproduct dual to the graded product, restricted to grade-matched
    tensor factors.  On a grade-n monomial it sums, over splits s, the
    cuts (n-s, s) of both legs weighted by structure constants."""
    sp = r.space
    terms: dict[tuple[Leg, ...], float] = {}
    for n, mat in r.blocks.items():
        for s in range(n + 1):
            mul = sp.structure_constants(n - s, s)
            if mul.shape[2] == 0:
                continue
            # coeff[(i,k),(j,l)] = sum_{a,b} mat[a,b] mul[i,j,a] mul[k,l,b]
            coeff = np.einsum("ab,ija,klb->ikjl", mat, mul, mul, optimize=True)
            for i, k, j, l in np.argwhere(np.abs(coeff) > _CUT):
                key = ((n - s, int(i), int(k)), (s, int(j), int(l)))
                terms[key] = terms.get(key, 0.0) + float(coeff[i, k, j, l])
    return EndoTensor(sp, 2, terms)


# ---------------------------------------------------------------------------
# reports and checks


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one verified identity.  For ordinary checks pass means
    residual <= tolerance; names of non-existence checks state that the
    direction is flipped.  tolerance None marks a measured-only report."""

    name: str
    residual: float
    tolerance: Optional[float]
    passed: bool
    witness: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "witness": self.witness,
        }


@dataclass(frozen=True)
class GradedBasisAlgebra:
    """A graded algebra presented by orthonormal bases: per-grade dimensions
    plus a callback returning the structure-constant tensor of each grade
    pair.  Both the essential algebra and the truncated concatenation
    algebra are run through the same Gram checker."""

    label: str
    dims: dict[int, int]
    mul: Callable[[int, int], np.ndarray]


def essential_algebra(g: SpaceLike, max_length: Optional[int] = None) -> GradedBasisAlgebra:
    sp = as_space(g)
    sizes = {n: d for n, d in enumerate(sp.dims(max_length))}
    return GradedBasisAlgebra(
        label=f"essential({sp.graph.name})",
        dims=sizes,
        mul=sp.structure_constants,
    )


def truncated_paths_algebra(g: Graph, cap: int) -> GradedBasisAlgebra:
    """The concatenation algebra on all elementary paths of length <= cap,
    with the elementary paths as orthonormal basis.  Structure constants are
    exact integers: one path splices from exactly one (prefix, suffix) pair."""
    basis: dict[int, list[Path]] = {}
    for n in range(cap + 1):
        grade: list[Path] = []
        for a in range(g.n_vertices):
            for b in range(g.n_vertices):
                grade.extend(enumerate_paths(g, g.label(a), g.label(b), n))
        basis[n] = sorted(grade)
    index = {n: {p: i for i, p in enumerate(ps)} for n, ps in basis.items()}

    def mul(n: int, k: int) -> np.ndarray:
        tgt = basis.get(n + k, [])
        out = np.zeros((len(basis[n]), len(basis[k]), len(tgt)))
        if tgt:
            tidx = index[n + k]
            for i, p in enumerate(basis[n]):
                for j, q in enumerate(basis[k]):
                    if p[-1] == q[0]:
                        out[i, j, tidx[p + q[1:]]] = 1.0
        return out

    return GradedBasisAlgebra(
        label=f"truncated-paths({g.name}, cap={cap})",
        dims={n: len(ps) for n, ps in basis.items() if ps},
        mul=mul,
    )


def gram_condition_residual(alg: GradedBasisAlgebra) -> tuple[float, Optional[tuple[int, int]]]:
    """Worst deviation of sum_{IJ} m_{IJ}^K m_{IJ}^L from delta^{KL} over all
    grade pairs whose target grade is populated."""
    worst = 0.0
    worst_pair: Optional[tuple[int, int]] = None
    for n in sorted(alg.dims):
        for k in sorted(alg.dims):
            dt = alg.dims.get(n + k, 0)
            if dt == 0:
                continue
            mul = alg.mul(n, k)
            gram = np.einsum("ijK,ijL->KL", mul, mul, optimize=True)
            res = float(np.max(np.abs(gram - np.eye(dt))))
            if res > worst:
                worst, worst_pair = res, (n, k)
    return worst, worst_pair


def check_gram_condition(alg: GradedBasisAlgebra, tol: float = 1e-8) -> CheckReport:
    residual, pair = gram_condition_residual(alg)
    return CheckReport(
        name=f"gram_condition[{alg.label}]",
        residual=residual,
        tolerance=tol,
        passed=residual <= tol,
        witness=None if pair is None else f"worst grade pair {pair}",
    )


def _monomial_pairs(sp: EssentialSpace, rng: np.random.Generator, count: int,
                    max_total: Optional[int] = None):
    """Random monomial pairs ((n,i,j), (m,k,l)) with populated grades."""
    sizes = sp.dims(max_total)
    grades = [n for n, d in enumerate(sizes) if d > 0]
    out = []
    for _ in range(count):
        n = int(rng.choice(grades))
        m = int(rng.choice([g for g in grades if g + n < len(sizes)] or grades))
        dn, dm = sizes[n], sizes[m]
        out.append(((n, int(rng.integers(dn)), int(rng.integers(dn))),
                    (m, int(rng.integers(dm)), int(rng.integers(dm)))))
    return out


def check_delta_homomorphism(g: SpaceLike, pairs: int = 100, seed: int = 7,
                             tol: float = 1e-8,
                             max_length: Optional[int] = None) -> CheckReport:
    """Homomorphism property of the composition coproduct for the graded
    convolution: the Gram condition over every grade pair, plus direct
    random-monomial spot checks of Delta(r * s) = Delta(r) (* x *) Delta(s)."""
    sp = as_space(g)
    gram_res, worst_pair = gram_condition_residual(essential_algebra(sp, max_length))
    rng = np.random.default_rng(seed)
    spot = 0.0
    for (n, i, j), (m, k, l) in _monomial_pairs(sp, rng, pairs, max_length):
        mul = sp.structure_constants(n, m)
        dt = mul.shape[2]
        if dt == 0:
            lhs_zero = conv_bullet(GradedEndo.monomial(sp, n, i, j),
                                   GradedEndo.monomial(sp, m, k, l)).norm()
            spot = max(spot, lhs_zero)
            continue
        # lhs[K,I,Ip,L] of Delta(rho * rho'); the middle legs carry delta_{I,Ip}
        lhs = np.einsum("K,L,Ii->KIiL", mul[i, k], mul[j, l], np.eye(dt),
                        optimize=True)
        dual_gram = np.einsum("ABQ,ABR->QR", mul, mul, optimize=True)
        rhs = np.einsum("P,QR,S->PQRS", mul[i, k], dual_gram, mul[j, l],
                        optimize=True)
        spot = max(spot, float(np.max(np.abs(lhs - rhs))))
    residual = max(gram_res, spot)
    return CheckReport(
        name="delta_homomorphism[bullet]",
        residual=residual,
        tolerance=tol,
        passed=residual <= tol,
        witness=(
            f"gram residual {gram_res:.3e} (worst pair {worst_pair}), "
            f"{pairs} monomial spot checks max {spot:.3e}"
        ),
    )


def check_convolution_coproduct(g: SpaceLike, pairs: int = 100, seed: int = 11,
                                tol: float = 1e-8,
                                max_length: Optional[int] = None) -> CheckReport:
    """Dual reading of the compatibility: the coproduct built from the graded
    product is an algebra homomorphism for composition."""
    sp = as_space(g)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for (n, i, j), (m, k, l) in _monomial_pairs(sp, rng, pairs, max_length):
        rho = GradedEndo.monomial(sp, n, i, j)
        sig = GradedEndo.monomial(sp, m, k, l)
        lhs = convolution_coproduct(compose(rho, sig))
        rhs = convolution_coproduct(rho).compose_legwise(convolution_coproduct(sig))
        worst = max(worst, (lhs - rhs).norm())
    return CheckReport(
        name="convolution_coproduct_homomorphism[compose]",
        residual=worst,
        tolerance=tol,
        passed=worst <= tol,
        witness=f"{pairs} monomial spot checks",
    )


def counit_weak_multiplicativity_residual(g: SpaceLike, max_grade: int = 1,
                                          index_cap: int = 3) -> float:
    """Largest deviation of eps(x * y * z) from the split forms
    sum eps(x y_(1)) eps(y_(2) z), scanned over small monomial triples.
    This identity genuinely fails here, so the value is informational."""
    sp = as_space(g)
    sizes = [sp.grade_basis(n).dim for n in range(max_grade + 1)]
    monos = [
        (n, i, j)
        for n in range(max_grade + 1)
        for i in range(min(sizes[n], index_cap))
        for j in range(min(sizes[n], index_cap))
    ]
    worst = 0.0
    for n, i, j in monos:
        for m, k, l in monos:
            m_nm = sp.structure_constants(n, m)
            for s, p, q in monos:
                m_ts = sp.structure_constants(n + m, s)
                if m_ts.shape[2]:
                    full = float((m_nm[i, k] @ m_ts[:, p, :])
                                 @ (m_nm[j, l] @ m_ts[:, q, :]))
                else:
                    full = 0.0
                m_ms = sp.structure_constants(m, s)
                if m_ms.shape[2]:
                    # eps(x y_(1)) eps(y_(2) z) summed over the middle index
                    split1 = float((m_nm[j] @ m_nm[i, k])
                                   @ (m_ms[:, p, :] @ m_ms[l, q]))
                    # the flipped Sweedler order
                    split2 = float((m_nm[i] @ m_nm[j, l])
                                   @ (m_ms[:, q, :] @ m_ms[k, p]))
                else:
                    split1 = split2 = 0.0
                worst = max(worst, abs(full - split1), abs(full - split2))
    return worst


def check_comonoidality(g: SpaceLike, tol: float = 1e-9) -> CheckReport:
    """Both comonoidality identities for the unit, by explicit triple-tensor
    expansion; the counit weak-multiplicativity residual is measured and
    reported in the witness without asserting a direction."""
    sp = as_space(g)
    one = unit_endo(sp)
    d1 = coproduct(one)
    d2 = d1.coproduct_leg(0)
    one_t = EndoTensor.from_graded(one)
    left = d1.tensor(one_t).bullet(one_t.tensor(d1))
    right = one_t.tensor(d1).bullet(d1.tensor(one_t))
    res_left = (d2 - left).norm()
    res_right = (d2 - right).norm()
    weak = counit_weak_multiplicativity_residual(sp)
    residual = max(res_left, res_right)
    return CheckReport(
        name="comonoidality",
        residual=residual,
        tolerance=tol,
        passed=residual <= tol,
        witness=(
            f"left {res_left:.3e}, right {res_right:.3e}; counit weak "
            f"multiplicativity measured residual {weak:.3e} (not asserted)"
        ),
    )


def check_unit_not_grouplike(g: SpaceLike, floor: float = 0.5) -> CheckReport:
    """Delta(1) differs from 1 (x) 1: pass means the residual EXCEEDS the
    floor (weak bialgebra, not a bialgebra)."""
    sp = as_space(g)
    one = unit_endo(sp)
    gap = (coproduct(one) - EndoTensor.from_graded(one).tensor(
        EndoTensor.from_graded(one))).norm()
    return CheckReport(
        name="unit_not_grouplike (pass iff residual > tolerance)",
        residual=gap,
        tolerance=floor,
        passed=gap > floor,
    )


def antipode_infeasibility(g: SpaceLike, n: int = 1, floor: float = 0.5,
                           monomials: Optional[Sequence[tuple[int, int]]] = None,
                           max_length: Optional[int] = None) -> CheckReport:
    """Least-squares infeasibility of the antipode axiom on grade-n inputs.

    The axiom S(x_(1)) * x_(2) = 1_(1) eps(x 1_(2)) is imposed for the chosen
    basis monomials x of grade n >= 1, with the action of S on every monomial
    (i, I) as unknowns.  The system separates exactly by the first index of x
    and by output grade (each unknown of grade m feeds only grade m+n), so
    each sub-block is solved independently; pass means the minimal residual
    stays ABOVE the floor.  A length cap only drops blocks whose right-hand
    side is structurally zero (the right side lives in grade 0), so it does
    not change the minimal residual.
    """
    sp = as_space(g)
    if n < 1:
        raise InputError("antipode obstruction needs grade n >= 1")
    dn = sp.grade_basis(n).dim
    if dn < 1:
        raise InputError(f"grade {n} is empty on {sp.graph.name}")
    mono = list(monomials) if monomials is not None else [
        (i, j) for i in range(dn) for j in range(dn)
    ]
    for i, j in mono:
        if not (0 <= i < dn and 0 <= j < dn):
            raise InputError(f"monomial index {(i, j)} out of range for grade {n}")

    # right-hand sides: rhs_{ij} = sum over Delta(1) terms (t1, t2) of
    # t1 * eps(rho_ij [conv] t2); computed from the machinery, no shortcut
    rhs: dict[tuple[int, int], GradedEndo] = {}
    one_terms = coproduct(unit_endo(sp)).terms
    for i, j in mono:
        rho = GradedEndo.monomial(sp, n, i, j)
        acc = GradedEndo.zero(sp)
        for ((g1, v, x), (g2, x2, w)), c in one_terms.items():
            eps = counit(conv_bullet(rho, GradedEndo.monomial(sp, g2, x2, w)))
            if abs(eps) > _CUT:
                acc = acc + GradedEndo.monomial(sp, g1, v, x, c * eps)
        rhs[(i, j)] = acc

    sizes = sp.dims(max_length)
    residual_sq = 0.0
    unreachable_sq = 0.0
    by_i: dict[int, list[int]] = {}
    for i, j in mono:
        by_i.setdefault(i, []).append(j)

    out_grades = sorted({0} | {m + n for m, d in enumerate(sizes) if d > 0
                              and m + n < len(sizes) and sizes[m + n] > 0})
    for gout in out_grades:
        d_out = sizes[gout] if gout < len(sizes) else 0
        if d_out == 0:
            continue
        m = gout - n
        has_cols = 0 <= m < len(sizes) and sizes[m] > 0
        if has_cols:
            mul = sp.structure_constants(m, n)  # (dm, dn, d_out)
            dm = sizes[m]
        for i, js in sorted(by_i.items()):
            b = np.concatenate([rhs[(i, j)].block(gout).ravel() for j in js])
            if not has_cols:
                residual_sq += float(b @ b)
                unreachable_sq += float(b @ b)
                continue
            if not np.any(np.abs(b) > _CUT):
                continue  # least squares attains 0 exactly (S-block = 0)
            design = np.einsum("PIK,QjL->jKLIPQ",
                               mul, mul, optimize=True)
            design = design[np.array(js)].reshape(len(js) * d_out * d_out,
                                                  dn * dm * dm)
            sol, *_ = np.linalg.lstsq(design, b, rcond=None)
            resid = design @ sol - b
            residual_sq += float(resid @ resid)
    residual = math.sqrt(residual_sq)
    return CheckReport(
        name=f"antipode_infeasibility[n={n}] (pass iff residual > tolerance)",
        residual=residual,
        tolerance=floor,
        passed=residual > floor,
        witness=(
            f"{len(mono)} grade-{n} monomial conditions; norm "
            f"{math.sqrt(unreachable_sq):.6f} of the right-hand side sits in "
            "grades no product can reach"
        ),
    )


def check_star(g: SpaceLike, pairs: int = 100, seed: int = 17,
               tol: float = 1e-9, max_length: Optional[int] = None) -> CheckReport:
    """Star suite: anti-homomorphism for the convolution product, fixed unit,
    counit invariance, compatibility with the coproduct, and per-grade
    closure of the basis under reversal (orthogonality of the star matrix)."""
    sp = as_space(g)
    sizes = sp.dims(max_length)
    closure = 0.0
    for length, d in enumerate(sizes):
        if d == 0:
            continue
        t = sp.star_matrix(length)
        closure = max(closure, float(np.max(np.abs(t @ t.T - np.eye(d)))))
    one = unit_endo(sp)
    unit_res = (star_endo(one) - one).norm()

    rng = np.random.default_rng(seed)
    anti = 0.0
    co = 0.0
    eps_res = 0.0
    for (na, ia, ja), (nb, ib, jb) in _monomial_pairs(sp, rng, pairs, max_length):
        rho = GradedEndo.monomial(sp, na, ia, ja, float(rng.standard_normal()))
        sig = GradedEndo.monomial(sp, nb, ib, jb, float(rng.standard_normal()))
        anti = max(anti, (star_endo(conv_bullet(rho, sig))
                          - conv_bullet(star_endo(sig), star_endo(rho))).norm())
        co = max(co, (coproduct(star_endo(rho)) - coproduct(rho).star()).norm())
        eps_res = max(eps_res, abs(counit(star_endo(rho)) - counit(rho)))
    residual = max(closure, unit_res, anti, co, eps_res)
    return CheckReport(
        name="star_suite",
        residual=residual,
        tolerance=tol,
        passed=residual <= tol,
        witness=(
            f"closure {closure:.3e}, unit {unit_res:.3e}, anti-homomorphism "
            f"{anti:.3e}, coproduct {co:.3e}, counit {eps_res:.3e}"
        ),
    )


def check_coalgebra_axioms(g: SpaceLike, samples: int = 25, seed: int = 19,
                           tol: float = 1e-9,
                           max_length: Optional[int] = None) -> CheckReport:
    """Coassociativity of the composition coproduct and the two counit laws,
    on random monomials."""
    sp = as_space(g)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for (n, i, j), _ in _monomial_pairs(sp, rng, samples, max_length):
        rho = GradedEndo.monomial(sp, n, i, j, float(rng.standard_normal()))
        d = coproduct(rho)
        worst = max(worst, (d.coproduct_leg(0) - d.coproduct_leg(1)).norm())
        ident = EndoTensor.from_graded(rho)
        worst = max(worst, (d.contract_counit(1) - ident).norm())
        worst = max(worst, (d.contract_counit(0) - ident).norm())
    return CheckReport(
        name="coalgebra_axioms",
        residual=worst,
        tolerance=tol,
        passed=worst <= tol,
        witness=f"{samples} random monomials",
    )
