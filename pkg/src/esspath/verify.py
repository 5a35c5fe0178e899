"""Named verification checks and suites for the command-line front end.

Every check returns a CheckReport; a suite is an ordered list of check
names.  All randomness is seeded, so a suite run is deterministic for a
given graph and configuration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .endo import (
    CheckReport,
    GradedEndo,
    antipode_infeasibility,
    check_coalgebra_axioms,
    check_comonoidality,
    check_convolution_coproduct,
    check_delta_homomorphism,
    check_gram_condition,
    check_star,
    check_unit_not_grouplike,
    conv_bullet,
    truncated_paths_algebra,
    unit_endo,
)
from .errors import InputError
from .essential import EssentialSpace
from .graphs import fused_matrices
from .paths import (
    PathVector,
    concat,
    enumerate_paths,
    grouplike_coproduct,
    inner,
    reverse_star,
    tensor,
    tensor_concat,
    unit,
)


@dataclass(frozen=True)
class VerifyConfig:
    tolerance: float = 1e-9
    seed: int = 2024
    samples: int = 50
    max_length: Optional[int] = None
    decomposition_cap: int = 6
    antipode_floor: float = 0.5

    def cap(self, sp: EssentialSpace) -> int:
        if sp.max_length is not None:
            return sp.max_length if self.max_length is None \
                else min(self.max_length, sp.max_length)
        if self.max_length is None:
            raise InputError(
                "graph has spectral radius >= 2; supply a max path length cap"
            )
        return self.max_length


def _populated_cells(sp: EssentialSpace, length: int) -> list:
    return [c for c in sp.grade_basis(length).cells if c.dim]


def _random_cell_paths(sp, rng, a, b, length, max_terms=10) -> Optional[PathVector]:
    paths = enumerate_paths(sp.graph, sp.graph.label(a), sp.graph.label(b), length)
    if not paths:
        return None
    take = min(len(paths), max_terms)
    chosen = rng.choice(len(paths), size=take, replace=False)
    coeffs = rng.standard_normal(take)
    vec = PathVector({paths[int(i)]: float(c) for i, c in zip(chosen, coeffs)})
    nrm = vec.norm()
    return vec * (1.0 / nrm) if nrm > 0 else None


def _random_essential(sp, rng, a, b, length) -> Optional[PathVector]:
    cell = sp._cell(a, b, length)
    if not cell.dim:
        return None
    weights = rng.standard_normal(cell.dim)
    weights = weights / np.linalg.norm(weights)
    vec = PathVector()
    for i, w in enumerate(weights):
        vec = vec + float(w) * cell.vector(i)
    return vec


def check_pf_eigen(sp: EssentialSpace, cfg: VerifyConfig) -> CheckReport:
    """A mu = beta mu within tolerance, mu positive and 1 at the base point."""
    g, pf = sp.graph, sp.pf
    residual = float(np.max(np.abs(g.adjacency @ pf.mu - pf.beta * pf.mu)))
    ok = residual <= cfg.tolerance and pf.mu[g.distinguished] == 1.0 \
        and bool(np.all(pf.mu > 0))
    return CheckReport(
        name="perron_frobenius_residual",
        residual=residual,
        tolerance=cfg.tolerance,
        passed=ok,
        witness=f"beta={pf.beta!r}, kappa={pf.kappa}",
    )


def check_dims_vs_fused(sp: EssentialSpace, cfg: VerifyConfig) -> CheckReport:
    """Graded dimensions from kernel computations equal the entry sums of the
    fused matrices, as exact integers.  An explicit cap compares the prefix
    only (full-length kernels on the largest diagrams are expensive)."""
    sums = fused_matrices(sp.graph, sp.tol).sums
    if cfg.max_length is None:
        kernel_dims = tuple(sp.dims())
        expected = sums
        scope = "full range"
    else:
        cap = min(cfg.max_length, len(sums) - 1)
        kernel_dims = tuple(sp.grade_basis(l).dim for l in range(cap + 1))
        expected = sums[:cap + 1]
        scope = f"lengths 0..{cap}"
    mismatch = 0 if kernel_dims == expected else 1
    return CheckReport(
        name="dims_vs_fused_matrices",
        residual=float(mismatch),
        tolerance=0.0,
        passed=mismatch == 0,
        witness=f"{scope}: kernel {kernel_dims}, fused {expected}",
    )


def check_projector_identity(sp: EssentialSpace, cfg: VerifyConfig,
                             pairs: Optional[int] = None) -> CheckReport:
    """P(P(p1) P(p2)) = P(p1 p2) on random homogeneous path vectors."""
    rng = np.random.default_rng(cfg.seed)
    cap = cfg.cap(sp)
    n = sp.graph.n_vertices
    count = pairs if pairs is not None else cfg.samples
    worst = 0.0
    done = 0
    while done < count:
        l1 = int(rng.integers(0, cap + 1))
        l2 = int(rng.integers(0, cap + 1 - l1)) if cap - l1 >= 0 else 0
        a, v, b = (int(rng.integers(n)) for _ in range(3))
        p1 = _random_cell_paths(sp, rng, a, v, l1)
        p2 = _random_cell_paths(sp, rng, v, b, l2)
        if p1 is None or p2 is None:
            continue
        lhs = sp.project(concat(sp.project(p1), sp.project(p2)))
        rhs = sp.project(concat(p1, p2))
        worst = max(worst, (lhs - rhs).norm())
        done += 1
    return CheckReport(
        name="projector_identity",
        residual=worst,
        tolerance=cfg.tolerance,
        passed=worst <= cfg.tolerance,
        witness=f"{count} random homogeneous pairs",
    )


def check_bullet_associativity(sp: EssentialSpace, cfg: VerifyConfig) -> CheckReport:
    """(e * f) * h = e * (f * h) on random essential triples."""
    rng = np.random.default_rng(cfg.seed + 1)
    cap = cfg.cap(sp)
    n = sp.graph.n_vertices
    worst = 0.0
    done = 0
    attempts = 0
    while done < cfg.samples and attempts < cfg.samples * 40:
        attempts += 1
        l1 = int(rng.integers(0, cap + 1))
        l2 = int(rng.integers(0, cap + 1 - l1))
        l3 = int(rng.integers(0, cap + 1 - l1 - l2))
        vs = [int(rng.integers(n)) for _ in range(4)]
        e = _random_essential(sp, rng, vs[0], vs[1], l1)
        f = _random_essential(sp, rng, vs[1], vs[2], l2)
        h = _random_essential(sp, rng, vs[2], vs[3], l3)
        if e is None or f is None or h is None:
            continue
        lhs = sp.bullet(sp.bullet(e, f), h)
        rhs = sp.bullet(e, sp.bullet(f, h))
        worst = max(worst, (lhs - rhs).norm())
        done += 1
    return CheckReport(
        name="bullet_associativity",
        residual=worst,
        tolerance=cfg.tolerance,
        passed=worst <= cfg.tolerance and done == cfg.samples,
        witness=f"{done} random essential triples",
    )


def check_bullet_unit(sp: EssentialSpace, cfg: VerifyConfig) -> CheckReport:
    """The sum of zero-length paths is a two-sided unit for the graded
    product."""
    rng = np.random.default_rng(cfg.seed + 2)
    cap = cfg.cap(sp)
    n = sp.graph.n_vertices
    one = sp.unit_essential()
    worst = 0.0
    done = 0
    attempts = 0
    while done < cfg.samples and attempts < cfg.samples * 40:
        attempts += 1
        length = int(rng.integers(0, cap + 1))
        a, b = int(rng.integers(n)), int(rng.integers(n))
        e = _random_essential(sp, rng, a, b, length)
        if e is None:
            continue
        worst = max(worst, (sp.bullet(one, e) - e).norm(),
                    (sp.bullet(e, one) - e).norm())
        done += 1
    return CheckReport(
        name="bullet_unit",
        residual=worst,
        tolerance=cfg.tolerance,
        passed=worst <= cfg.tolerance,
        witness=f"{done} samples",
    )


def check_projector_star_commute(sp: EssentialSpace, cfg: VerifyConfig) -> CheckReport:
    """Orientation reversal commutes with the essential projector."""
    rng = np.random.default_rng(cfg.seed + 3)
    cap = cfg.cap(sp)
    n = sp.graph.n_vertices
    worst = 0.0
    done = 0
    while done < cfg.samples:
        length = int(rng.integers(0, cap + 1))
        a, b = int(rng.integers(n)), int(rng.integers(n))
        p = _random_cell_paths(sp, rng, a, b, length)
        if p is None:
            continue
        worst = max(worst, (reverse_star(sp.project(p))
                            - sp.project(reverse_star(p))).norm())
        done += 1
    return CheckReport(
        name="projector_star_commute",
        residual=worst,
        tolerance=cfg.tolerance,
        passed=worst <= cfg.tolerance,
        witness=f"{cfg.samples} samples",
    )


def check_decomposition(sp: EssentialSpace, cfg: VerifyConfig,
                        cap: Optional[int] = None,
                        recon_tol: Optional[float] = None,
                        norm_tol: Optional[float] = None) -> CheckReport:
    """Every canonical basis vector decomposes through every split with unit
    coefficient-square sum and exact reconstruction."""
    lmax = min(cfg.cap(sp), cap if cap is not None else cfg.decomposition_cap)
    recon_tol = recon_tol if recon_tol is not None else 1e-8
    norm_tol = norm_tol if norm_tol is not None else cfg.tolerance
    worst_recon = 0.0
    worst_norm = 0.0
    count = 0
    for total in range(2, lmax + 1):
        for cell in _populated_cells(sp, total):
            for k in range(cell.dim):
                e = cell.vector(k)
                for split in range(1, total):
                    d = sp.decompose(e, split)
                    worst_norm = max(worst_norm, abs(d.sum_squares - 1.0))
                    worst_recon = max(worst_recon,
                                      (sp.reconstruct(d) - e).norm())
                    count += 1
    passed = worst_recon <= recon_tol and worst_norm <= norm_tol
    return CheckReport(
        name="decomposition_lemma",
        residual=max(worst_recon, worst_norm),
        tolerance=max(recon_tol, norm_tol),
        passed=passed,
        witness=(
            f"{count} (vector, split) pairs up to length {lmax}; "
            f"reconstruction {worst_recon:.3e} (tol {recon_tol:g}), "
            f"norm rule {worst_norm:.3e} (tol {norm_tol:g})"
        ),
    )


def check_gamma_orthonormality(sp: EssentialSpace, cfg: VerifyConfig,
                               cap: Optional[int] = None) -> CheckReport:
    """For each cell and split, the decomposition coefficient vectors of the
    canonical basis form an orthonormal family."""
    lmax = min(cfg.cap(sp), cap if cap is not None else cfg.decomposition_cap)
    worst = 0.0
    for total in range(2, lmax + 1):
        for cell in _populated_cells(sp, total):
            for split in range(1, total):
                rows = []
                for k in range(cell.dim):
                    d = sp.decompose(cell.vector(k), split)
                    rows.append({(v, i, j): g for v, i, j, g in d.entries})
                keys = sorted({key for row in rows for key in row})
                mat = np.array([[row.get(key, 0.0) for key in keys]
                                for row in rows])
                gram = mat @ mat.T
                worst = max(worst, float(np.max(np.abs(gram - np.eye(cell.dim)))))
    return CheckReport(
        name="decomposition_gamma_orthonormality",
        residual=worst,
        tolerance=cfg.tolerance,
        passed=worst <= cfg.tolerance,
        witness=f"cells up to length {lmax}",
    )


def check_grouplike_coalgebra(sp: EssentialSpace, cfg: VerifyConfig) -> CheckReport:
    """The group-like coproduct on raw paths: coassociative, an algebra
    homomorphism, counit laws, and a non-group-like unit."""
    g = sp.graph
    rng = np.random.default_rng(cfg.seed + 4)
    cap = min(cfg.cap(sp), 3)
    n = g.n_vertices
    worst = 0.0
    for _ in range(cfg.samples):
        a, v, b = (int(rng.integers(n)) for _ in range(3))
        l1 = int(rng.integers(0, cap + 1))
        l2 = int(rng.integers(0, cap + 1))
        p = _random_cell_paths(sp, rng, a, v, l1, max_terms=4)
        q = _random_cell_paths(sp, rng, v, b, l2, max_terms=4)
        if p is None or q is None:
            continue
        dp, dq = grouplike_coproduct(p), grouplike_coproduct(q)
        worst = max(worst, (grouplike_coproduct(concat(p, q))
                            - tensor_concat(dp, dq)).norm())
        # counit law (id x eps) Delta = id
        back = PathVector()
        for (p1, p2), c in dp.items():
            back = back + PathVector.single(p1, c)
        worst = max(worst, (back - p).norm())
    one = unit(g)
    gap = (grouplike_coproduct(one) - tensor(one, one)).norm()
    ok = worst <= cfg.tolerance and (gap > 0.5 or n < 2)
    return CheckReport(
        name="grouplike_coalgebra",
        residual=worst,
        tolerance=cfg.tolerance,
        passed=ok,
        witness=f"unit non-group-like gap {gap:.3f} (must exceed 0.5)",
    )


def check_concat_inner(sp: EssentialSpace, cfg: VerifyConfig) -> CheckReport:
    """<p q, p q'> = <q, q'> for an elementary prefix with matching
    endpoints."""
    g = sp.graph
    rng = np.random.default_rng(cfg.seed + 5)
    cap = cfg.cap(sp)
    n = g.n_vertices
    worst = 0.0
    done = 0
    while done < cfg.samples:
        a, v, b = (int(rng.integers(n)) for _ in range(3))
        l1 = int(rng.integers(0, cap + 1))
        l2 = int(rng.integers(0, cap + 1))
        heads = enumerate_paths(g, g.label(a), g.label(v), l1)
        if not heads:
            continue
        p = PathVector.single(heads[int(rng.integers(len(heads)))])
        q = _random_cell_paths(sp, rng, v, b, l2, max_terms=5)
        q2 = _random_cell_paths(sp, rng, v, b, l2, max_terms=5)
        if q is None or q2 is None:
            continue
        worst = max(worst, abs(inner(concat(p, q), concat(p, q2)) - inner(q, q2)))
        done += 1
    return CheckReport(
        name="concat_inner_compatibility",
        residual=worst,
        tolerance=cfg.tolerance,
        passed=worst <= cfg.tolerance,
        witness=f"{cfg.samples} samples",
    )


def check_truncated_paths(sp: EssentialSpace, cfg: VerifyConfig,
                          cap: int = 4) -> CheckReport:
    """The length-truncated concatenation algebra satisfies the Gram
    condition exactly, and cut-then-concatenate returns every elementary
    path unchanged."""
    g = sp.graph
    alg = truncated_paths_algebra(g, cap)
    gram = check_gram_condition(alg, tol=0.0)
    # each graded piece of the dual-cut coproduct must concatenate back to
    # the path it came from: coefficients <head tail, p> over the basis
    cut_fail = 0
    all_paths = {
        n: [p for a in range(g.n_vertices) for b in range(g.n_vertices)
            for p in enumerate_paths(g, g.label(a), g.label(b), n)]
        for n in range(cap + 1)
    }
    for n in range(cap + 1):
        for p in all_paths[n]:
            target = PathVector.single(p)
            for k in range(n + 1):
                recombined = PathVector()
                for head in all_paths[n - k]:
                    for tail in all_paths[k]:
                        c = inner(concat(PathVector.single(head),
                                         PathVector.single(tail)), target)
                        if c:
                            recombined = recombined + concat(
                                PathVector.single(head),
                                PathVector.single(tail)) * c
                if recombined.terms != {p: 1.0}:
                    cut_fail += 1
    residual = max(gram.residual, float(cut_fail))
    return CheckReport(
        name=f"truncated_paths_bialgebra[cap={cap}]",
        residual=residual,
        tolerance=0.0,
        passed=residual == 0.0,
        witness=(f"{gram.witness or 'all grade pairs exact'}; "
                 f"{cut_fail} cut-concat failures"),
    )


def check_conv_unit(sp: EssentialSpace, cfg: VerifyConfig) -> CheckReport:
    """The convolution unit is two-sided on random endomorphisms."""
    rng = np.random.default_rng(cfg.seed + 6)
    sizes = sp.dims(cfg.max_length)
    one = unit_endo(sp)
    worst = 0.0
    for _ in range(max(5, cfg.samples // 10)):
        blocks = {}
        for n, d in enumerate(sizes):
            if d and rng.random() < 0.6:
                blocks[n] = rng.standard_normal((d, d))
        rho = GradedEndo(sp, blocks)
        worst = max(worst, (conv_bullet(one, rho) - rho).norm(),
                    (conv_bullet(rho, one) - rho).norm())
    return CheckReport(
        name="convolution_unit",
        residual=worst,
        tolerance=cfg.tolerance,
        passed=worst <= cfg.tolerance,
    )


# ---------------------------------------------------------------------------
# suite registry


def _run_delta_hom(sp, cfg):
    return check_delta_homomorphism(sp, pairs=cfg.samples, seed=cfg.seed,
                                    tol=max(cfg.tolerance, 1e-8),
                                    max_length=cfg.max_length)


def _run_conv_coproduct(sp, cfg):
    return check_convolution_coproduct(sp, pairs=cfg.samples, seed=cfg.seed,
                                       tol=max(cfg.tolerance, 1e-8),
                                       max_length=cfg.max_length)


def _run_coalgebra(sp, cfg):
    return check_coalgebra_axioms(sp, samples=cfg.samples, seed=cfg.seed,
                                  tol=cfg.tolerance, max_length=cfg.max_length)


def _run_comonoidality(sp, cfg):
    return check_comonoidality(sp, tol=cfg.tolerance)


def _run_unit_not_grouplike(sp, cfg):
    return check_unit_not_grouplike(sp)


def _run_antipode(sp, cfg):
    return antipode_infeasibility(sp, n=1, floor=cfg.antipode_floor,
                                  max_length=cfg.max_length)


def _run_star(sp, cfg):
    return check_star(sp, pairs=cfg.samples, seed=cfg.seed, tol=cfg.tolerance,
                      max_length=cfg.max_length)


CHECKS: dict[str, Callable[[EssentialSpace, VerifyConfig], CheckReport]] = {
    "perron_frobenius": check_pf_eigen,
    "dims_vs_fused": check_dims_vs_fused,
    "projector_identity": check_projector_identity,
    "bullet_associativity": check_bullet_associativity,
    "bullet_unit": check_bullet_unit,
    "projector_star_commute": check_projector_star_commute,
    "decomposition": check_decomposition,
    "gamma_orthonormality": check_gamma_orthonormality,
    "grouplike_coalgebra": check_grouplike_coalgebra,
    "concat_inner": check_concat_inner,
    "truncated_paths": check_truncated_paths,
    "delta_homomorphism": _run_delta_hom,
    "convolution_coproduct": _run_conv_coproduct,
    "coalgebra_axioms": _run_coalgebra,
    "comonoidality": _run_comonoidality,
    "unit_not_grouplike": _run_unit_not_grouplike,
    "convolution_unit": check_conv_unit,
    "antipode": _run_antipode,
    "star": _run_star,
}

SUITES: dict[str, tuple[str, ...]] = {
    "core": ("perron_frobenius", "dims_vs_fused", "projector_identity",
             "bullet_associativity", "bullet_unit", "projector_star_commute",
             "decomposition", "gamma_orthonormality"),
    "paths": ("grouplike_coalgebra", "concat_inner", "truncated_paths"),
    "bialgebra": ("delta_homomorphism", "convolution_coproduct",
                  "coalgebra_axioms", "comonoidality", "unit_not_grouplike",
                  "convolution_unit"),
    "antipode": ("antipode",),
    "star": ("star",),
}
SUITES["all"] = (SUITES["core"] + SUITES["paths"] + SUITES["bialgebra"]
                 + SUITES["antipode"] + SUITES["star"])


def run_suite(sp: EssentialSpace, suite: str, cfg: VerifyConfig) -> list[CheckReport]:
    names = SUITES.get(suite)
    if names is None:
        if suite in CHECKS:
            names = (suite,)
        else:
            raise InputError(
                f"unknown suite {suite!r}; choose one of "
                f"{', '.join(sorted(SUITES))} or a single check name"
            )
    reports = []
    for name in names:
        if name == "dims_vs_fused" and sp.pf.kappa is None:
            continue  # no fused matrices without a Coxeter number
        if name == "antipode" and sp.grade_basis(1).dim < 1:
            continue  # the obstruction argument needs a populated grade 1
        if name == "unit_not_grouplike" and sp.graph.n_vertices < 2:
            continue  # on one vertex the unit IS group-like
        reports.append(CHECKS[name](sp, cfg))
    return reports
