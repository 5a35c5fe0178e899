"""Essential cell bases, projector, graded product, decomposition."""

import math

import numpy as np
import pytest

from esspath import (
    EssentialSpace,
    InputError,
    NonEssentialInputWarning,
    PathVector,
    builtin_graph,
    concat,
    elementary,
    fused_matrices,
    inner,
    perron_frobenius,
    reverse_star,
    space,
)

TOL = 1e-9
S3 = math.sqrt(3)


def combo(g, *terms):
    out = PathVector()
    for coeff, labels in terms:
        out = out + elementary(g, labels, coeff)
    return out


def normalized(v):
    return v * (1.0 / v.norm())


class TestCellBases:
    def test_e6_length2_loop_cell(self, sp_e6):
        cell = sp_e6.cell(2, 2, 2)
        assert cell.dim == 2
        assert cell.gram_residual <= 1e-12
        assert cell.annihilator_residual <= 1e-10

    def test_e6_length4_loop_cell(self, sp_e6):
        assert sp_e6.cell(2, 2, 4).dim == 3

    def test_length_one_cells(self, sp_e6):
        g = sp_e6.graph
        for a in range(6):
            for b in range(6):
                cell = sp_e6.cell(g.label(a), g.label(b), 1)
                expect = 1 if b in g.neighbors[a] else 0
                assert cell.dim == expect
                if expect:
                    assert cell.vector(0) == elementary(g, [g.label(a), g.label(b)])

    def test_empty_cell(self, sp_a2):
        assert sp_a2.cell(1, 1, 1).dim == 0

    def test_sign_convention(self, sp_e6):
        for length in range(5):
            for cell in sp_e6.grade_basis(length).cells:
                for row in cell.coordinates:
                    lead = row[np.abs(row) > TOL]
                    assert lead.size == 0 or lead[0] > 0

    def test_annihilated_by_all_ck(self, sp_e6):
        from esspath import annihilate
        cell = sp_e6.cell(2, 2, 4)
        for i in range(cell.dim):
            v = cell.vector(i)
            for k in range(1, 4):
                assert annihilate(sp_e6.graph, k, v).norm() <= 1e-10

    def test_closed_form_generators_span_length2_cell(self, sp_e6):
        # the cell admits the generators  [2,3,2] - c [2,1,2]  and
        # [2,5,2] - (c/sqrt 3) [2,3,2] - (1/sqrt 3) [2,1,2],  c = sqrt(rt3-1)
        g = sp_e6.graph
        c = math.sqrt(S3 - 1)
        e1 = combo(g, (-c, [2, 1, 2]), (1.0, [2, 3, 2]))
        e2 = combo(g, (-1 / S3, [2, 1, 2]), (-c / S3, [2, 3, 2]),
                   (1.0, [2, 5, 2]))
        for v in (e1, e2):
            assert sp_e6.is_essential(v)
        assert inner(e1, e2) == pytest.approx(0.0, abs=TOL)


class TestDims:
    def test_e6(self, sp_e6):
        assert sp_e6.dims() == [6, 10, 14, 18, 20, 20, 20, 18, 14, 10, 6]
        assert sum(sp_e6.dims()) == 156

    def test_a2(self, sp_a2):
        assert sp_a2.dims() == [2, 2]

    def test_a3(self, sp_a3):
        assert sp_a3.dims() == [3, 4, 3]

    @pytest.mark.parametrize("name,cap", [
        ("A1", None), ("A2", None), ("A3", None), ("A4", None), ("A5", None),
        ("A6", None), ("A7", None), ("A8", None),
        ("D4", None), ("D5", None), ("D6", None), ("D7", None),
        ("E6", None),
        # full-length kernels on the largest diagrams cost minutes
        ("D8", 8), ("E7", 6), ("E8", 6),
    ])
    def test_kernel_dims_match_fused_sums(self, name, cap):
        # independent cross-check: SVD kernel ranks vs integer recurrence
        g = builtin_graph(name)
        sp = space(g)
        sums = fused_matrices(g).sums
        if cap is None:
            assert tuple(sp.dims()) == sums
        else:
            got = [sp.grade_basis(l).dim for l in range(cap + 1)]
            assert tuple(got) == sums[:cap + 1]

    def test_needs_cap_without_kappa(self):
        from esspath import parse_graph
        import json
        text = json.dumps({
            "vertices": ["c", "1", "2", "3", "4"],
            "edges": [["c", "1"], ["c", "2"], ["c", "3"], ["c", "4"]],
        })
        sp = EssentialSpace(parse_graph(text))
        with pytest.raises(InputError, match="cap"):
            sp.dims()
        capped = sp.dims(max_length=3)
        assert len(capped) == 4
        assert all(d > 0 for d in capped)


class TestProjector:
    def test_fixes_essential(self, sp_e6):
        cell = sp_e6.cell(2, 2, 4)
        for i in range(cell.dim):
            v = cell.vector(i)
            assert (sp_e6.project(v) - v).norm() <= 1e-10

    def test_kills_pure_backtrack_on_a2(self, sp_a2):
        g = sp_a2.graph
        v = elementary(g, [1, 2, 1])
        assert not sp_a2.project(v)

    def test_identity_on_short_paths(self, sp_e6):
        g = sp_e6.graph
        for labels in ([0], [2], [0, 1], [2, 5]):
            v = elementary(g, labels)
            assert (sp_e6.project(v) - v).norm() <= 1e-12

    def test_idempotent_and_self_adjoint(self, sp_e6):
        rng = np.random.default_rng(5)
        g = sp_e6.graph
        from esspath import enumerate_paths
        paths = enumerate_paths(g, "2", "2", 4)
        for _ in range(10):
            x = PathVector({p: rng.standard_normal() for p in paths})
            y = PathVector({p: rng.standard_normal() for p in paths})
            px = sp_e6.project(x)
            assert (sp_e6.project(px) - px).norm() <= 1e-10
            assert inner(px, y) == pytest.approx(inner(x, sp_e6.project(y)),
                                                 abs=1e-10)

    def test_commutes_with_reversal(self, sp_e6):
        rng = np.random.default_rng(6)
        from esspath import enumerate_paths
        g = sp_e6.graph
        for (a, b, l) in [("2", "2", 4), ("0", "2", 3), ("1", "5", 2)]:
            paths = enumerate_paths(g, a, b, l)
            x = PathVector({p: rng.standard_normal() for p in paths})
            assert (reverse_star(sp_e6.project(x))
                    - sp_e6.project(reverse_star(x))).norm() <= 1e-10

    def test_rejects_non_path_terms(self, sp_a2):
        with pytest.raises(InputError):
            sp_a2.project(PathVector({(0, 0): 1.0}))


class TestBullet:
    def test_unit_law(self, sp_e6):
        one = sp_e6.unit_essential()
        cell = sp_e6.cell(2, 2, 2)
        for i in range(cell.dim):
            v = cell.vector(i)
            assert (sp_e6.bullet(one, v) - v).norm() <= 1e-10
            assert (sp_e6.bullet(v, one) - v).norm() <= 1e-10

    def test_a2_nilpotents(self, sp_a2):
        g = sp_a2.graph
        r = elementary(g, [1, 2])
        l = elementary(g, [2, 1])
        for x, y in [(r, r), (l, l), (r, l), (l, r)]:
            assert not sp_a2.bullet(x, y)

    def test_grade_additive(self, sp_e6):
        g = sp_e6.graph
        out = sp_e6.bullet(elementary(g, [2, 1, 0]), elementary(g, [0, 1, 2]))
        assert out.lengths() == {4}

    def test_warns_and_projects_non_essential(self, sp_a2):
        g = sp_a2.graph
        bad = elementary(g, [1, 2, 1])  # not essential
        with pytest.warns(NonEssentialInputWarning):
            out = sp_a2.bullet(bad, elementary(g, [1]))
        assert not out

    def test_projector_identity_random(self, sp_e6):
        from esspath import enumerate_paths
        rng = np.random.default_rng(7)
        g = sp_e6.graph
        for _ in range(30):
            l1, l2 = rng.integers(0, 5, size=2)
            a, v, b = rng.integers(0, 6, size=3)
            p1s = enumerate_paths(g, g.label(a), g.label(v), int(l1))
            p2s = enumerate_paths(g, g.label(v), g.label(b), int(l2))
            if not p1s or not p2s:
                continue
            p1 = PathVector({p: rng.standard_normal() for p in p1s})
            p2 = PathVector({p: rng.standard_normal() for p in p2s})
            lhs = sp_e6.project(concat(sp_e6.project(p1), sp_e6.project(p2)))
            rhs = sp_e6.project(concat(p1, p2))
            assert (lhs - rhs).norm() <= TOL * max(1.0, rhs.norm())


# the six coefficients of the worked length-4 example: products of
# length-2 generators hitting the second basis vector of the (2 -> 2)
# length-4 cell, written in closed form
E6_LENGTH4_COEFFS = [
    ("20.02", math.sqrt(1 - 1 / S3)),
    ("e1.e1", -1 / math.sqrt(6 * S3)),
    ("e1.e2", -math.sqrt(1.5 + S3) / 3),
    ("e2.e1", -math.sqrt(-4 / 3 + 7 / (3 * S3))),
    ("e2.e2", -math.sqrt(-3 + 2 * S3) / 3),
    ("24.42", math.sqrt(1.5 - 5 / (2 * S3))),
]


def e6_closed_form_vectors(g):
    c = math.sqrt(1 + S3)
    d = math.sqrt(S3 - 1)
    e1_22 = normalized(combo(g, (-d, [2, 1, 2]), (1.0, [2, 3, 2])))
    e2_22 = normalized(combo(g, (-1.0, [2, 1, 2]), (-d, [2, 3, 2]),
                             (S3, [2, 5, 2])))
    e2_4 = normalized(combo(
        g,
        (c, [2, 1, 0, 1, 2]),
        (-1.0, [2, 1, 2, 1, 2]), (1.0, [2, 1, 2, 5, 2]),
        (S3 / 2 * d, [2, 3, 2, 1, 2]), (-S3 / 2 * d, [2, 3, 2, 5, 2]),
        (0.5 * (S3 - 1), [2, 5, 2, 1, 2]), (-0.5 * (S3 - 1), [2, 5, 2, 5, 2]),
        (d / math.sqrt(2), [2, 5, 4, 5, 2]),
    ))
    return e1_22, e2_22, e2_4


class TestE6WorkedExample:
    def test_vectors_are_essential_and_orthonormal(self, sp_e6):
        e1, e2, e4 = e6_closed_form_vectors(sp_e6.graph)
        for v in (e1, e2, e4):
            assert sp_e6.is_essential(v)
            assert v.norm() == pytest.approx(1.0, abs=1e-12)
        assert inner(e1, e2) == pytest.approx(0.0, abs=TOL)

    def test_six_product_coefficients(self, sp_e6):
        g = sp_e6.graph
        e1, e2, e4 = e6_closed_form_vectors(g)
        p20 = elementary(g, [2, 1, 0])
        p02 = elementary(g, [0, 1, 2])
        p24 = elementary(g, [2, 5, 4])
        p42 = elementary(g, [4, 5, 2])
        products = {
            "20.02": sp_e6.bullet(p20, p02),
            "e1.e1": sp_e6.bullet(e1, e1),
            "e1.e2": sp_e6.bullet(e1, e2),
            "e2.e1": sp_e6.bullet(e2, e1),
            "e2.e2": sp_e6.bullet(e2, e2),
            "24.42": sp_e6.bullet(p24, p42),
        }
        total = 0.0
        for key, expected in E6_LENGTH4_COEFFS:
            got = inner(e4, products[key])
            assert got == pytest.approx(expected, abs=TOL), key
            total += got * got
        assert total == pytest.approx(1.0, abs=TOL)

    def test_norm_identity_basis_independent(self, sp_e6):
        g = sp_e6.graph
        raw = concat(elementary(g, [2, 1, 0]), elementary(g, [0, 1, 2]))
        proj = sp_e6.project(raw)
        cell = sp_e6.cell(2, 2, 4)
        coeff_sq = sum(inner(cell.vector(k), raw) ** 2 for k in range(cell.dim))
        assert proj.norm() ** 2 == pytest.approx(coeff_sq, abs=1e-12)


class TestStructureConstants:
    def test_a2_zero_grade_products(self, sp_a2):
        mul = sp_a2.structure_constants(0, 0)
        # a_i * a_j = delta_ij a_i
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    expect = 1.0 if i == j == k else 0.0
                    assert mul[i, j, k] == pytest.approx(expect, abs=1e-12)

    def test_a2_mixed_grades(self, sp_a2):
        mul = sp_a2.structure_constants(0, 1)
        # basis order: grade 0 = (a1, a2); grade 1 = (r, l)
        assert mul[0, 0, 0] == pytest.approx(1.0)   # a1 * r = r
        assert mul[1, 0, 0] == pytest.approx(0.0)   # a2 * r = 0
        assert mul[1, 1, 1] == pytest.approx(1.0)   # a2 * l = l
        assert mul[0, 1, 1] == pytest.approx(0.0)   # a1 * l = 0

    def test_empty_target_grade(self, sp_a2):
        mul = sp_a2.structure_constants(1, 1)
        assert mul.shape == (2, 2, 0)

    def test_matches_bullet_inner(self, sp_e6):
        mul = sp_e6.structure_constants(2, 2)
        gb2 = sp_e6.grade_basis(2)
        gb4 = sp_e6.grade_basis(4)
        rng = np.random.default_rng(11)
        for _ in range(20):
            i, j = rng.integers(0, gb2.dim, size=2)
            k = int(rng.integers(0, gb4.dim))
            direct = inner(gb4.vector(k),
                           sp_e6.bullet(gb2.vector(int(i)), gb2.vector(int(j))))
            assert mul[i, j, k] == pytest.approx(direct, abs=1e-10)

    def test_endpoint_chaining_support(self, sp_e6):
        mul = sp_e6.structure_constants(1, 1)
        gb1 = sp_e6.grade_basis(1)
        gb2 = sp_e6.grade_basis(2)
        nz = np.argwhere(np.abs(mul) > 1e-12)
        for i, j, k in nz:
            assert gb1.ends[i] == gb1.starts[j]
            assert gb2.starts[k] == gb1.starts[i]
            assert gb2.ends[k] == gb1.ends[j]


class TestDecomposition:
    def test_e6_sum_squares_one(self, sp_e6):
        cell = sp_e6.cell(2, 2, 4)
        for k in range(cell.dim):
            d = sp_e6.decompose(cell.vector(k), 2)
            assert d.sum_squares == pytest.approx(1.0, abs=TOL)

    def test_intermediate_vertices_of_worked_example(self, sp_e6):
        _, _, e4 = e6_closed_form_vectors(sp_e6.graph)
        d = sp_e6.decompose(e4, 2)
        vs = {sp_e6.graph.label(v) for v, _, _, _ in d.entries}
        assert vs == {"0", "2", "4"}

    def test_invalid_split_rejected(self, sp_a2):
        r = elementary(sp_a2.graph, [1, 2])
        for split in (0, 1, 2):
            with pytest.raises(InputError):
                sp_a2.decompose(r, split)

    def test_non_essential_rejected(self, sp_a2):
        v = elementary(sp_a2.graph, [1, 2, 1])
        with pytest.raises(InputError, match="essential"):
            sp_a2.decompose(v, 1)

    def test_mixed_cells_rejected(self, sp_e6):
        g = sp_e6.graph
        v = elementary(g, [0, 1]) + elementary(g, [0, 1, 2])
        with pytest.raises(InputError, match="homogeneous"):
            sp_e6.decompose(v, 1)

    def test_reconstruction_random_a3(self, sp_a3):
        rng = np.random.default_rng(3)
        gb = sp_a3.grade_basis(2)
        for _ in range(10):
            w = rng.standard_normal(gb.dim)
            cellv = {}
            for idx in range(gb.dim):
                cell, local = gb.locate(idx)
                cellv.setdefault((cell.start, cell.end), PathVector())
            # decompose per cell to keep endpoints fixed
            for cell in gb.cells:
                vec = PathVector()
                for local in range(cell.dim):
                    vec = vec + float(rng.standard_normal()) * cell.vector(local)
                if not vec:
                    continue
                d = sp_a3.decompose(vec, 1)
                assert (sp_a3.reconstruct(d) - vec).norm() <= 1e-9
                assert d.sum_squares == pytest.approx(vec.norm() ** 2, abs=1e-9)

    def test_gamma_matches_structure_constants(self, sp_e6):
        # the decomposition coefficients are the graded product coefficients
        mul = sp_e6.structure_constants(2, 2)
        gb2 = sp_e6.grade_basis(2)
        gb4 = sp_e6.grade_basis(4)
        for k in range(gb4.dim):
            cell, local = gb4.locate(k)
            d = sp_e6.decompose(cell.vector(local), 2)
            for v, i, j, gamma in d.entries:
                lcell, loff = gb2.cell_at(cell.start, v)
                rcell, roff = gb2.cell_at(v, cell.end)
                assert mul[loff + i, roff + j, k] == pytest.approx(gamma,
                                                                   abs=1e-10)


class TestCoproductPaths:
    def test_includes_trivial_end_cuts(self, sp_e6):
        g = sp_e6.graph
        _, _, e4 = e6_closed_form_vectors(g)
        d = sp_e6.coproduct_paths(e4)
        # the (0,4) and (4,0) pieces are [2] (x) e4 and e4 (x) [2]
        for p, c in e4.items():
            assert d.coefficient((2,), p) == pytest.approx(c, abs=1e-10)
            assert d.coefficient(p, (2,)) == pytest.approx(c, abs=1e-10)

    def test_duality_with_graded_product(self, sp_e6):
        # <D(e), p (x) q> = <e, p * q> for essential p, q of matching grades
        rng = np.random.default_rng(14)
        gb2 = sp_e6.grade_basis(2)
        gb4 = sp_e6.grade_basis(4)
        for _ in range(15):
            e = gb4.vector(int(rng.integers(gb4.dim)))
            p = gb2.vector(int(rng.integers(gb2.dim)))
            q = gb2.vector(int(rng.integers(gb2.dim)))
            d = sp_e6.coproduct_paths(e)
            lhs = sum(
                c * inner(PathVector.single(p1), p) * inner(PathVector.single(p2), q)
                for (p1, p2), c in d.items()
                if len(p1) == 3 and len(p2) == 3
            )
            rhs = inner(e, sp_e6.bullet(p, q))
            assert lhs == pytest.approx(rhs, abs=1e-10)

    def test_length2_piece_matches_products(self, sp_e6):
        g = sp_e6.graph
        e1, e2, e4 = e6_closed_form_vectors(g)
        d = sp_e6.coproduct_paths(e4)
        got = sum(
            c * inner(PathVector.single(p1), e1)
            * inner(PathVector.single(p2), e2)
            for (p1, p2), c in d.items()
            if len(p1) == 3 and len(p2) == 3
        )
        assert got == pytest.approx(-math.sqrt(1.5 + S3) / 3, abs=TOL)


class TestBulletAlgebraLaws:
    def test_associative_on_random_essential_triples(self, sp_e6):
        from esspath.verify import VerifyConfig, check_bullet_associativity
        cfg = VerifyConfig(tolerance=1e-9, seed=21, samples=25)
        rep = check_bullet_associativity(sp_e6, cfg)
        assert rep.passed, rep.witness

    def test_gamma_gram_identity(self, sp_e6):
        # coefficient vectors of one cell's basis are orthonormal per split
        from esspath.verify import VerifyConfig, check_gamma_orthonormality
        cfg = VerifyConfig(tolerance=1e-9, decomposition_cap=4)
        rep = check_gamma_orthonormality(sp_e6, cfg)
        assert rep.passed, rep.witness


class TestScaleInvariance:
    def test_rescaled_mu_gives_same_space(self, e6):
        pf = perron_frobenius(e6)
        from esspath import PerronData
        scaled = PerronData(beta=pf.beta, mu=10.0 * pf.mu, kappa=pf.kappa)
        sp1 = EssentialSpace(e6)
        sp2 = EssentialSpace(e6, pf=scaled)
        for length in range(5):
            assert sp1.grade_basis(length).dim == sp2.grade_basis(length).dim
            for a in range(6):
                for b in range(6):
                    c1 = sp1._cell(a, b, length)
                    c2 = sp2._cell(a, b, length)
                    p1 = c1.coordinates.T @ c1.coordinates
                    p2 = c2.coordinates.T @ c2.coordinates
                    assert np.allclose(p1, p2, atol=TOL)


class TestCachePersistence:
    def test_roundtrip(self, tmp_path, a3):
        sp = EssentialSpace(a3)
        sp.dims()
        path = sp.save_cache(tmp_path)
        assert path.exists()
        fresh = EssentialSpace(a3)
        loaded = fresh.load_cache(tmp_path)
        assert loaded > 0
        assert fresh.dims() == sp.dims()
        for (a, b, l), cell in sp._cells.items():
            other = fresh._cells[(a, b, l)]
            assert np.array_equal(cell.coordinates, other.coordinates)

    def test_wrong_key_ignored(self, tmp_path, a3, a4):
        sp = EssentialSpace(a3)
        sp.dims()
        sp.save_cache(tmp_path)
        fresh = EssentialSpace(a4)
        assert fresh.load_cache(tmp_path) == 0


class TestParallelWarm:
    def test_jobs_independent(self, e6):
        serial = EssentialSpace(e6)
        serial.warm(range(4), jobs=1)
        parallel = EssentialSpace(e6)
        parallel.warm(range(4), jobs=4)
        assert serial._cells.keys() == parallel._cells.keys()
        for key, cell in serial._cells.items():
            assert np.array_equal(cell.coordinates,
                                  parallel._cells[key].coordinates)
