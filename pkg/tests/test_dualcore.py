import numpy as np
import pytest

from conftest import (
    example,
    fd_gradient,
    fd_hessian,
    random_binary_feasible,
    random_instance,
    rel_err,
    sample_full_point,
    sample_reduced_point,
)
from quartdual.dualcore import (
    DualPoint,
    ReducedDualPoint,
    build_G,
    dual_derivatives,
    dual_value,
    in_S_plus,
    in_S_reduced,
    positive_part_selector,
    recover_primal,
    reduced_dual_derivatives,
    reduced_dual_value,
    sigma2_star,
)
from quartdual.errors import (
    NonPositiveSigma2,
    NotInColumnSpace,
    SingularG,
    TieAtZero,
)
from quartdual.instance import PrimalPoint, ProblemInstance, evaluate_primal
from quartdual.solver import solve

EX1_OPT = ReducedDualPoint(sigma0=-3.5, sigma1=np.array([7.0, 12.0, 6.25, 9.0, 5.0]))
EX1_FULL = DualPoint(
    sigma0=-3.5,
    sigma1=np.array([7.0, 12.0, 6.25, 9.0, 5.0]),
    sigma2=np.array([27.0, 24.0, 5.25, 10.0, 18.0]),
)


def _tiny(avals, bvals, alpha, c, f):
    inst, _ = ProblemInstance.build(avals, bvals, alpha, c, f)
    return inst


class TestBuildG:
    def test_zero_dual_point_returns_A(self):
        inst = example(7)
        g = build_G(inst, ReducedDualPoint(sigma0=0.0, sigma1=np.zeros(3)))
        np.testing.assert_array_equal(g.entries, inst.A.entries)

    def test_example1_optimum_diagonal(self):
        # a_i + sigma0 b_i + 2 sigma1_i by direct arithmetic
        a = np.array([1.0, -1.0, 1.0, 5.0, 2.0])
        b = np.array([2.0, 4.0, 1.0, 4.0, 2.0])
        expect = a + (-3.5) * b + 2.0 * EX1_OPT.sigma1
        np.testing.assert_allclose(expect, [8, 9, 10, 9, 5], atol=1e-12)
        g = build_G(example(1), EX1_OPT)
        assert g.is_diagonal
        np.testing.assert_allclose(g.diag, expect, atol=1e-12)

    def test_example7_reference_point_dense(self):
        inst = example(7)
        q = ReducedDualPoint(sigma0=-0.5, sigma1=np.array([2.5, 9.75, 6.0]))
        g = build_G(inst, q)
        expect = inst.A.entries - 0.5 * inst.B.entries + 2.0 * np.diag(q.sigma1)
        np.testing.assert_allclose(g.entries, expect, atol=1e-12)
        np.testing.assert_allclose(np.diagonal(g.entries), [5.5, 11.5, 11.0], atol=1e-12)


class TestDualValue:
    def test_example1_optimum(self):
        assert dual_value(example(1), EX1_FULL) == pytest.approx(-75.875, abs=1e-10)

    def test_hand_computed_scalar_case(self):
        inst = _tiny([2.0], [0.0], 1.0, [0.0], [-1.0])
        d = DualPoint(sigma0=-1.0, sigma1=np.array([0.0]), sigma2=np.array([1.0]))
        assert dual_value(inst, d) == pytest.approx(0.5, abs=1e-12)

    def test_example3_optimum(self):
        d = DualPoint(
            sigma0=0.0,
            sigma1=np.array([8.5, 3, 1, 3, 1, 1.5, 6, 6.5, 7, 4.5]),
            sigma2=np.array([14.5, 4, 5, 16, 7, 16.5, 23, 26.5, 10, 20.5]),
        )
        assert dual_value(example(3), d) == pytest.approx(-212.0, abs=1e-10)

    def test_nonpositive_sigma2_rejected(self):
        bad = DualPoint(sigma0=-3.5, sigma1=EX1_FULL.sigma1, sigma2=np.array([1, 1, 1, 1, 0.0]))
        with pytest.raises(NonPositiveSigma2):
            dual_value(example(1), bad)

    def test_out_of_column_space_rejected(self):
        inst = _tiny([1.0, 0.0], [0.0, 0.0], 1.0, [1.0, 1.0], [0.0, 0.0])
        d = DualPoint(sigma0=0.0, sigma1=np.zeros(2), sigma2=np.ones(2))
        with pytest.raises(NotInColumnSpace):
            dual_value(inst, d)


def _independent_hessian(inst, d):
    """Reassemble -J1 - J2 - J3 from scratch (explicit Z columns and the
    rank-one sum form of the coupling block)."""
    n = inst.n
    G = build_G(inst, d.reduced).entries
    Ginv = np.linalg.inv(G)
    x = Ginv @ inst.c
    B = inst.B.entries
    m = 2 * n + 1

    j1 = np.zeros((m, m))
    j1[0, 0] = 1.0

    cols = [B @ x] + [2.0 * x[i] * np.eye(n)[:, i] for i in range(n)]
    Z = np.column_stack(cols)  # n x (n+1)
    j2 = np.zeros((m, m))
    j2[: n + 1, : n + 1] = Z.T @ Ginv @ Z

    j3 = np.zeros((m, m))
    t = inst.f + d.sigma1
    for i in range(n):
        w = np.zeros(m)
        w[1 + i] = 1.0
        w[1 + n + i] = -t[i] / d.sigma2[i]
        j3 += np.outer(w, w) / (2.0 * d.sigma2[i])
    return -j1 - j2 - j3


class TestDualDerivatives:
    def test_gradient_vanishes_at_example1_optimum(self):
        ders = dual_derivatives(example(1), EX1_FULL)
        assert np.max(np.abs(ders.gradient)) <= 1e-8
        assert ders.value == pytest.approx(-75.875, abs=1e-10)

    def test_hessian_negative_semidefinite_at_example1_optimum(self):
        ders = dual_derivatives(example(1), EX1_FULL)
        assert np.linalg.eigvalsh(ders.hessian).max() <= 1e-10

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(7)
        for inst in (example(1), example(7), random_instance(rng, 4, diagonal=False)):
            n = inst.n
            for _ in range(5):
                d = sample_full_point(rng, inst)
                ders = dual_derivatives(inst, d)

                def val(zv):
                    return dual_value(
                        inst, DualPoint(sigma0=zv[0], sigma1=zv[1:n + 1], sigma2=zv[n + 1:])
                    )

                def grad(zv):
                    return dual_derivatives(
                        inst, DualPoint(sigma0=zv[0], sigma1=zv[1:n + 1], sigma2=zv[n + 1:])
                    ).gradient

                z = np.concatenate([[d.sigma0], d.sigma1, d.sigma2])
                assert rel_err(fd_gradient(val, z), ders.gradient) <= 1e-5
                assert rel_err(fd_hessian(grad, z), ders.hessian) <= 1e-5

    def test_hessian_equals_independent_assembly(self):
        rng = np.random.default_rng(8)
        for inst in (example(1), example(7)):
            for _ in range(5):
                d = sample_full_point(rng, inst)
                ders = dual_derivatives(inst, d)
                np.testing.assert_allclose(
                    ders.hessian, _independent_hessian(inst, d), atol=1e-9
                )

    def test_hessian_negative_semidefinite_on_cone_samples(self):
        rng = np.random.default_rng(9)
        for _ in range(30):
            inst = random_instance(rng, int(rng.integers(2, 7)), diagonal=bool(rng.integers(0, 2)))
            d = sample_full_point(rng, inst)
            ders = dual_derivatives(inst, d)
            assert np.linalg.eigvalsh(ders.hessian).max() <= 1e-9

    def test_singular_G_rejected(self):
        inst = _tiny([0.0], [0.0], 1.0, [1.0], [1.0])
        d = DualPoint(sigma0=0.0, sigma1=np.array([0.0]), sigma2=np.array([1.0]))
        with pytest.raises(SingularG):
            dual_derivatives(inst, d)


class TestReducedDual:
    def test_example4_reference_point(self):
        q = ReducedDualPoint(sigma0=-1.82, sigma1=np.array([0, 6.641, 3.051, 0.641, 4.231]))
        assert reduced_dual_value(example(4), q) == pytest.approx(-51.7281, abs=1e-3)

    def test_example8_reference_point(self):
        q = ReducedDualPoint(sigma0=0.088, sigma1=np.array([0, 1.994, 0, 0, 0.0]))
        assert reduced_dual_value(example(8), q) == pytest.approx(-32.8777, abs=1e-3)

    def test_zero_c_all_negative_f(self):
        inst = _tiny([2.0, 2.0], [1.0, 1.0], 0.5, [0.0, 0.0], [-1.0, -2.0])
        # with c = 0 and f + sigma1 < 0 the value is the pure quadratic in sigma0,
        # maximized at sigma0 = -alpha with value alpha^2 / 2
        vals = [
            reduced_dual_value(inst, ReducedDualPoint(sigma0=s, sigma1=np.zeros(2)))
            for s in np.linspace(-0.5, 1.5, 21)
        ]
        assert vals[0] == pytest.approx(0.5 * inst.alpha**2, abs=1e-12)
        assert max(vals) == vals[0]

    def test_equals_sup_over_sigma2(self):
        rng = np.random.default_rng(10)
        for _ in range(50):
            inst = random_instance(rng, int(rng.integers(1, 7)), diagonal=bool(rng.integers(0, 2)))
            q = sample_reduced_point(rng, inst)
            star = sigma2_star(inst, q)
            lifted_star = dual_value(inst, q.lifted(star))
            red = reduced_dual_value(inst, q)
            assert lifted_star == pytest.approx(red, abs=1e-10)
            # any other sigma2 does no better
            other = star * rng.uniform(0.3, 3.0, inst.n)
            assert dual_value(inst, q.lifted(other)) <= red + 1e-10

    def test_tie_at_zero_raises(self):
        inst = _tiny([2.0], [1.0], 1.0, [1.0], [-1.0])
        with pytest.raises(TieAtZero):
            reduced_dual_value(inst, ReducedDualPoint(sigma0=0.0, sigma1=np.array([1.0])))

    def test_singular_G_raises(self):
        inst = _tiny([0.0], [0.0], 1.0, [1.0], [1.0])
        with pytest.raises(SingularG):
            reduced_dual_value(inst, ReducedDualPoint(sigma0=0.5, sigma1=np.array([0.0])))


class TestReducedDerivatives:
    def test_hand_computed_scalar_case(self):
        inst = _tiny([2.0], [2.0], 1.0, [2.0], [1.0])
        _, grad = reduced_dual_derivatives(inst, ReducedDualPoint(sigma0=0.0, sigma1=np.array([1.0])))
        # 0.5 * c G^{-1} B G^{-1} c - sigma0 - alpha with G = 4
        assert grad[0] == pytest.approx(0.25 - 0.0 - 1.0, abs=1e-12)
        # x^2 - [f + sigma1 > 0] with x = 2/4
        assert grad[1] == pytest.approx(0.25 - 1.0, abs=1e-12)

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(11)
        checked = 0
        while checked < 50:
            inst = random_instance(rng, int(rng.integers(1, 7)), diagonal=bool(rng.integers(0, 2)))
            q = sample_reduced_point(rng, inst)
            val, grad = reduced_dual_derivatives(inst, q)

            def f(zv):
                return reduced_dual_value(inst, ReducedDualPoint(sigma0=zv[0], sigma1=zv[1:]))

            z = np.concatenate([[q.sigma0], q.sigma1])
            assert val == pytest.approx(f(z), abs=1e-12)
            assert rel_err(fd_gradient(f, z), grad) <= 1e-5
            checked += 1

    def test_interior_components_vanish_at_example4_optimum(self):
        rep = solve(example(4))
        _, grad = reduced_dual_derivatives(example(4), rep.dual)
        interior = rep.dual.sigma1 > 1e-7
        assert np.max(np.abs(grad[1:][interior])) <= 1e-6
        assert abs(grad[0]) <= 1e-6


class TestSigma2StarAndSelector:
    def test_example1_sigma2(self):
        np.testing.assert_allclose(
            sigma2_star(example(1), EX1_OPT), [27, 24, 5.25, 10, 18], atol=1e-12
        )

    def test_absolute_value(self):
        inst = _tiny([1.0], [1.0], 1.0, [1.0], [-3.0])
        np.testing.assert_allclose(
            sigma2_star(inst, ReducedDualPoint(sigma0=0.0, sigma1=np.array([1.0]))), [2.0]
        )

    def test_selector_basic(self):
        np.testing.assert_array_equal(positive_part_selector([3.0, -2.0]), [1.0, 0.0])

    def test_selector_example5_vector(self):
        # f + sigma1 at the instance-5 reference multipliers
        t = np.array([5.5, -16.013, 2.5, 2.0, -6.633])
        np.testing.assert_array_equal(positive_part_selector(t), [1, 0, 1, 1, 0])

    def test_selector_all_negative(self):
        np.testing.assert_array_equal(positive_part_selector([-1.0, -0.5]), [0.0, 0.0])

    def test_selector_tie(self):
        with pytest.raises(TieAtZero):
            positive_part_selector([1.0, 0.0])


class TestRecoverPrimal:
    def test_example1_optimum(self):
        p = recover_primal(example(1), EX1_OPT)
        np.testing.assert_allclose(p.x, [-1, -1, 1, 1, -1], atol=1e-12)
        np.testing.assert_array_equal(p.v, [1, 1, 1, 1, 1])

    def test_example8_reference_point(self):
        q = ReducedDualPoint(sigma0=0.088, sigma1=np.array([0, 1.994, 0, 0, 0.0]))
        p = recover_primal(example(8), q)
        np.testing.assert_allclose(p.x, [0.556, 0, 0.978, -0.174, -0.225], atol=1e-2)
        np.testing.assert_array_equal(p.v, [1, 0, 1, 1, 1])

    def test_zero_c_gives_zero_x(self):
        inst = _tiny([1.0, 2.0], [1.0, 1.0], 1.0, [0.0, 0.0], [1.0, -2.0])
        p = recover_primal(inst, ReducedDualPoint(sigma0=0.0, sigma1=np.array([0.5, 0.5])))
        np.testing.assert_array_equal(p.x, [0.0, 0.0])
        np.testing.assert_array_equal(p.v, [1.0, 0.0])

    def test_not_positive_definite_rejected(self):
        inst = _tiny([-2.0], [0.0], 1.0, [1.0], [1.0])
        with pytest.raises(SingularG):
            recover_primal(inst, ReducedDualPoint(sigma0=1.0, sigma1=np.array([0.0])))

    def test_recovered_point_relaxed_feasible_after_projection(self):
        from quartdual.instance import check_relaxed_feasible

        rng = np.random.default_rng(12)
        for k in range(1, 9):
            rep = solve(example(k))
            p = rep.primal
            assert set(np.unique(p.v)) <= {0.0, 1.0}
            assert check_relaxed_feasible(PrimalPoint(x=p.x, v=p.v), tol=1e-6)


class TestConeMembership:
    def test_example1_optimum_in_cone(self):
        assert in_S_plus(example(1), EX1_FULL)
        assert in_S_reduced(example(1), EX1_OPT)

    def test_sigma0_below_minus_alpha(self):
        d = DualPoint(sigma0=-11.0, sigma1=EX1_FULL.sigma1, sigma2=EX1_FULL.sigma2)
        assert not in_S_plus(example(1), d)

    def test_negative_sigma1(self):
        s1 = EX1_FULL.sigma1.copy()
        s1[2] = -0.1
        assert not in_S_plus(example(1), DualPoint(sigma0=-3.5, sigma1=s1, sigma2=EX1_FULL.sigma2))

    def test_reduced_excludes_kinks(self):
        inst = _tiny([2.0], [1.0], 1.0, [1.0], [-1.0])
        assert not in_S_reduced(inst, ReducedDualPoint(sigma0=0.0, sigma1=np.array([1.0])))


class TestConcavityAndDuality:
    def test_concavity_on_segments(self):
        rng = np.random.default_rng(13)
        for _ in range(40):
            inst = random_instance(rng, int(rng.integers(2, 7)), diagonal=bool(rng.integers(0, 2)))
            p = sample_full_point(rng, inst)
            qq = sample_full_point(rng, inst)
            vp, vq = dual_value(inst, p), dual_value(inst, qq)
            for lam in (0.25, 0.5, 0.75):
                mid = DualPoint(
                    sigma0=lam * p.sigma0 + (1 - lam) * qq.sigma0,
                    sigma1=lam * p.sigma1 + (1 - lam) * qq.sigma1,
                    sigma2=lam * p.sigma2 + (1 - lam) * qq.sigma2,
                )
                assert dual_value(inst, mid) >= lam * vp + (1 - lam) * vq - 1e-9

    def test_weak_duality(self):
        rng = np.random.default_rng(14)
        for _ in range(40):
            inst = random_instance(rng, int(rng.integers(1, 7)), diagonal=bool(rng.integers(0, 2)))
            q = sample_reduced_point(rng, inst)
            dual = reduced_dual_value(inst, q)
            for _ in range(5):
                x, v = random_binary_feasible(rng, inst.n)
                assert dual <= evaluate_primal(inst, PrimalPoint(x=x, v=v)) + 1e-9
