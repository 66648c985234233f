"""Certificate-backed truncated coefficients and the exact window engine."""

import itertools

import pytest

from qtorus.algebra import AlgebraConfig, Element
from qtorus.errors import InfiniteSupport, InvalidParams, NoCertificate
from qtorus.qexp import euler_coeff_truncated, qexp_product, qexp_series
from qtorus.series import LaurentSeries, RationalQ
from qtorus.verifier import (
    FactorProduct,
    QExpFactor,
    coefficient_of,
    exact_window_map,
    window_targets,
)
from qtorus.verifier import _enumerate_sublevel

from oracles import brute_force_tuples

L = LaurentSeries


def product_of(cfg, letters):
    return FactorProduct(cfg, tuple(QExpFactor(site, exp) for site, exp in letters))


class TestSingleFactors:
    def test_one_factor_reproduces_series_coefficients(self):
        cfg = AlgebraConfig(1)
        prod = product_of(cfg, [(1, 1)])
        for k in range(4):
            got, cert = coefficient_of(prod, (k,), 10)
            assert got == euler_coeff_truncated(k, 10)
            assert cert.tuples == ((k,),)
        got, cert = coefficient_of(prod, (-1,), 10)
        assert got == L({}, 10)
        assert cert.tuples == ()

    def test_inverse_factor(self):
        cfg = AlgebraConfig(1)
        prod = product_of(cfg, [(1, -1)])
        got, _ = coefficient_of(prod, (-2,), 12)
        assert got == euler_coeff_truncated(2, 12)

    def test_empty_product_is_identity(self):
        cfg = AlgebraConfig(2)
        prod = FactorProduct(cfg, ())
        got, cert = coefficient_of(prod, (0, 0), 6)
        assert got == L({0: 1}, 6)
        got, cert = coefficient_of(prod, (1, 0), 6)
        assert got.is_zero() and not cert.feasible


class TestAgainstElementProducts:
    def test_same_site_square(self):
        # E(w) E(w) expanded two ways: certificates vs normal-ordered series
        cfg = AlgebraConfig(1)
        prod = product_of(cfg, [(1, 1), (1, 1)])
        el = qexp_product(Element.generator(cfg, 1), None, 8)
        el = el * el
        for m in range(4):
            got, _ = coefficient_of(prod, (m,), 8)
            assert got == el.coefficient((m,)).truncate(8)

    def test_adjacent_sites_mixed(self):
        cfg = AlgebraConfig(2)
        prod = product_of(cfg, [(2, 1), (1, -1)])
        e2 = qexp_product(Element.generator(cfg, 2), None, 9)
        e1 = qexp_product(Element.generator(cfg, 1, -1), None, 9)
        el = e2 * e1
        for a in range(-2, 1):
            for b in range(0, 3):
                got, _ = coefficient_of(prod, (a, b), 7)
                want = el.coefficient((a, b))
                # element product loses precision through reordering phases;
                # compare at the weaker of the two statements
                p = min(x for x in (got.precision, want.precision, 7) if x is not None)
                assert got.truncate(p) == want.truncate(p)


SEVEN_LHS = [(2, 1), (1, -1), (1, 1), (2, 1)]
SEVEN_RHS = [(1, -1), (2, 1), (1, 1)]


class TestSevenTermValues:
    def setup_method(self):
        self.cfg = AlgebraConfig(2)
        self.lhs = product_of(self.cfg, SEVEN_LHS)
        self.rhs = product_of(self.cfg, SEVEN_RHS)

    def test_constant_coefficient(self):
        want = L({0: 1, 2: 1, 4: 2}, 6)
        got_l, _ = coefficient_of(self.lhs, (0, 0), 6)
        got_r, _ = coefficient_of(self.rhs, (0, 0), 6)
        assert got_l == want and got_r == want

    def test_first_v_coefficient(self):
        want = L({1: -2, 3: -4, 5: -8}, 6)
        got_l, _ = coefficient_of(self.lhs, (0, 1), 6)
        got_r, _ = coefficient_of(self.rhs, (0, 1), 6)
        assert got_l == want and got_r == want
        assert str(want) == "-2*q^1 - 4*q^3 - 8*q^5 (mod q^6)"

    def test_certificate_contents(self):
        _, cert = coefficient_of(self.rhs, (0, 1), 6)
        assert cert.kernel_rank == 1
        assert cert.tuples == ((0, 1, 0), (1, 1, 1), (2, 1, 2))
        assert cert.max_index == 2
        assert cert.min_valuation == 1
        assert all(m > 0 for m in cert.minors)
        _, cert = coefficient_of(self.lhs, (0, 1), 6)
        assert cert.tuples == ((0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 0, 0), (1, 1, 1, 0))

    def test_full_window_equality(self):
        for target in window_targets(self.cfg, {1, 2}, 2):
            got_l, _ = coefficient_of(self.lhs, target, 10)
            got_r, _ = coefficient_of(self.rhs, target, 10)
            assert got_l == got_r, target

    def test_brute_force_tuple_sets(self):
        P = 8
        sites = [s for s, _ in SEVEN_LHS]
        signs = [e for _, e in SEVEN_LHS]
        for target in window_targets(self.cfg, {1, 2}, 2):
            _, cert = coefficient_of(self.lhs, target, P)
            tgt = {i + 1: e for i, e in enumerate(target) if e}
            blind = brute_force_tuples(signs, sites, tgt, 6)
            # blind search then the valuation filter Q < P
            keep = set()
            for ks in blind:
                phi = 0
                for i in range(len(ks)):
                    for j in range(i + 1, len(ks)):
                        if sites[i] == sites[j] + 1:
                            phi += -2 * signs[i] * signs[j] * ks[i] * ks[j]
                if sum(k * k for k in ks) + phi < P:
                    keep.add(ks)
            assert set(cert.tuples) == keep, target


class TestCertificateEdges:
    def test_uninvolved_site_must_be_zero(self):
        cfg = AlgebraConfig(3)
        prod = product_of(cfg, [(1, 1), (2, 1)])
        got, cert = coefficient_of(prod, (0, 0, 1), 8)
        assert got.is_zero() and not cert.feasible

    def test_indefinite_form_is_rejected(self):
        with pytest.raises(NoCertificate):
            _enumerate_sublevel([[1, 2], [2, 1]], [0, 0], 0, 10)
        with pytest.raises(NoCertificate):
            _enumerate_sublevel([[-1]], [0], 0, 10)

    def test_sublevel_enumeration_matches_scan(self):
        # Q(y) = 2 y0^2 + 2 y0 y1 + 3 y1^2 - y0 + c
        a = [[2, 1], [1, 3]]
        b = [-1, 0]
        for bound in (1, 5, 17):
            pts, minors = _enumerate_sublevel(a, b, 0, bound)
            assert minors == [2, 5]
            want = sorted(
                (y0, y1)
                for y0 in range(-10, 11)
                for y1 in range(-10, 11)
                if 2 * y0 * y0 + 2 * y0 * y1 + 3 * y1 * y1 - y0 < bound
            )
            assert pts == want

    def test_qpower_and_gamma(self):
        # E(-q^3 w) has x-coefficient  -q^3 * c_1
        cfg = AlgebraConfig(1)
        prod = FactorProduct(cfg, (QExpFactor(1, 1, gamma=-1, qpower=3),))
        got, _ = coefficient_of(prod, (1,), 10)
        assert got == -euler_coeff_truncated(1, 7).shift(3)


U_V_WINDOW = 3


class TestExactEngine:
    def setup_method(self):
        self.cfg = AlgebraConfig(2)
        self.u = Element.generator(self.cfg, 1)
        self.v = Element.generator(self.cfg, 2)

    def test_product_rule_same_phase(self):
        # E(u) E(v) = E(u + v)   (u v = q^2 v u)
        lhs, _ = exact_window_map([self.u, self.v], U_V_WINDOW)
        rhs, _ = exact_window_map([self.u + self.v], U_V_WINDOW)
        targets = set(lhs) | set(rhs)
        for t in sorted(targets):
            a = lhs.get(t)
            b = rhs.get(t)
            assert a is not None and b is not None and a == b, t

    def test_product_rule_uv_value(self):
        lhs, _ = exact_window_map([self.u, self.v], U_V_WINDOW)
        got = lhs[(1, 1)].to_rational_q()
        assert got == RationalQ((0, 0, 1), (1, 0, -2, 0, 1))  # q^2/(1-q^2)^2

    def test_reversed_product_rule(self):
        # E(v) E(u) = E(u + v - q^-1 u v)
        z = self.u + self.v - (self.v * self.u).scale(L({1: 1}))
        lhs, _ = exact_window_map([self.v, self.u], U_V_WINDOW)
        rhs, _ = exact_window_map([z], U_V_WINDOW)
        for t in sorted(set(lhs) | set(rhs)):
            assert lhs.get(t, None) == rhs.get(t, None), t

    def test_reversed_uv_value(self):
        lhs, _ = exact_window_map([self.v, self.u], U_V_WINDOW)
        got = lhs[(1, 1)].to_rational_q()
        assert got == RationalQ((1,), (1, 0, -2, 0, 1))  # 1/(1-q^2)^2

    def test_three_factor_splitting(self):
        # E(v) E(u) = E(u) E(-q v u) E(v)
        m = (self.v * self.u).scale(L({1: -1}))
        lhs, _ = exact_window_map([self.v, self.u], U_V_WINDOW)
        rhs, _ = exact_window_map([self.u, m, self.v], U_V_WINDOW)
        for t in sorted(set(lhs) | set(rhs)):
            assert lhs.get(t, None) == rhs.get(t, None), t

    def test_cross_engine_agreement(self):
        exact, _ = exact_window_map([self.u, self.v], 2)
        prod = product_of(self.cfg, [(1, 1), (2, 1)])
        P = 9
        for t, frac in sorted(exact.items()):
            trunc, _ = coefficient_of(prod, t, P)
            assert trunc == frac.expand(P), t

    def test_negative_exponent_rejected(self):
        with pytest.raises(InfiniteSupport):
            exact_window_map([Element.generator(self.cfg, 1, -1)], 2)

    def test_truncated_coefficient_rejected(self):
        with pytest.raises(InvalidParams):
            exact_window_map([self.u.truncate(5)], 2)

    def test_max_order_reported(self):
        _, k = exact_window_map([self.u + self.v], 2)
        assert k == 4  # (u+v)^4 can still land inside the 2-window box


class TestRuleCrossRepresentation:
    """The exact-rational tables for the three product rules agree with a
    fully independent truncated computation: series form of every factor,
    element multiplication, window restriction."""

    def setup_method(self):
        self.cfg = AlgebraConfig(2)
        self.u = Element.generator(self.cfg, 1)
        self.v = Element.generator(self.cfg, 2)

    def _truncated(self, args, order, precision):
        acc = Element.identity(self.cfg, precision)
        for arg in args:
            acc = acc * qexp_series(arg, order, precision)
        return acc

    @pytest.mark.parametrize("window,precision", [(2, 12)])
    def test_all_three_rules(self, window, precision):
        u, v = self.u, self.v
        vu_neg_q = (v * u).scale(L({1: -1}))
        z = u + v - (v * u).scale(L({1: 1}))
        rules = [
            ([u, v], [u + v]),
            ([v, u], [z]),
            ([v, u], [u, vu_neg_q, v]),
        ]
        order = 2 * window
        for lhs_args, rhs_args in rules:
            exact_lhs, _ = exact_window_map(lhs_args, window)
            exact_rhs, _ = exact_window_map(rhs_args, window)
            trunc_lhs = self._truncated(lhs_args, order, precision)
            trunc_rhs = self._truncated(rhs_args, order, precision)
            for target in window_targets(self.cfg, (1, 2), {1: (0, window), 2: (0, window)}):
                tl = trunc_lhs.coefficient(target)
                tr = trunc_rhs.coefficient(target)
                # phases from normal ordering can lower the honest precision
                pmin = min(
                    p for p in (tl.precision, tr.precision, precision)
                    if p is not None
                )
                want = exact_lhs[target].expand(pmin)
                assert exact_rhs[target].expand(pmin) == want
                assert tl.truncate(pmin) == want
                assert tr.truncate(pmin) == want


class TestScalingGrading:
    """Scaling the arguments of E(u)E(v) = E(u+v) by a central scalar grades
    the identity by total series order: with t a distant commuting generator
    standing in for the scalar, every surviving monomial has t-degree equal
    to its u-degree plus v-degree, and the graded coefficients equal the
    ungraded ones."""

    def test_mult1_grading(self):
        precision, order, box = 10, 4, 2
        big = AlgebraConfig(4)
        tu = Element.monomial(big, (1, 0, 0, 1))
        tv = Element.monomial(big, (0, 1, 0, 1))
        lhs = qexp_series(tu, order, precision) * qexp_series(tv, order, precision)
        rhs = qexp_series(tu + tv, order, precision)
        for vec, coeff in itertools.chain(lhs.terms.items(), rhs.terms.items()):
            a, b, zero, t = vec
            assert zero == 0
            if not coeff.is_zero():
                assert t == a + b  # homogeneous in the scalar

        small = AlgebraConfig(2)
        u = Element.generator(small, 1)
        v = Element.generator(small, 2)
        flat_lhs = qexp_series(u, order, precision) * qexp_series(v, order, precision)
        flat_rhs = qexp_series(u + v, order, precision)
        for a in range(box + 1):
            for b in range(box + 1):
                # products of positive-valuation series can claim more than
                # the requested precision; compare at the common cap
                graded = lhs.coefficient((a, b, 0, a + b)).truncate(precision)
                assert graded == rhs.coefficient((a, b, 0, a + b)).truncate(precision)
                assert graded == flat_lhs.coefficient((a, b)).truncate(precision)
                assert graded == flat_rhs.coefficient((a, b)).truncate(precision)


class TestSiteEmbedding:
    """A relation instance at interior site n of a longer chain has exactly
    the coefficient table of the same relation on the minimal two-site
    chain: untouched sites do not leak into the comparison."""

    @pytest.mark.parametrize("shift", [0, 1, 2])
    def test_four_site_reduction(self, shift):
        # E(w_{n+1}) E(w_n^-1) E(w_n) E(w_{n+1}) on sites (n, n+1) = (1+shift, 2+shift)
        small = AlgebraConfig(2)
        big = AlgebraConfig(4)
        base = [(2, 1), (1, -1), (1, 1), (2, 1)]
        small_prod = product_of(small, base)
        big_prod = product_of(big, [(s + shift, e) for s, e in base])
        precision = 10
        for target in window_targets(small, (1, 2), 2):
            a, b = target
            big_target = [0] * 4
            big_target[shift] = a
            big_target[shift + 1] = b
            got, got_cert = coefficient_of(big_prod, tuple(big_target), precision)
            want, want_cert = coefficient_of(small_prod, target, precision)
            assert got == want
            assert got_cert.tuples == want_cert.tuples
