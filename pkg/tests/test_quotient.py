"""Normal forms, quotient brackets, localised identities, bounded searches."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from poisson_forge import g2
from poisson_forge.expr import ExprError
from poisson_forge.parse import parse_expr
from poisson_forge.poisson import WeightVector
from poisson_forge.quotient import (QuotientRing, bounded_centre,
                                    bounded_inner_search, chain_elements,
                                    check_casimirs, check_quotient_derivation,
                                    hamiltonian_quotient_images,
                                    parse_derivation, quotient_jacobi_items,
                                    spans_same_space,
                                    verify_localized_identities)

SYM = QuotientRing()
LOC = QuotientRing(localized=True)
NUM11 = QuotientRing(alpha=1, beta=1)
ALPHA_ONLY = QuotientRing(alpha="symbolic", beta=0)
BETA_ONLY = QuotientRing(alpha=0, beta="symbolic")

THETA = parse_derivation(g2.builtin_scalar_derivation("beta_zero")["images"], SYM)
THETA_TILDE = parse_derivation(g2.builtin_scalar_derivation("alpha_zero")["images"], SYM)


def nf(text, ring=SYM):
    return ring.normal_form(text)


def quotient_polys(names=("x1", "x3", "x4"), max_terms=3):
    coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=2)
    exponents = st.integers(min_value=0, max_value=2)

    def build(termlist):
        p = SYM.context.zero()
        for coeff, exps in termlist:
            p = p + SYM.context.monomial(dict(zip(names, exps)), coeff)
        return p

    term = st.tuples(coeffs, st.tuples(*[exponents] * len(names)))
    return st.lists(term, max_size=max_terms).map(build)


class TestNormalForm:
    def test_rewrite_rules_match_the_stated_identities(self):
        assert SYM.rewrite_x3 == parse_expr(g2.REWRITE_IDENTITIES["x3^2"][1],
                                            SYM.context)
        assert SYM.rewrite_x4 == parse_expr(g2.REWRITE_IDENTITIES["x4^2"][1],
                                            SYM.context)

    def test_casimirs_reduce_to_parameters(self):
        assert nf(SYM.casimir1) == SYM.context.var("alpha")
        assert nf(SYM.casimir2) == SYM.context.var("beta")

    def test_already_normal(self):
        assert nf("x1") == SYM.context.var("x1")

    def test_x3sq_x4_matches_identity_rhs(self):
        lhs, rhs = g2.REWRITE_IDENTITIES["x3^2*x4"]
        assert nf(lhs) == nf(rhs)

    def test_all_four_identities(self):
        for label, ok, residue in check_casimirs(SYM):
            assert ok, f"{label}: {residue}"

    def test_mutated_identity_leaves_residue(self):
        # 2*alpha -> 3*alpha in the x3^2 identity leaves exactly -alpha.
        residue = nf("x3^2 - (3*alpha + 3*x1*x4 + x2*x5 - 2*x1*x3*x5)")
        assert residue == -SYM.context.var("alpha")

    def test_negative_core_exponent_rejected(self):
        # x1..x4 are never invertible, so the offending element cannot even
        # be built; the mask guards the normal-form precondition.
        with pytest.raises(ExprError, match="negative exponent"):
            LOC.normal_form(LOC.context.monomial({"x1": -1}))

    def test_uppercase_aliases_accepted(self):
        assert nf("X3^2") == SYM.rewrite_x3

    @given(quotient_polys(), quotient_polys())
    def test_multiplicative(self, p, q):
        direct = SYM.normal_form(p * q)
        staged = SYM.normal_form(SYM.normal_form(p) * SYM.normal_form(q))
        assert direct == staged

    @given(quotient_polys())
    def test_idempotent(self, p):
        once = SYM.normal_form(p)
        assert SYM.normal_form(once) == once

    @given(quotient_polys())
    def test_linear_over_parameters(self, p):
        c = SYM.context.monomial({"alpha": 1, "beta": 2}, 3)
        assert SYM.normal_form(c * p) == c * SYM.normal_form(p)

    @given(st.integers(min_value=0, max_value=5),
           st.integers(min_value=0, max_value=5))
    def test_rewrite_chain_depth_bound(self, a, b):
        depth = SYM.rewrite_chain_depth({"x3": a, "x4": b, "x1": 1})
        assert depth <= 4 * (a + b)

    def test_specialised_rings(self):
        assert ALPHA_ONLY.normal_form(ALPHA_ONLY.casimir2).is_zero()
        assert NUM11.normal_form(NUM11.casimir1) == NUM11.context.one()


class TestQuotientBracket:
    def test_table_value(self):
        ctx = SYM.context
        assert SYM.bracket(ctx.var("x6"), ctx.var("x2")) == parse_expr(
            "3*x2*x6 + 9*x4 - 18*x3*x5", ctx)

    def test_antisymmetry_after_reduction(self):
        p = nf("x3^2 + x1*x4")
        assert SYM.bracket(p, p).is_zero()

    def test_reduced_casimir_is_central(self):
        for name in ("x1", "x4", "x6"):
            assert SYM.bracket(SYM.alpha_poly, SYM.context.var(name)).is_zero()

    def test_jacobi_mod_ideal(self):
        items = quotient_jacobi_items(SYM)
        assert len(items) == 20
        for label, ok, residue in items:
            assert ok, f"{label}: {residue}"

    def test_element_wrapper(self):
        x3 = SYM.element("x3")
        assert (x3 * x3).poly == SYM.rewrite_x3
        assert (x3 - x3).is_zero()
        assert x3.bracket(SYM.element("x4")).poly == nf("3*x3*x4")

    @given(quotient_polys(max_terms=2), quotient_polys(max_terms=2))
    def test_leibniz_mod_ideal(self, f, g):
        h = SYM.element("x4*x6 + x3")
        ef, eg = SYM.element(f), SYM.element(g)
        lhs = ef.bracket(eg * h)
        rhs = ef.bracket(eg) * h + eg * ef.bracket(h)
        assert (lhs - rhs).is_zero()


class TestLocalizedTower:
    def test_chain_elements_reduce_to_expected_forms(self):
        e = chain_elements(LOC)
        assert str(e["t3"]) == "x3 - 3/2*x4*x5^-1"
        assert e["t5"].num == LOC.context.var("x5")
        assert e["t1"].a == 1 and e["t1"].b == 1

    def test_all_identities(self):
        items = verify_localized_identities(LOC)
        assert len(items) == 13
        for label, ok, residue in items:
            assert ok, f"{label}: {residue}"

    def test_casimir_relations_in_tower(self):
        labels = {label for label, ok, _ in verify_localized_identities(LOC)}
        assert "t1*t3*t5 = alpha" in labels
        assert "t2*t4*t6 = beta" in labels


class TestQuotientDerivations:
    def test_scalar_derivation_on_beta_zero_quotient(self):
        images = parse_derivation(
            g2.builtin_scalar_derivation("beta_zero")["images"], ALPHA_ONLY)
        for label, ok, residue in check_quotient_derivation(images, ALPHA_ONLY):
            assert ok, f"{label}: {residue}"

    def test_scalar_derivation_on_alpha_zero_quotient(self):
        images = parse_derivation(
            g2.builtin_scalar_derivation("alpha_zero")["images"], BETA_ONLY)
        for label, ok, residue in check_quotient_derivation(images, BETA_ONLY):
            assert ok, f"{label}: {residue}"

    def test_beta_zero_derivation_fails_with_symbolic_beta(self):
        images = parse_derivation(
            g2.builtin_scalar_derivation("beta_zero")["images"], SYM)
        items = check_quotient_derivation(images, SYM)
        failures = {label: residue for label, ok, residue in items if not ok}
        assert failures == {"D preserves the Omega2 relation": "2*beta"}

    def test_weight_bookkeeping(self):
        # The Omega1 relation is homogeneous of weight 0 for the first
        # scalar derivation and -2 for the second; Omega2 swaps the roles.
        ctx = SYM.context
        theta_w = WeightVector(ctx, {0: (-1, 0), 1: (-1, 0), 2: (0, 0),
                                     3: (1, 0), 4: (1, 0), 5: (2, 0)})
        tilde_w = WeightVector(ctx, {0: (-2, 0), 1: (-3, 0), 2: (-1, 0),
                                     3: (0, 0), 4: (1, 0), 5: (3, 0)})
        assert theta_w.weight_of(SYM.casimir1) == (0, 0)
        assert theta_w.weight_of(SYM.casimir2) == (2, 0)
        assert tilde_w.weight_of(SYM.casimir1) == (-2, 0)
        assert tilde_w.weight_of(SYM.casimir2) == (0, 0)

    def test_hamiltonian_images_pass(self):
        images = hamiltonian_quotient_images("x3", NUM11)
        for label, ok, residue in check_quotient_derivation(images, NUM11):
            assert ok, f"{label}: {residue}"

    def test_derivation_file_loader(self):
        from importlib import resources
        from poisson_forge.quotient import load_derivation_file
        path = resources.files("poisson_forge.data") / "derivation_beta_zero.json"
        ring, images = load_derivation_file(str(path))
        assert ring.beta == 0 and ring.alpha is None
        assert images["x6"] == 2 * ring.context.var("x6")
        for label, ok, residue in check_quotient_derivation(images, ring):
            assert ok, f"{label}: {residue}"


class TestBoundedSearches:
    def test_hamiltonian_roundtrip(self):
        images = hamiltonian_quotient_images("x3", NUM11)
        found = bounded_inner_search(images, NUM11, degree=2)
        assert found == NUM11.context.var("x3")

    def test_zero_derivation(self):
        zero = {name: NUM11.context.zero() for name in
                ("x1", "x2", "x3", "x4", "x5", "x6")}
        assert bounded_inner_search(zero, NUM11, degree=2).is_zero()

    def test_scalar_derivation_not_inner_at_low_degree(self):
        ring = QuotientRing(alpha=1, beta=0)
        images = parse_derivation(
            g2.builtin_scalar_derivation("beta_zero")["images"], ring)
        assert bounded_inner_search(images, ring, degree=2) is None

    def test_symbolic_ring_rejected(self):
        with pytest.raises(ExprError, match="numeric"):
            bounded_inner_search({}, SYM, degree=1)

    def test_ambient_centre_small_degrees(self):
        alg = g2.builtin_algebra()
        ctx = alg.context
        basis2 = bounded_centre(alg.structure, 2)
        assert spans_same_space(basis2, [ctx.one()])
        basis3 = bounded_centre(alg.structure, 3)
        assert spans_same_space(basis3, [ctx.one(), alg.casimirs["Omega1"]])

    def test_quotient_centre_is_scalars(self):
        basis = bounded_centre(NUM11, 3)
        assert spans_same_space(basis, [NUM11.context.one()])

    def test_span_comparison_detects_difference(self):
        ctx = SYM.context
        assert not spans_same_space([ctx.one()], [ctx.var("x1")])
