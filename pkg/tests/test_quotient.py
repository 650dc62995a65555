import random
from math import comb

import pytest

from conftest import random_element
from normext.dsl import parse_poly
from normext.freealg import CoefficientModeError, Context, FreeElement
from normext.linalg import ResourceLimitError
from normext.quotient import (
    LinearEngine,
    Presentation,
    hilbert_table,
    ideal_basis,
    membership,
    normal_form,
)
from normext.superpotential import cyclic_derivatives

CTX = Context(("x", "y", "z"), 1)
W_POLY = parse_poly("x*y*z + y*z*x + z*x*y - x*z*y - z*y*x - y*x*z", CTX)
RELS = cyclic_derivatives(W_POLY)
A_POLY = Presentation(CTX, RELS, label="poly3")


def _series_inverse_factor(series, m, bound):
    """Coefficients of series(t) / (1 - t^m): independent convolution oracle."""
    out = []
    for k in range(bound + 1):
        out.append(sum(series[k - j * m] for j in range(k // m + 1)))
    return out


def d_poly_extension():
    xs = [FreeElement.gen(CTX, i) for i in range(3)]
    f1 = RELS[0]
    return Presentation(
        CTX,
        [RELS[1], RELS[2], xs[1] * f1 - f1 * xs[1], xs[2] * f1 - f1 * xs[2]],
        label="poly3-ext",
    )


def test_ideal_basis_degree_two_is_relations():
    assert len(ideal_basis(A_POLY, 2)) == 3


def test_ideal_basis_degree_three_dimension():
    # 27 words minus the 10 cubic monomials of the commutative quotient
    assert len(ideal_basis(A_POLY, 3)) == 27 - 10


def test_free_algebra_has_zero_ideal():
    free = Presentation(Context(("x", "y"), 1), [], label="free2")
    for d in range(4):
        assert ideal_basis(free, d) == []
    assert hilbert_table(free, 3, "both").dims == (1, 2, 4, 8)


def test_hilbert_polynomial_ring_binomial_oracle():
    tab = hilbert_table(A_POLY, 8, engine="both")
    assert tab.dims == tuple(comb(k + 2, 2) for k in range(9))


def test_hilbert_extension_series_oracle():
    tab = hilbert_table(d_poly_extension(), 5, engine="both")
    poly_series = [comb(k + 2, 2) for k in range(6)]
    assert list(tab.dims) == _series_inverse_factor(poly_series, 2, 5)
    assert tab.dims == (1, 3, 7, 13, 22, 34)


def test_normal_form_commutator_rewrite():
    # deglex with x < y < z pivots on the larger word: yx -> xy
    nf = normal_form(parse_poly("y*x", CTX), A_POLY, bound=4)
    assert nf == parse_poly("x*y", CTX)


def test_normal_form_of_relation_is_zero():
    assert normal_form(RELS[0], A_POLY).is_zero()
    assert normal_form(FreeElement.gen(CTX, 0) * RELS[0], A_POLY).is_zero()


def test_membership_examples():
    d = d_poly_extension()
    x = FreeElement.gen(CTX, 0)
    comm = x * RELS[0] - RELS[0] * x
    assert membership(comm, d, engine="both")
    assert not membership(parse_poly("x*x*x", CTX), A_POLY, engine="both")
    assert membership(FreeElement.zero(CTX), A_POLY)


def test_membership_is_linear_randomized():
    rng = random.Random(2718)
    basis = ideal_basis(A_POLY, 3)
    for _ in range(10):
        f = basis[rng.randrange(len(basis))]
        g = basis[rng.randrange(len(basis))]
        from normext.scalars import Scalar

        c = Scalar.from_rational(rng.randint(1, 5))
        assert membership(f + g.scale(c), A_POLY, engine="both")


def test_dimension_monotone_in_relations():
    smaller = Presentation(CTX, RELS[:2], label="partial")
    for d in range(5):
        assert len(ideal_basis(smaller, d)) <= len(ideal_basis(A_POLY, d))


def test_engine_agreement_on_quotients():
    for pres in (A_POLY, d_poly_extension()):
        hilbert_table(pres, 7, engine="both")  # raises on disagreement


def test_unit_mode_rejected():
    uctx = Context(("x", "y"), 12, ("a",), "unit")
    w = parse_poly("x*y - a*y*x", uctx)
    pres = Presentation(uctx, [w], label="unit")
    with pytest.raises(CoefficientModeError):
        hilbert_table(pres, 3)


def test_resource_limit_is_loud():
    eng = LinearEngine(d_poly_extension(), entry_limit=5)
    with pytest.raises(ResourceLimitError):
        eng.dims(6)


def test_normal_form_beyond_bound_rejected():
    from normext.rewriting import GBState

    gb = GBState(A_POLY, 3)
    with pytest.raises(ValueError):
        gb.dims(5)


def test_gb_state_is_deterministic():
    from normext.rewriting import GBState

    a = GBState(A_POLY, 6)
    b = GBState(Presentation(CTX, RELS, label="poly3"), 6)
    assert a.leading_words() == b.leading_words()
    assert a.log == b.log
