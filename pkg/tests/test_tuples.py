import random
from fractions import Fraction

import pytest

from normext.dsl import parse_poly, parse_unit
from normext.freealg import Context
from normext.scalars import Assignment, Scalar, UnitScalar
from normext.superpotential import DiagonalMap, Superpotential, eigen_scale
from normext.tuples import (
    SolveError,
    goodness_system,
    is_good,
    matrix_goodness_system,
    solve_units,
    w_hash,
)

CTX = Context(("x", "y", "z"), 1)
W_POLY = parse_poly("x*y*z + y*z*x + z*x*y - x*z*y - z*y*x - y*x*z", CTX)
SP_POLY = Superpotential(W_POLY)

UCTX = Context(("x", "y"), 12, ("alpha",), "unit")
W_S2 = parse_poly("x*x*y*y + alpha*x*y*y*x + alpha^{2}*y*y*x*x - alpha*y*x*x*y", UCTX)
SP_S2 = Superpotential(W_S2)

SCTX = Context(("x", "y", "z"), 3, ("a", "b", "c"), "unit")
W_SKLY = parse_poly(
    "a*x*y*z + a*y*z*x + a*z*x*y + b*x*z*y + b*z*y*x + b*y*x*z"
    " + c*x*x*x + c*y*y*y + c*z*z*z",
    SCTX,
)
SP_SKLY = Superpotential(W_SKLY)

HCTX = Context(("x", "y"), 1, ("a", "b", "c"), "unit")
W_CUBIC_A = parse_poly(
    "a*x*x*y*y + a*y*y*x*x + a*x*y*y*x + a*y*x*x*y + b*x*y*x*y + b*y*x*y*x"
    " + c*x*x*x*x + c*y*y*y*y",
    HCTX,
)
SP_CUBIC_A = Superpotential(W_CUBIC_A)


def units(text, ctx):
    return [parse_unit(part, ctx.conductor, ctx.params) for part in text.split(",")]


def test_system_poly_dedupes_to_two_rows():
    sys1 = goodness_system(SP_POLY, 0)
    assert len(sys1.rows) == 2
    assert sys1.rows[0][0] == (1, 0, 0)
    assert sys1.rows[1][0] == (1, 1, 1)


def test_system_s2_single_monomial_row():
    sys1 = goodness_system(SP_S2, 0)
    assert len(sys1.rows) == 2
    assert sys1.rows[1][0] == (2, 2)
    assert sys1.rows[1][1] == UnitScalar(0, (Fraction(1),))  # q_1 = alpha


def test_system_sklyanin_five_rows():
    sys1 = goodness_system(SP_SKLY, 0)
    counts = {r[0] for r in sys1.rows}
    assert counts == {(1, 0, 0), (1, 1, 1), (3, 0, 0), (0, 3, 0), (0, 0, 3)}


def test_solver_cubic_a_pm_one():
    for k, expected in ((0, [("1", "1"), ("1", "-1")]), (1, [("1", "1"), ("-1", "1")])):
        fams = solve_units(goodness_system(SP_CUBIC_A, k))
        assert len(fams) == 1
        fam = fams[0]
        assert not fam.directions and len(fam.cosets) == 2
        members = {tuple(fam.entry_texts(i)) for i in range(2)}
        assert members == {e for e in map(tuple, expected)}


def test_solver_s2_square_roots():
    fam = solve_units(goodness_system(SP_S2, 0), w_hash(W_S2))[0]
    assert len(fam.cosets) == 2 and not fam.directions
    assert fam.contains(units("alpha,alpha^{-1/2}", UCTX))
    assert fam.contains(units("alpha,-alpha^{-1/2}", UCTX))
    assert not fam.contains(units("alpha,alpha^{1/2}", UCTX))


def test_solver_poly_free_direction():
    fam = solve_units(goodness_system(SP_POLY, 0))[0]
    assert len(fam.cosets) == 1 and len(fam.directions) == 1
    assert fam.entry_texts() == ["1", "l1", "l1^{-1}"]


def test_solver_inconsistent_system_is_empty():
    # p_1 = -1 forced alongside p_1 = 1 via an artificial system
    from normext.tuples import ConstraintSystem

    rows = (
        ((1, 0), UnitScalar.one(0)),
        ((2, 0), UnitScalar.minus_one(0)),
    )
    sys1 = ConstraintSystem(
        nparams=0, params=(), n=2, k=0, rows=rows, labels=("a", "b")
    )
    assert solve_units(sys1) == []


def test_is_good_examples():
    one = Scalar.one(1)
    assert is_good(SP_POLY, 0, (one, one, one))
    bad = is_good(SP_POLY, 0, (one, Scalar.from_rational(2), one))
    assert not bad and bad.witness is not None
    with pytest.raises(ValueError):
        is_good(SP_POLY, 0, (Scalar.from_rational(2), one, one))  # p_k != q_k


def test_is_good_sklyanin_cube_roots():
    asg = Assignment(("a", "b", "c"), {"a": 1, "b": 1, "c": 2}, conductor=3)
    w = W_SKLY.specialize(asg)
    sp = Superpotential(w)
    one = Scalar.one(3)
    z = Scalar.zeta(3)
    assert is_good(sp, 0, (one, z, z * z))
    assert not is_good(sp, 0, (one, z, z))


def test_condition_three_four_equivalence():
    for sp, k in (
        (SP_POLY, 0),
        (SP_POLY, 1),
        (SP_S2, 0),
        (SP_S2, 1),
        (SP_SKLY, 0),
        (SP_SKLY, 2),
        (SP_CUBIC_A, 0),
        (SP_CUBIC_A, 1),
    ):
        a = goodness_system(sp, k)
        b = matrix_goodness_system(sp, k)
        assert set(a.rows) == set(b.rows)


def test_family_members_specialize_to_good():
    fam = solve_units(goodness_system(SP_S2, 0), w_hash(W_S2))[0]
    names = tuple(fam.params) + fam.symbols
    values = {"alpha": 4, **{s: 1 for s in fam.symbols}}
    asg = Assignment(names, values, {("alpha", 2): 2}, conductor=12)
    w4 = W_S2.specialize(Assignment(("alpha",), {"alpha": 4}, {("alpha", 2): 2}, 12))
    sp4 = Superpotential(w4)
    for ci in range(len(fam.cosets)):
        member = fam.member_units(ci)
        p = tuple(asg.specialize(u) for u in member)
        assert is_good(sp4, 0, p)


def test_family_members_specialize_to_good_with_free_symbol():
    fam = solve_units(goodness_system(SP_POLY, 0))[0]
    for lval, roots in ((3, {}), (Fraction(1, 2), {}), (Scalar.zeta(12, 4), {})):
        asg = Assignment(("l1",), {"l1": lval}, roots, conductor=12)
        member = fam.member_units(0)
        p = tuple(asg.specialize(u) for u in member)
        w12 = parse_poly(
            "x*y*z + y*z*x + z*x*y - x*z*y - z*y*x - y*x*z",
            Context(("x", "y", "z"), 12),
        )
        assert is_good(Superpotential(w12), 0, p)


def test_identity_tuple_good_for_identity_twist_all_k():
    for sp in (SP_POLY, SP_SKLY, SP_CUBIC_A):
        for k in range(sp.n):
            fam = solve_units(goodness_system(sp, k))[0]
            nparams = len(sp.ctx.params)
            ones = [UnitScalar.one(nparams)] * sp.n
            assert fam.contains(ones)


def test_twist_power_tuples_good_when_q1_is_one():
    # three-generator skew family tuned to q = (1, b, b^{-1})
    ctx = Context(("x", "y", "z"), 12, ("b",), "unit")
    w = parse_poly(
        "x*y*z + y*z*x + b*z*x*y - b*x*z*y - b*z*y*x - y*x*z", ctx
    )
    sp = Superpotential(w)
    q = sp.twist.scales
    assert q[0].is_one()
    fam = solve_units(goodness_system(sp, 0))[0]
    for j in (-2, -1, 0, 1, 2, 3):
        tup = [UnitScalar.one(1), q[1].pow(j), q[2].pow(j)]
        assert fam.contains(tup), j


def test_solution_serialization_carries_provenance():
    digest = w_hash(W_S2)
    fam = solve_units(goodness_system(SP_S2, 0), digest)[0]
    blob = fam.to_json(12)
    assert blob["provenance"] == {"w_hash": digest, "k": 1}
    assert blob["particular"] == ["alpha", "alpha^{-1/2}"]
    assert len(blob["members"]) == 2
