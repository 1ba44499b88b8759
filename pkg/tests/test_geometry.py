from fractions import Fraction

import mpmath as mp
import pytest

from cantorwalk.coding import AdmissibleWord, children
from cantorwalk.geometry import (
    QPolynomial,
    cylinder_interval,
    cylinder_length,
    hole,
    left_block_partition_bracket,
    phi_apply,
    q_value,
    step_denominator,
)

# q = 3/pi^2 to 16 digits, checked against an unrelated route below
Q_REF = 0.3039635509270133


def W(text):
    return AdmissibleWord.parse(text) if text else AdmissibleWord()


def test_q_value():
    assert float(q_value(64)) == pytest.approx(Q_REF, abs=1e-15)
    # independent route: 1 / (2 * sum 1/l^2), summed with tail correction
    acc = sum(1.0 / (l * l) for l in range(1, 200000))
    acc += 1.0 / 199999  # midpoint of the integral tail bracket, crude
    assert 1.0 / (2 * acc) == pytest.approx(Q_REF, abs=1e-5)


def test_step_denominator_cases():
    assert step_denominator(2, 5) == 3
    assert step_denominator(1, 1) == 2
    assert step_denominator(4, 0) == 4
    assert step_denominator(0, 7) == 7
    with pytest.raises(ValueError):
        step_denominator(0, 0)


def test_cylinder_length_examples():
    assert cylinder_length(W("1")) == (Fraction(1), 1)
    assert cylinder_length(W("1,1")) == (Fraction(1, 4), 2)
    # steps 0->2, 2->5, 5->5, 5->0: denominators 2, 3, 10, 5
    assert cylinder_length(W("2,5,5,0")) == (
        Fraction(1, (2 * 3 * 10 * 5) ** 2), 4)


def test_interval_level_one():
    g1 = cylinder_interval(W("1"))
    assert g1.left.coeffs == ()  # exact 0
    assert (g1.length_coeff, g1.depth) == (Fraction(1), 1)
    g2 = cylinder_interval(W("2"))
    # I_2 starts at q (right after I_1) and has length q/4
    assert g2.left.as_dict() == {1: Fraction(1)}
    assert (g2.length_coeff, g2.depth) == (Fraction(1, 4), 1)


def test_interval_right_block_child():
    # I_{1,1} is flush right in I_1: left = q - q^2/4, length q^2/4
    g = cylinder_interval(W("1,1"))
    assert g.left.as_dict() == {1: Fraction(1), 2: Fraction(-1, 4)}
    assert (g.length_coeff, g.depth) == (Fraction(1, 4), 2)


def test_interval_left_block_child():
    # I_{1,3}: second left-block child of I_1, offset q*|I_1|*H2(1)
    g = cylinder_interval(W("1,3"))
    assert g.left.as_dict() == {2: Fraction(1)}
    assert (g.length_coeff, g.depth) == (Fraction(1, 4), 2)


def test_children_tile_without_overlap():
    # children are disjoint, ordered, and inside the parent
    for text in ("1", "2,5", "1,0", ""):
        parent = cylinder_interval(W(text))
        kids = [cylinder_interval(c) for c in children(W(text), 6)]
        for a, b in zip(kids, kids[1:]):
            assert a.right.compare(b.left) <= 0
        for k in kids:
            assert parent.left.compare(k.left) <= 0
            assert k.right.compare(parent.right) <= 0


def test_level_length_bounded_by_parent():
    # sum of child lengths never exceeds the parent length
    for text in ("1", "3", "2,5"):
        parent = cylinder_interval(W(text))
        total = mp.mpf(0)
        for c in children(W(text), 200):
            total += cylinder_interval(c).length_poly.evaluate(80)
        assert total < parent.length_poly.evaluate(80)


def test_hole_of_root():
    h = hole(W(""))
    assert h.left.as_dict() == {0: Fraction(1, 2)}
    assert h.length.as_dict() == {0: Fraction(1, 2)}


def test_hole_of_level_one():
    # |hole(I_1)| = 1/2 q - (1 + 1/4) q^2, frozen decimal below
    h = hole(W("1"))
    assert h.length.as_dict() == {1: Fraction(1, 2), 2: Fraction(-5, 4)}
    val = float(h.length.evaluate(64))
    assert val == pytest.approx(0.03648947509830789, abs=1e-15)


def test_hole_shrinks_relative_to_interval():
    # relative hole size |hole(I_k)| / |I_k| tends to 0 as k grows
    prev = None
    for k in (1, 5, 25, 125, 1000):
        rel = float(hole(W(str(k))).length.evaluate(64)
                    / cylinder_interval(W(str(k))).length_poly.evaluate(64))
        if prev is not None:
            assert rel < prev
        prev = rel
    assert prev < 5e-4  # the relative hole size decays like q/k


def test_partition_bracket_contains_half():
    for text in ("", "1", "2,5,5,0", "1,0,2"):
        lo, hi, half = left_block_partition_bracket(W(text), 10 ** 4, 80)
        assert lo <= half <= hi
        assert float(hi - lo) < 1e-8 * max(float(half), 1e-30)


def test_qpolynomial_arithmetic_and_compare():
    a = QPolynomial.from_dict({0: Fraction(1, 2), 2: Fraction(-5, 4)})
    b = QPolynomial.monomial(1, Fraction(1, 2))
    s = a + b
    assert s.as_dict() == {0: Fraction(1, 2), 1: Fraction(1, 2),
                           2: Fraction(-5, 4)}
    assert (s - b).as_dict() == a.as_dict()
    assert a.compare(a) == 0
    # 1/2 - 5/4 q^2 vs q/2: difference is ~0.23, positive
    assert a.compare(b) == 1
    assert b.compare(a) == -1
    enc = a.enclosure(64)
    assert enc.a <= a.evaluate(64) <= enc.b


def test_phi_is_affine_on_a_domain_cylinder():
    # the hull for I_{1,1} (m = 1 <= k+1) is all of I_1 = [0, q); interior
    # points map affinely, so the image of left + f*length is f*q
    dom = cylinder_interval(W("1,1"))
    a = dom.left.evaluate(128)
    dlen = dom.length_poly.evaluate(128)
    q = q_value(128)
    for f in (0.25, 0.5, 0.75):
        y = phi_apply(a + f * dlen, 128)
        assert y is not None
        assert float(y) == pytest.approx(f * float(q), rel=1e-12)


def test_phi_interior_point_lands_in_hull():
    # midpoint of I_{2,5}: hull is [left(I_{2,4}), midpoint(I_2))
    dom = cylinder_interval(W("2,5"))
    x = dom.left.evaluate(128) + dom.length_poly.evaluate(128) / 2
    y = phi_apply(x, 128)
    hl = cylinder_interval(W("2,4")).left.evaluate(128)
    parent = cylinder_interval(W("2"))
    hr = parent.left.evaluate(128) + parent.length_poly.evaluate(128) / 2
    assert hl < y < hr


def test_phi_escapes_in_hole():
    # a point in the hole of I_1: between midpoint of I_1 and I_{1,0}
    g = cylinder_interval(W("1"))
    mid = g.left.evaluate(128) + g.length_poly.evaluate(128) / 2
    left0 = cylinder_interval(W("1,0")).left.evaluate(128)
    x = (mid + left0) / 2
    assert phi_apply(x, 128) is None


def test_phi_rejects_out_of_range():
    with pytest.raises(ValueError):
        phi_apply(0.7)


def test_interval_decimal_matches_length_poly():
    g = cylinder_interval(W("2,5,5,0"))
    direct = float(g.length_poly.evaluate(80))
    r, n = cylinder_length(W("2,5,5,0"))
    assert direct == pytest.approx(
        float(r) * float(q_value(80)) ** n, rel=1e-12)
