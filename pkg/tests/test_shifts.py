import random
from fractions import Fraction as F

import pytest

from hyposhift.shifts import (HypothesisWarning, builtin_1d_shift, check_commutativity, dump_field,
                              family_figure2, first_noncommuting, load_field, parse_1d_shift,
                              tensor_field, x_sequence_sq)


def test_x_sequence_values():
    assert x_sequence_sq(1).sq(0) == F(3, 4)
    assert x_sequence_sq(F(1, 2)).sq(0) == F(3, 8)
    for y2 in (F(1), F(1, 3)):
        assert x_sequence_sq(y2).sq(1) == F(8, 9)
        assert x_sequence_sq(y2).sq(5) == F(6 * 8, 49)


@pytest.mark.parametrize("y2", [0, F(-1, 2), F(3, 2)])
def test_x_sequence_rejects_out_of_range(y2):
    with pytest.raises(ValueError):
        x_sequence_sq(y2)


def test_builtin_shifts():
    s = builtin_1d_shift("S_a", a2=F(1, 2))
    assert [s.sq(n) for n in range(4)] == [F(1, 2), 1, 1, 1]
    assert all(builtin_1d_shift("U_plus").sq(n) == 1 for n in range(20))
    assert builtin_1d_shift("x_seq", y2=F(1, 2)).sq(0) == F(3, 8)


def test_builtin_shift_errors():
    with pytest.raises(ValueError):
        builtin_1d_shift("S_a", a2=0)
    with pytest.raises(ValueError):
        builtin_1d_shift("nope")
    with pytest.raises(IndexError):
        builtin_1d_shift("U_plus").sq(-1)


def test_parse_1d_shift_round_trip():
    for text in ("S_a(a2=1/2)", "U_plus", "x_seq(y2=1/3)"):
        w = parse_1d_shift(text)
        assert parse_1d_shift(w.descriptor()).sq(0) == w.sq(0)
    with pytest.raises(ValueError):
        parse_1d_shift("S_a(a2=1/2")


def test_family_entries(family):
    a2, y2 = F(1, 2), F(2, 3)
    f = family(a2, y2)
    assert f.alpha_sq(0, 0) == F(3, 4) * y2
    assert f.alpha_sq(1, 0) == F(8, 9)
    assert f.alpha_sq(0, 1) == a2 and f.alpha_sq(0, 7) == a2
    assert f.alpha_sq(3, 5) == 1
    assert f.beta_sq(0, 0) == y2 and f.beta_sq(0, 3) == 1
    assert f.beta_sq(1, 0) == 4 * a2 / 3
    assert f.beta_sq(2, 0) == a2 * y2 / (F(3, 4) * y2 * F(8, 9))
    assert f.beta_sq(1, 0) * f.alpha_sq(0, 0) == a2 * y2 == f.alpha_sq(0, 1) * f.beta_sq(0, 0)


def test_family_commutes(family):
    rng = random.Random(1)
    for _ in range(10):
        f = family(F(rng.randint(1, 50), 100), F(rng.randint(1, 100), 100))
        assert check_commutativity(f, 20)


def test_perturbed_family_breaks_commutativity(family):
    f = family(F(1, 2), F(1, 2))
    g = f.with_overrides(beta={(0, 0): 2 * f.beta_sq(0, 0)})
    assert not check_commutativity(g, 5)
    assert first_noncommuting(g, 5) == (0, 0)
    # the original is untouched
    assert f.beta_sq(0, 0) == F(1, 2)


def test_family_outside_range_is_flagged():
    with pytest.warns(HypothesisWarning):
        f = family_figure2(F(3, 4), F(1, 2))
    assert f.outside_hypothesis


def test_family_float_params_are_not_exact(family):
    with pytest.warns(HypothesisWarning):
        family_figure2(0.75, 0.5)
    assert not family_figure2(0.5, 0.5).exact
    assert family(F(1, 2), F(1, 2)).exact


def test_family_rejects_bad_params():
    with pytest.raises(ValueError):
        family_figure2(F(1, 2), 0)
    with pytest.raises(ValueError):
        family_figure2(F(3, 2), F(1, 2))


def test_weight_display_is_square_root(family):
    f = family(F(1, 2), F(1, 4))
    assert f.weight("beta", 0, 0, display=True) == pytest.approx(0.5)


def test_tensor_field():
    u = builtin_1d_shift("U_plus")
    f = tensor_field(u, u)
    assert all(f.alpha_sq(i, j) == 1 and f.beta_sq(i, j) == 1 for i in range(6) for j in range(6))
    g = tensor_field(builtin_1d_shift("S_a", a2=F(1, 3)), x_sequence_sq(F(1, 2)))
    assert g.alpha_sq(0, 4) == F(1, 3) and g.beta_sq(4, 0) == F(3, 8)
    assert check_commutativity(g, 20)


def test_field_text_round_trip(family):
    f = family(F(2, 5), F(3, 7)).with_overrides(alpha={(2, 1): F(1, 9)})
    g = load_field(dump_field(f))
    assert all(g.alpha_sq(i, j) == f.alpha_sq(i, j) and g.beta_sq(i, j) == f.beta_sq(i, j)
               for i in range(6) for j in range(6))
    t = tensor_field(builtin_1d_shift("S_a", a2=F(1, 2)), x_sequence_sq(F(1, 3)))
    t2 = load_field(dump_field(t))
    assert t2.alpha_sq(0, 0) == F(1, 2) and t2.beta_sq(0, 0) == F(1, 4)


def test_field_text_rejects_unknown_lines():
    with pytest.raises(ValueError):
        load_field("family figure2\nparam a2 1/2\nparam y2 1/2\nbogus 1\n")
    with pytest.raises(ValueError):
        load_field("family mystery\n")
