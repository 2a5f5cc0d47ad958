from fractions import Fraction as F

import pytest

from hyposhift import berger
from hyposhift.berger import Measure1D, Measure2D, NonIntegrableError
from hyposhift.hyponormality import figure2_factory
from hyposhift.moments import gamma_2d, iter_box
from hyposhift.scalar import Poly
from hyposhift.shifts import builtin_1d_shift, x_sequence_sq

HALF = F(1, 2)


def test_mu_x_moments():
    for y2 in (F(1), F(2, 5)):
        mu = berger.builtin_measure("mu_x", y2=y2)
        assert mu.total_mass() == 1
        for n in range(1, 20):
            assert berger.measure_moment(mu, n) == (n + 2) * y2 / (2 * (n + 1))


def test_builtin_measures():
    mu = berger.builtin_measure("mu_x", y2=1)
    assert mu.atoms == ((F(1), HALF),) and mu.density == Poly([HALF])
    mm = berger.builtin_measure("mu_M", a2=HALF)
    assert len(mm.terms) == 1
    s, t = mm.terms[0]
    assert s.atoms == ((F(0), HALF), (F(1), HALF)) and t.atoms == ((F(1), F(1)),)
    assert berger.builtin_measure("lebesgue").moment(3) == F(1, 4)
    with pytest.raises(ValueError):
        berger.builtin_measure("mu_x", y2=F(3, 2))
    with pytest.raises(ValueError):
        berger.builtin_measure("unknown")


def test_measure_validation():
    with pytest.raises(ValueError):
        Measure1D([(F(3, 2), 1)])
    with pytest.raises(ValueError):
        Measure1D([(HALF, -1)])
    with pytest.raises(ValueError):
        Measure1D(density=Poly([-1, 1]))
    m = Measure1D([(HALF, F(1, 4)), (HALF, F(1, 4)), (1, 0)])
    assert m.atoms == ((HALF, HALF),)


def test_verify_berger():
    for y2 in (F(1), HALF, F(1, 3)):
        assert berger.verify_berger(x_sequence_sq(y2), berger.builtin_measure("mu_x", y2=y2), 50)
    assert berger.verify_berger(builtin_1d_shift("U_plus"), berger.point(1), 50)
    assert not berger.verify_berger(x_sequence_sq(HALF), berger.point(1), 1)
    assert berger.first_moment_mismatch(x_sequence_sq(HALF), berger.point(1), 5) == 1


def test_restrict_measure():
    assert berger.restrict_measure(berger.point(1), 3) == berger.point(1)
    r = berger.restrict_measure(berger.lebesgue(), 1, HALF)
    assert r.atoms == () and r.density == Poly([0, 2])
    xi = berger.builtin_measure("mu_x", y2=F(2, 3))
    for h in (1, 4):
        r = berger.restrict_measure(xi, h)
        assert r.total_mass() == 1
        assert all(r.moment(k) == xi.moment(h + k) / xi.moment(h) for k in range(10))
    with pytest.raises(ZeroDivisionError):
        berger.restrict_measure(berger.point(0), 1)


def test_one_over_t_norm():
    assert berger.one_over_t_norm(berger.builtin_measure("mu_M", a2=F(1, 3))) == 1
    with pytest.raises(NonIntegrableError, match="term 0"):
        berger.one_over_t_norm(berger.lebesgue() * berger.point(0))
    with pytest.raises(NonIntegrableError):
        berger.one_over_t_norm(berger.lebesgue() * berger.lebesgue())
    # density 2t on the t-axis: the integral of 2t / t is 2
    assert berger.one_over_t_norm(berger.point(1) * Measure1D(density=Poly([0, 2]))) == 2


def test_extremal_measure():
    mm = berger.builtin_measure("mu_M", a2=HALF)
    ext = berger.extremal_measure(mm)
    assert all(ext.moment(k) == mm.moment(k) for k in iter_box(5))
    nu = berger.lebesgue()
    half = nu * berger.point(HALF)
    ext = berger.extremal_measure(half)
    assert all(ext.moment(k) == half.moment(k) for k in iter_box(5))


def test_marginal_x():
    assert berger.marginal_x(berger.builtin_measure("mu_M", a2=F(1, 4))) == \
        berger.builtin_measure("S_a_measure", a2=F(1, 4))
    assert berger.marginal_x(berger.point(0) * berger.point(1)) == berger.point(0)
    mix = Measure2D([(berger.lebesgue().scale(HALF), berger.point(1)),
                     (berger.point(HALF).scale(HALF), berger.lebesgue())])
    assert berger.marginal_x(mix).total_mass() == 1


def test_measure_leq():
    mu = berger.builtin_measure("mu_x", y2=HALF)
    assert berger.measure_leq(mu, mu)
    assert not berger.measure_leq(berger.point(HALF), berger.lebesgue())
    assert berger.leq_witness(berger.point(HALF), berger.lebesgue()) == ("atom", HALF)
    kind, t = berger.leq_witness(Measure1D(density=Poly([0, 2])), berger.lebesgue())
    assert kind == "density" and 2 * t > 1


def test_backward_extension_subnormal_side():
    a2, y2 = HALF, F(3, 5)
    res = berger.figure2_extension(a2, y2)
    assert res.subnormal and res.norm == 1
    mu = res.constructed_mu
    assert mu.total_mass() == 1
    # the explicit form y2*mu_M + [mu_x - y2*((1-a2) d0 + a2 d1)] x d0
    mu_x = berger.builtin_measure("mu_x", y2=y2)
    rest = mu_x - berger.builtin_measure("S_a_measure", a2=a2).scale(y2)
    explicit = berger.builtin_measure("mu_M", a2=a2).scale(y2) + \
        Measure2D([(Measure1D(rest.atoms, rest.density), berger.point(0))])
    fam = figure2_factory(a2, y2)
    assert all(mu.moment(k) == explicit.moment(k) == gamma_2d(fam, k) for k in iter_box(12))


def test_backward_extension_failures():
    res = berger.figure2_extension(HALF, F(2, 3) + F(1, 1000))
    assert not res.subnormal and res.failed_condition == "iii" and res.witness == ("atom", 0)
    mm = berger.builtin_measure("mu_M", a2=HALF)
    res = berger.backward_extension_check(mm, berger.builtin_measure("mu_x", y2=1), 2)
    assert not res.subnormal and res.failed_condition == "ii"
    res = berger.backward_extension_check(berger.lebesgue() * berger.point(0),
                                          berger.lebesgue(), HALF)
    assert res.failed_condition == "i"


def test_boundary_and_equality_clause():
    a2 = F(1, 4)
    bound = 1 / (2 - a2)
    assert berger.figure2_extension(a2, bound).subnormal
    rep = berger.equality_clause(berger.builtin_measure("mu_M", a2=a2),
                                 berger.builtin_measure("mu_x", y2=bound), bound)
    assert rep["product"] == bound and not rep["is_equality_case"]
    # beta00_sq * norm = 1 happens only at y2 = 1, where the marginal differs from mu_x
    rep = berger.equality_clause(berger.builtin_measure("mu_M", a2=a2),
                                 berger.builtin_measure("mu_x", y2=1), 1)
    assert rep["is_equality_case"] and not rep["measures_equal"] and not rep["moments_equal"]


def test_measure_text_round_trip():
    mu = berger.builtin_measure("mu_x", y2=F(2, 7))
    assert berger.load_measure(berger.dump_measure(mu)) == mu
    res = berger.figure2_extension(HALF, HALF)
    back = berger.load_measure(berger.dump_measure(res.constructed_mu))
    assert all(back.moment(k) == res.constructed_mu.moment(k) for k in iter_box(6))
    with pytest.raises(ValueError):
        berger.load_measure("atom 0 1\n")
    with pytest.raises(ValueError):
        berger.load_measure("measure1d\nblob 1\n")
