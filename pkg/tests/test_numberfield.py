import math
import random
from fractions import Fraction

import pytest

from logclass.classnumber import (
    class_group,
    cubic_principal_gen,
    is_principal,
    minkowski_bound,
    s_units,
    unit_group,
)
from logclass.errors import SearchExhausted
from logclass.fields import cubic_field, named_field, quadratic_field
from logclass.numberfield import (
    QQ,
    factor_rational_prime,
    splitting_in_cyclotomic,
)
from logclass.quadforms import QuadIdeal


def bqf_class_number(D):
    """Oracle: count reduced positive definite forms of discriminant D < 0."""
    h = 0
    b = D % 2
    while b * b <= -D // 3:
        q = (b * b - D) // 4
        a = max(b, 1)
        while a * a <= q:
            if a and q % a == 0:
                c = q // a
                if b <= a <= c:
                    h += 1 if (b == 0 or a == b or a == c) else 2
            a += 1
        b += 2
    return h


def cf_fundamental_unit(d):
    """Oracle: continued fraction of sqrt(d), d = 2,3 mod 4 squarefree."""
    a0 = math.isqrt(d)
    m, q, a = 0, 1, a0
    h0, h1 = 1, a0
    k0, k1 = 0, 1
    for _ in range(10000):
        m = a * q - m
        q = (d - m * m) // q
        a = (a0 + m) // q
        if q == 1:
            return h1, k1
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
    raise AssertionError("period not found")


def test_factor_prime_gaussian():
    K = quadratic_field(-1)
    ps = factor_rational_prime(K, 5)
    assert len(ps) == 2 and all(p.e == 1 and p.f == 1 for p in ps)
    p2 = factor_rational_prime(K, 2)
    assert len(p2) == 1 and p2[0].e == 2 and p2[0].f == 1
    assert len(factor_rational_prime(QQ, 7)) == 1


def test_ef_sum_and_norm_multiplicativity():
    rng = random.Random(1)
    for d in (-1, -5, 2, 3, -15, 17):
        K = quadratic_field(d)
        for p in (2, 3, 5, 7, 11, 13):
            ps = factor_rational_prime(K, p)
            assert sum(q.e * q.f for q in ps) == 2
        # norm of (x) = |N(x)| via prime valuations, random elements
        for _ in range(40):
            x = K.element(rng.randrange(-9, 10)) + rng.randrange(-9, 10) * K.omega()
            if x.is_zero():
                continue
            n = abs(x.norm())
            total = Fraction(1)
            for p in set(int(q) for q, _ in __import__("sympy").factorint(int(n * n.denominator**2)).items()) or set():
                pass
            # direct check on a fixed prime set
            acc = Fraction(1)
            import sympy
            for p in sympy.factorint(int(n)).keys():
                for P in factor_rational_prime(K, p):
                    acc *= Fraction(P.norm())**P.valuation(x)
            assert acc == n


def test_valuations_consistent_with_norms():
    K = quadratic_field(-7)
    P1, P2 = factor_rational_prime(K, 2)
    x = K.element(Fraction(1, 2), Fraction(1, 2))  # (1+sqrt(-7))/2, norm 2
    assert abs(x.norm()) == 2
    vals = sorted((P1.valuation(x), P2.valuation(x)))
    assert vals == [0, 1]


def test_class_group_oracle_imaginary():
    for d, kl in ((-1, 1), (-5, 2), (-6, 2), (-23, 3), (-14, 4)):
        K = quadratic_field(d)
        cg = class_group(K)
        assert cg.order == bqf_class_number(K.discriminant) == kl


def test_class_group_structure_disc_minus_84():
    # Q(sqrt(-21)): class group (2, 2)
    cg = class_group(quadratic_field(-21))
    assert sorted(cg.divisors) == [2, 2]


def test_class_group_shuffle_independence():
    # recomputation from scratch; relation order is deterministic but the
    # divisors must match the forms oracle either way
    from logclass import classnumber
    K = quadratic_field(-47)
    classnumber._CLASS_CACHE.pop(K.label, None)
    cg = class_group(K)
    assert cg.order == bqf_class_number(-47) == 5


def test_real_quadratic_units_cf_oracle():
    for d in (2, 3, 7, 19, 46):
        K = quadratic_field(d)
        ug = unit_group(K)
        eps = ug.fundamental_units[0]
        assert abs(eps.norm()) == 1
        p, q = cf_fundamental_unit(d)
        assert abs(eps.a) == p and abs(eps.b) == q
    K5 = quadratic_field(5)
    eps = unit_group(K5).fundamental_units[0]
    assert eps == K5.element(Fraction(1, 2), Fraction(1, 2))  # (1+sqrt5)/2


def test_unit_minimality_by_search():
    K = quadratic_field(13)
    eps = unit_group(K).fundamental_units[0]
    le = eps.log_abs(0)
    w = K.omega()
    for i in range(-40, 41):
        for j in range(-40, 41):
            x = K.element(i) + j * w
            if x.is_zero() or abs(x.norm()) != 1:
                continue
            la = x.log_abs(0)
            assert la < 1e-9 or la > le - 1e-9


def test_imaginary_torsion():
    assert unit_group(quadratic_field(-1)).torsion_order == 4
    assert unit_group(quadratic_field(-3)).torsion_order == 6
    assert unit_group(quadratic_field(-5)).torsion_order == 2
    assert unit_group(QQ).torsion_order == 2


def test_cubic_fields_units_and_class_number():
    for cond in (7, 9, 13):
        K = cubic_field(cond)
        assert K.discriminant == cond * cond
        cg = class_group(K)
        assert cg.order == 1
        ug = unit_group(K)
        assert len(ug.fundamental_units) == 2
        for u in ug.fundamental_units:
            assert abs(u.norm()) == 1
        sigma = K.automorphism()
        th = K.theta()
        assert sigma(th) != th
        c0, c1, c2 = K.coeffs
        v = sigma(th) * sigma(th) * sigma(th) + c2 * (sigma(th) * sigma(th)) \
            + c1 * sigma(th) + K.element(c0)
        assert v.is_zero()


def test_cubic_prime_splitting():
    K7 = cubic_field(7)
    inert3 = factor_rational_prime(K7, 3)
    assert len(inert3) == 1 and inert3[0].f == 3
    ram7 = factor_rational_prime(K7, 7)
    assert len(ram7) == 1 and ram7[0].e == 3
    split29 = factor_rational_prime(K7, 29)  # 29 = 1 mod 7, cubic residue cond.
    assert len(split29) == 3 and all(p.f == 1 for p in split29)


def test_cubic_principal_generator():
    K = cubic_field(7)
    P3 = factor_rational_prime(K, 3)[0]
    g = cubic_principal_gen(K, {P3: 1})
    assert abs(g.norm()) == 27
    split = factor_rational_prime(K, 29)
    g2 = cubic_principal_gen(K, {split[0]: 1})
    assert abs(g2.norm()) == 29
    assert split[0].valuation(g2) == 1 and split[1].valuation(g2) == 0


def test_s_units_rank_and_examples():
    S3 = factor_rational_prime(QQ, 3)
    su = s_units(QQ, S3)
    assert su.torsion_gen == -1 and su.gens == [Fraction(3)]

    K = quadratic_field(-1)
    S = factor_rational_prime(K, 2)
    su = s_units(K, S)
    assert su.rank == 1  # |S| + r + c - 1 = 1
    g = su.gens[0]
    assert abs(g.norm()) == 2  # 1+i up to units

    K5 = quadratic_field(-5)
    S2 = factor_rational_prime(K5, 2)
    su5 = s_units(K5, S2)
    assert su5.rank == 1
    assert abs(su5.gens[0].norm()) == 4  # p2^2 = (2): generator of norm 4


def test_is_principal_examples():
    K = quadratic_field(-1)
    P2 = factor_rational_prime(K, 2)[0]
    g = is_principal(K, {P2: 2})
    assert g is not None and abs(g.norm()) == 4
    K5 = quadratic_field(-5)
    p2 = factor_rational_prime(K5, 2)[0]
    assert is_principal(K5, {p2: 1}) is None
    assert is_principal(QQ, {factor_rational_prime(QQ, 7)[0]: 1}) == 7


def test_splitting_in_cyclotomic():
    assert splitting_in_cyclotomic(17, 4) == 1
    assert splitting_in_cyclotomic(3, 8) == 2
    assert splitting_in_cyclotomic(2, 7) == 3
    with pytest.raises(ValueError):
        splitting_in_cyclotomic(7, 14)


def test_minkowski_bound_small_for_catalogue():
    assert minkowski_bound(cubic_field(7)) < 2
    assert minkowski_bound(cubic_field(13)) < 3


def test_quad_ideal_arithmetic():
    K = quadratic_field(-5)
    P2 = factor_rational_prime(K, 2)[0]
    I = QuadIdeal.from_prime(P2)
    assert I.norm() == 2
    J = I * I
    assert J.norm() == 4
    g = J.principal_generator()
    assert g is not None and abs(g.norm()) == 4
