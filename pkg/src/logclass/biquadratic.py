"""Biquadratic composita Q(sqrt(d1), sqrt(d2)) built on their three
quadratic subfields.

Elements live on the basis {1, sqrt(d1), sqrt(d2), sqrt(d3)} with d3 the
squarefree part of d1 d2.  Prime splitting, valuations and unit groups are
all derived from quadratic-subfield data: valuations by solving the norm
equations of the three subfields, units and S-units by 2-saturating the
subfield groups (squares of S-units of the compositum land in the subfield
product, so the index is elementary 2).
"""

from __future__ import annotations

import math
from fractions import Fraction

from sympy import isprime

from .classnumber import quad_s_relation_generators, unit_group
from .errors import UnsupportedField
from .gfq import GFq
from .numberfield import NumberField, PrimeIdeal, QuadElt, flog
from .padic import PadicInt, hensel_sqrt


def _squarefree(n: int) -> int:
    from sympy import factorint
    s = 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            s *= p
    return s if n > 0 else -s


class BiquadElt:
    __slots__ = ("K", "c")

    def __init__(self, K, coords):
        self.K = K
        self.c = tuple(Fraction(x) for x in coords)

    def __repr__(self):
        return f"biq{self.c}"

    def __eq__(self, other):
        return isinstance(other, BiquadElt) and self.K == other.K and self.c == other.c

    def __hash__(self):
        return hash((self.K.label, self.c))

    def __add__(self, o):
        o = self.K.element(o)
        return BiquadElt(self.K, [a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self):
        return BiquadElt(self.K, [-a for a in self.c])

    def __sub__(self, o):
        return self + (-self.K.element(o))

    def __rsub__(self, o):
        return -(self - o)

    def __mul__(self, o):
        o = self.K.element(o)
        tab = self.K._mul_table
        out = [Fraction(0)] * 4
        for i in range(4):
            if self.c[i] == 0:
                continue
            for j in range(4):
                if o.c[j] == 0:
                    continue
                coef, k = tab[i][j]
                out[k] += self.c[i] * o.c[j] * coef
        return BiquadElt(self.K, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return (self.K.one() / self)**(-k)
        out = self.K.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, o):
        o = self.K.element(o)
        # 1/o = sigma1(o) sigma2(o) sigma3(o) / N(o)
        s1, s2, s3 = (self.K.sigma(i)(o) for i in (1, 2, 3))
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError
        return self * s1 * s2 * s3 * Fraction(1, n)

    def norm(self) -> Fraction:
        y = self * self.K.sigma(1)(self)       # in k1
        z = y * self.K.sigma(2)(y)             # fixed by everything
        assert all(x == 0 for x in z.c[1:])
        return z.c[0]

    def trace(self) -> Fraction:
        return 4 * self.c[0]

    def is_zero(self):
        return all(x == 0 for x in self.c)

    def subfield_norm(self, i: int) -> QuadElt:
        """N_{L/k_i}(x) as an element of the i-th quadratic subfield."""
        y = self * self.K.sigma(i)(self)
        k = self.K.subfields[i - 1]
        # y has support on {1, sqrt(d_i)}
        for j in range(1, 4):
            if j != i:
                assert y.c[j] == 0, "subfield norm not in the subfield"
        return k.element(y.c[0], y.c[i])

    def log_abs(self, place: int) -> float:
        """Archimedean log at one of the real places (totally real case)."""
        K = self.K
        signs = K._real_place_signs[place]
        sq = [math.sqrt(abs(d)) for d in K.ds]
        val = float(self.c[0]) + sum(float(self.c[i + 1]) * signs[i] * sq[i]
                                     for i in range(3))
        if abs(val) < 1e-12:
            raise ValueError("embedding too small for float log")
        return math.log(abs(val))


class BiquadraticField(NumberField):
    kind = "biquadratic"
    degree = 4

    def __init__(self, d1: int, d2: int):
        from .fields import quadratic_field
        d3 = _squarefree(d1 * d2)
        self.ds = (d1, d2, d3)
        self.subfields = (quadratic_field(d1), quadratic_field(d2),
                          quadratic_field(d3))
        self.discriminant = (self.subfields[0].discriminant
                             * self.subfields[1].discriminant
                             * self.subfields[2].discriminant)
        self.signature = (4, 0) if all(d > 0 for d in self.ds) else (0, 2)
        self.conductor = abs(self.discriminant)  # exponent-2 field: lcm works too
        self.label = f"Q(sqrt({d1}),sqrt({d2}))"
        s = -2 * (d1 + d2)
        self.defining_poly = ((d1 - d2)**2, 0, s, 0, 1)
        self._mul_table = self._build_table()
        self._prime_cache = {}
        if self.signature[0]:
            self._real_place_signs = [(1, 1, 1), (1, -1, -1),
                                      (-1, 1, -1), (-1, -1, 1)]
        else:
            self._real_place_signs = []

    def _build_table(self):
        d1, d2, d3 = self.ds
        g3 = math.isqrt(abs(d1 * d2 // d3)) if d3 else 0
        g2 = math.isqrt(abs(d1 * d3 // d2))
        g1 = math.isqrt(abs(d2 * d3 // d1))

        def sgn(a, b):
            return -1 if a < 0 and b < 0 else 1

        tab = [[None] * 4 for _ in range(4)]
        for j in range(4):
            tab[0][j] = (Fraction(1), j)
            tab[j][0] = (Fraction(1), j)
        tab[1][1] = (Fraction(d1), 0)
        tab[2][2] = (Fraction(d2), 0)
        tab[3][3] = (Fraction(d3), 0)
        tab[1][2] = tab[2][1] = (Fraction(sgn(d1, d2) * g3), 3)
        tab[1][3] = tab[3][1] = (Fraction(sgn(d1, d3) * g2), 2)
        tab[2][3] = tab[3][2] = (Fraction(sgn(d2, d3) * g1), 1)
        return tab

    def element(self, x, *rest):
        if isinstance(x, BiquadElt):
            if x.K != self:
                raise ValueError("foreign element")
            return x
        if isinstance(x, QuadElt):
            return self.embed_quad(x)
        if rest:
            return BiquadElt(self, (x,) + tuple(rest))
        if isinstance(x, (list, tuple)):
            return BiquadElt(self, x)
        return BiquadElt(self, (Fraction(x), 0, 0, 0))

    def one(self):
        return BiquadElt(self, (1, 0, 0, 0))

    def embed_quad(self, x: QuadElt) -> BiquadElt:
        i = self.subfield_index(x.K)
        out = [x.a, 0, 0, 0]
        out[i + 1] = x.b
        return BiquadElt(self, out)

    def subfield_index(self, k) -> int:
        for i, s in enumerate(self.subfields):
            if s == k:
                return i
        raise ValueError(f"{k.label} is not a subfield of {self.label}")

    def sigma(self, i: int):
        """Automorphism fixing the i-th subfield (i in 1..3); sigma(0) = id."""
        if i == 0:
            return lambda x: x

        def act(x: BiquadElt) -> BiquadElt:
            out = list(x.c)
            for j in range(1, 4):
                if j != i:
                    out[j] = -out[j]
            return BiquadElt(self, out)

        return act

    def galois_elements(self):
        return [self.sigma(i) for i in (0, 1, 2, 3)]

    def primes_above(self, p: int):
        if p not in self._prime_cache:
            self._prime_cache[p] = _factor_prime_biquad(self, p)
        return self._prime_cache[p]


# ---------------------------------------------------------------------------
# primes
# ---------------------------------------------------------------------------


class BiquadPrime:
    """Prime of a biquadratic field, carrying its subfield primes below."""

    def __init__(self, field, p, e, f, idx, below):
        self.field = field
        self.p = p
        self.e = e
        self.f = f
        self.kind = "biquad"
        self.idx = idx
        self.below_primes = tuple(below)   # one PrimeIdeal per subfield

    @property
    def below(self):
        return self.p

    def norm(self):
        return self.p**self.f

    def key(self):
        return (self.p, self.idx, self.field.label)

    def __repr__(self):
        return f"({self.p};{self.field.label}#{self.idx})"

    def __eq__(self, other):
        return isinstance(other, BiquadPrime) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other):
        return (self.norm(), self.p, self.idx) < (other.norm(), other.p, other.idx)

    def below_in(self, i: int) -> PrimeIdeal:
        """The prime of the i-th subfield (1-based) under this one."""
        return self.below_primes[i - 1]

    def two_element_rep(self):
        return (self.p, None)

    def valuation(self, x: BiquadElt) -> int:
        vals = _biquad_valuations(self.field, self.p, x)
        return vals[self.idx]

    def reduce(self, x: BiquadElt):
        """Residue image for unramified P over odd p (f <= 2)."""
        if self.p == 2 or self.e != 1:
            raise UnsupportedField("biquadratic reductions only at odd unramified p")
        L = self.field
        den = math.lcm(*(c.denominator for c in x.c))
        if den % self.p == 0:
            raise ValueError("denominator meets p")
        y = [int(c * den) for c in x.c]
        inv = pow(den, -1, self.p)
        roots = self._sqrt_images()
        if self.f == 1:
            acc = (y[0] + sum(y[i + 1] * roots[i] for i in range(3))) * inv
            return acc % self.p
        gf = self.gf()
        acc = gf.embed(y[0])
        for i in range(3):
            acc = tuple((a + b) % self.p for a, b in
                        zip(acc, gf.mul(roots[i], gf.embed(y[i + 1]))))
        return gf.mul(acc, gf.embed(inv))

    def _sqrt_images(self):
        """Images of sqrt(d_i) in the residue field, consistent with below."""
        L = self.field
        p = self.p
        if self.f == 1:
            out = []
            for i in range(3):
                q = self.below_primes[i]
                k = L.subfields[i]
                r = q.root_lift(1)
                # omega root -> sqrt(d) residue
                if k.d % 4 == 1:
                    out.append((2 * r - 1) % p)
                else:
                    out.append(r % p)
            return out
        # f = 2: residue field F_p[t]/(t^2 - d_i0) for an inert subfield i0
        gf = self.gf()
        i0 = self._inert_index()
        d0 = L.subfields[i0].d
        images = [None, None, None]
        images[i0] = gf.element([0, 1])
        for i in range(3):
            if i == i0:
                continue
            q = self.below_primes[i]
            k = L.subfields[i]
            if q.kind == "split":
                r = q.root_lift(1)
                rr = (2 * r - 1) % p if k.d % 4 == 1 else r % p
                images[i] = gf.embed(rr)
        # remaining inert subfield (if two are inert): sqrt(d_j) = c * t
        for i in range(3):
            if images[i] is None:
                dj = L.subfields[i].d
                # (c t)^2 = c^2 d0 = dj mod p
                c = _mod_sqrt(dj * pow(d0, -1, p) % p, p)
                images[i] = gf.element([0, c])
        # fix signs for consistency with the multiplication table
        images = self._fix_signs(images, gf)
        return images

    def _inert_index(self):
        for i in range(3):
            if self.below_primes[i].kind == "inert":
                return i
        raise AssertionError("f=2 prime with no inert subfield")

    def _fix_signs(self, images, gf):
        # require images[0]*images[1] = table-coeff * images[2]
        coef, k = self.field._mul_table[1][2]
        assert k == 3
        lhs = gf.mul(images[0], images[1])
        rhs = gf.mul(gf.embed(int(coef) % self.p), images[2])
        if lhs == rhs:
            return images
        images[2] = tuple((-a) % self.p for a in images[2])
        lhs2 = gf.mul(images[0], images[1])
        rhs2 = gf.mul(gf.embed(int(coef) % self.p), images[2])
        assert lhs2 == rhs2, "inconsistent residue sign pattern"
        return images

    def gf(self) -> GFq:
        assert self.f == 2
        i0 = self._inert_index()
        d0 = self.field.subfields[i0].d
        return GFq(self.p, [(-d0) % self.p, 0, 1])

    # -- 2-adic local norm data -------------------------------------------

    def local_norm_unit(self, x: BiquadElt, precision: int):
        """(v, u) with N_{L_P/Q2}(x) = 2^v u; P above 2 only."""
        assert self.p == 2
        L = self.field
        nloc = self.e * self.f
        if nloc == 4:
            n = x.norm()
            v = _frac_val2(n)
            u = n / Fraction(2)**v
            return v, PadicInt(2, u, precision)
        if nloc == 1:
            v, u = _biquad_embedding2(L, self, x, precision)
            return v, u
        # nloc == 2: decomposition subfield = the one whose prime splits
        i0 = None
        for i in range(3):
            if self.below_primes[i].kind == "split":
                i0 = i
                break
        assert i0 is not None, "no split subfield under a degree-2 place"
        y = x.subfield_norm(i0 + 1)
        q = self.below_primes[i0]
        v, u = q.split_unit_embedding(y, precision)
        return v, u


def _frac_val2(x: Fraction) -> int:
    v = 0
    n, d = x.numerator, x.denominator
    if n == 0:
        raise ValueError("valuation of 0")
    while n % 2 == 0:
        n //= 2
        v += 1
    while d % 2 == 0:
        d //= 2
        v -= 1
    return v


def _biquad_embedding2(L, P, x, precision):
    """Embedding of x into Q2 when 2 splits completely; labeled by P.idx."""
    # sign pattern from idx: (s1, s2) in {0,1}^2, s3 determined
    den = math.lcm(*(c.denominator for c in x.c))
    extra = 0
    dd = den
    while dd % 2 == 0:
        dd //= 2
        extra += 1
    prec = precision + extra + 8
    roots = []
    for i in range(3):
        q = P.below_primes[i]
        k = L.subfields[i]
        r = q.root_lift(prec)
        mod = 2**prec
        sq = (2 * r - 1) % mod if k.d % 4 == 1 else r % mod
        roots.append(sq)
    mod = 2**prec
    num = (int(x.c[0] * den) + sum(int(x.c[i + 1] * den) * roots[i]
                                   for i in range(3))) % mod
    v = 0
    while num % 2 == 0 and v < prec - precision - 2:
        num //= 2
        v += 1
    if num % 2 == 0:
        raise ArithmeticError("embedding valuation exceeded working precision")
    u = num * pow(dd, -1, mod) % mod
    return v - extra, PadicInt(2, u, precision)


def _mod_sqrt(a, p):
    from .padic import _sqrt_mod_prime
    return _sqrt_mod_prime(a % p, p)


def _factor_prime_biquad(L: BiquadraticField, p: int):
    subprimes = [L.subfields[i].primes_above(p) for i in range(3)]
    kinds = [sp[0].kind if len(sp) == 1 else "split" for sp in subprimes]
    if p != 2 and all(k != "ramified" for k in kinds):
        nsplit = sum(1 for k in kinds if k == "split")
        if nsplit == 3:
            out = []
            for idx, (s1, s2) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
                b1 = subprimes[0][s1]
                b2 = subprimes[1][s2]
                b3 = _matching_third(L, p, b1, b2, subprimes[2])
                out.append(BiquadPrime(L, p, 1, 1, idx, (b1, b2, b3)))
            return out
        assert nsplit == 1, "even product of nonsplit characters"
        i0 = kinds.index("split")
        out = []
        for idx in (0, 1):
            below = []
            for i in range(3):
                below.append(subprimes[i][idx] if i == i0 else subprimes[i][0])
            out.append(BiquadPrime(L, p, 1, 2, idx, tuple(below)))
        return out
    if p != 2:
        # odd ramified: p divides exactly two subfield discriminants
        ram = [i for i, k in enumerate(kinds) if k == "ramified"]
        assert len(ram) == 2
        i0 = [i for i in range(3) if i not in ram][0]
        if kinds[i0] == "split":
            out = []
            for idx in (0, 1):
                below = []
                for i in range(3):
                    below.append(subprimes[i][idx] if i == i0 else subprimes[i][0])
                out.append(BiquadPrime(L, p, 2, 1, idx, tuple(below)))
            return out
        return [BiquadPrime(L, p, 2, 2, 0,
                            tuple(subprimes[i][0] for i in range(3)))]
    # p = 2: local degree from the square classes of the d_i
    classes = {_two_adic_class(d) for d in L.ds}
    classes.discard((0, 1))
    nloc = 1 if not classes else (2 if len(classes) == 1 else 4)
    g = 4 // nloc
    if nloc == 1:
        out = []
        for idx, (s1, s2) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
            b1 = subprimes[0][s1]
            b2 = subprimes[1][s2]
            b3 = _matching_third(L, 2, b1, b2, subprimes[2])
            out.append(BiquadPrime(L, 2, 1, 1, idx, (b1, b2, b3)))
        return out
    # f = 2 iff the unramified class (odd, 5 mod 8) is generated
    unram = (0, 5)
    gen = set(classes)
    for c1 in classes:
        for c2 in classes:
            gen.add(_class_mul(c1, c2))
    gen.discard((0, 1))
    f = 2 if unram in gen or unram in classes else 1
    e = nloc // f
    if g == 1:
        return [BiquadPrime(L, 2, e, f, 0,
                            tuple(subprimes[i][0] for i in range(3)))]
    # g = 2 at p = 2: index by the split (or lowest-degree) subfield's primes
    i0 = None
    for i in range(3):
        if len(subprimes[i]) == 2:
            i0 = i
            break
    assert i0 is not None
    out = []
    for idx in (0, 1):
        below = []
        for i in range(3):
            below.append(subprimes[i][idx] if i == i0 else subprimes[i][0])
        out.append(BiquadPrime(L, 2, e, f, idx, tuple(below)))
    return out


def _two_adic_class(d: int):
    v = 0
    while d % 2 == 0:
        d //= 2
        v += 1
    return (v % 2, d % 8)


def _class_mul(c1, c2):
    v = (c1[0] + c2[0]) % 2
    u = (c1[1] * c2[1]) % 8
    if c1[0] and c2[0]:  # 2 * 2 = 4 is a square times nothing
        pass
    return (v, u)


def _matching_third(L, p, b1, b2, third_primes):
    """The k3-prime consistent with the chosen roots of k1 and k2."""
    if len(third_primes) == 1:
        return third_primes[0]
    prec = 4 if p == 2 else 1
    mod = p**prec

    def sqrt_img(q, k):
        r = q.root_lift(prec)
        return (2 * r - 1) % mod if k.d % 4 == 1 else r % mod

    s1 = sqrt_img(b1, L.subfields[0])
    s2 = sqrt_img(b2, L.subfields[1])
    coef, _ = L._mul_table[1][2]
    target = s1 * s2 % mod
    for q in third_primes:
        s3 = sqrt_img(q, L.subfields[2])
        if (int(coef) * s3 - target) % mod == 0:
            return q
    raise ArithmeticError("no consistent third-subfield prime")


def _biquad_valuations(L: BiquadraticField, p: int, x: BiquadElt):
    """Valuations of x at all primes of L above p, solved from subfield norms."""
    primes = L.primes_above(p)
    n = len(primes)
    rows, rhs = [], []
    for i in range(3):
        k = L.subfields[i]
        y = x.subfield_norm(i + 1)
        for q in k.primes_above(p):
            row = []
            for P in primes:
                if P.below_primes[i] == q:
                    row.append(P.f // q.f)
                else:
                    row.append(0)
            rows.append(row)
            rhs.append(q.valuation(y))
    # least-squares-free exact solve: the system has a unique solution
    sol = _solve_int_system(rows, rhs, n)
    return {P.idx: v for P, v in zip(primes, sol)}


def _solve_int_system(rows, rhs, n):
    import itertools
    a = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    piv = 0
    cols = []
    for col in range(n):
        sel = None
        for r in range(piv, len(a)):
            if a[r][col] != 0:
                sel = r
                break
        if sel is None:
            continue
        a[piv], a[sel] = a[sel], a[piv]
        cols.append(col)
        for r in range(len(a)):
            if r != piv and a[r][col] != 0:
                fac = a[r][col] / a[piv][col]
                a[r] = [u - fac * v for u, v in zip(a[r], a[piv])]
        piv += 1
        if piv == n:
            break
    assert piv == n, "valuation system underdetermined"
    out = [Fraction(0)] * n
    for i, col in enumerate(cols):
        out[col] = a[i][n] / a[i][col]
    for r in range(len(a)):
        assert sum(Fraction(rows[r][j]) * out[j] for j in range(n)) == rhs[r]
    for v in out:
        assert v.denominator == 1
    return [int(v) for v in out]
