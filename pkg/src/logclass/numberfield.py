"""Exact arithmetic in the small-field catalogue: Q, quadratics, cyclic cubics.

Fields are monogenic by construction (quadratics over the omega basis,
catalogued cubics over the power basis).  Prime splitting, valuations and
residue maps run on exact integers; Hensel lifts supply the split-place
embeddings.  Class groups come from relation saturation at two independent
height bounds, units from the continued-fraction cycle (real quadratic) or
certified conjugate lattices (cubic).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from sympy import factorint, isprime

from .errors import PreconditionFailed, SearchExhausted, UnsupportedField
from .gfq import GFq
from .padic import PadicInt, _sqrt_mod_prime, lift_root


def flog(n) -> float:
    """log|n| robust to integers far beyond float range."""
    if isinstance(n, Fraction):
        return flog(n.numerator) - flog(n.denominator)
    m = abs(int(n))
    if m == 0:
        raise ValueError("log 0")
    e = max(0, m.bit_length() - 53)
    return math.log(m >> e) + e * math.log(2)


def _squarefree_part(n: int) -> int:
    s = 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            s *= p
    return s if n > 0 else -s


# ---------------------------------------------------------------------------
# fields and elements
# ---------------------------------------------------------------------------


class NumberField:
    """Base class; concrete kinds are rational, quadratic, cyclic cubic."""

    kind = "abstract"
    abelian_over_Q = True

    def __repr__(self):
        return self.label

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.label == other.label

    def __hash__(self):
        return hash(self.label)

    def primes_above(self, p: int):
        raise NotImplementedError


class RationalField(NumberField):
    kind = "rational"
    degree = 1
    signature = (1, 0)
    discriminant = 1
    conductor = 1
    label = "Q"
    defining_poly = (0, 1)

    def element(self, x):
        return Fraction(x)

    def one(self):
        return Fraction(1)

    def primes_above(self, p):
        return [PrimeIdeal(self, p, 1, 1, "rational", idx=0)]


QQ = RationalField()


class QuadElt:
    """a + b sqrt(d) with Fraction coordinates."""

    __slots__ = ("K", "a", "b")

    def __init__(self, K, a, b):
        self.K = K
        self.a = Fraction(a)
        self.b = Fraction(b)

    def __repr__(self):
        return f"({self.a}+{self.b}*sqrt({self.K.d}))"

    def __eq__(self, other):
        return (isinstance(other, QuadElt) and self.K == other.K
                and self.a == other.a and self.b == other.b)

    def __hash__(self):
        return hash((self.K.label, self.a, self.b))

    def __add__(self, o):
        o = self.K.element(o)
        return QuadElt(self.K, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadElt(self.K, -self.a, -self.b)

    def __sub__(self, o):
        return self + (-self.K.element(o))

    def __rsub__(self, o):
        return -(self - o)

    def __mul__(self, o):
        o = self.K.element(o)
        d = self.K.d
        return QuadElt(self.K, self.a * o.a + d * self.b * o.b,
                       self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self.K.element(o)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError
        return self * o.conj() * Fraction(1, n)

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

    def conj(self):
        return QuadElt(self.K, self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.K.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def is_integral(self):
        if self.K.d % 4 == 1:
            return (2 * self.b).denominator == 1 and (self.a - self.b).denominator == 1
        return self.a.denominator == 1 and self.b.denominator == 1

    def omega_coords(self):
        """(u, v) with x = u + v*omega over the integral basis."""
        if self.K.d % 4 == 1:
            v = 2 * self.b
            u = self.a - self.b
        else:
            u, v = self.a, self.b
        return u, v

    def embedding_sign(self, place: int = 0) -> int:
        """Exact sign of the real embedding a + (+-)b sqrt(d), d > 0."""
        s = 1 if place == 0 else -1
        a, b = self.a, s * self.b
        if a == 0 and b == 0:
            return 0
        if a >= 0 and b >= 0:
            return 1
        if a <= 0 and b <= 0:
            return -1
        if a * a > self.K.d * b * b:
            return 1 if a > 0 else -1
        return 1 if b > 0 else -1

    def log_abs(self, place: int = 0, _retry: bool = True) -> float:
        """log of the absolute value at the real place `place` (d>0)."""
        if self.is_zero():
            raise ValueError("log 0")
        d = self.K.d
        if d < 0:
            return flog(self.norm()) / 2
        sq = math.isqrt(d * 4**60)  # sqrt(d) at ~60 bits
        sgn = 1 if place == 0 else -1
        num = self.a.numerator * self.b.denominator * 2**60 \
            + sgn * self.b.numerator * self.a.denominator * sq
        den = self.a.denominator * self.b.denominator * 2**60
        err = abs(self.b.numerator * self.a.denominator) >> 44
        if _retry and abs(num) <= err + 1:
            # catastrophic cancellation: |x| = |N(x)| / |conj(x)| at this place
            return flog(self.norm()) - self.conj().log_abs(place, _retry=False)
        if num == 0:
            raise ValueError("embedding indistinguishable from 0")
        return flog(num) - flog(den)


class QuadraticField(NumberField):
    kind = "quadratic"
    degree = 2

    def __init__(self, d: int):
        d = int(d)
        if d in (0, 1) or _squarefree_part(d) != d:
            raise ValueError(f"d={d} must be squarefree, not 0 or 1")
        self.d = d
        self.discriminant = d if d % 4 == 1 else 4 * d
        self.signature = (2, 0) if d > 0 else (0, 1)
        self.conductor = abs(self.discriminant)
        self.label = f"Q(sqrt({d}))"
        if d % 4 == 1:
            self.defining_poly = ((1 - d) // 4, -1, 1)   # x^2 - x + (1-d)/4
            self.omega_trace, self.omega_norm = 1, (1 - d) // 4
        else:
            self.defining_poly = (-d, 0, 1)
            self.omega_trace, self.omega_norm = 0, -d
        self._prime_cache = {}

    def element(self, x, b=None):
        if isinstance(x, QuadElt):
            if x.K != self:
                raise ValueError("foreign element")
            return x
        if b is not None:
            return QuadElt(self, x, b)
        return QuadElt(self, Fraction(x), 0)

    def one(self):
        return QuadElt(self, 1, 0)

    def sqrt_gen(self):
        return QuadElt(self, 0, 1)

    def omega(self):
        if self.d % 4 == 1:
            return QuadElt(self, Fraction(1, 2), Fraction(1, 2))
        return QuadElt(self, 0, 1)

    def from_omega_coords(self, u, v):
        return self.element(u) + Fraction(v) * self.omega()

    def primes_above(self, p: int):
        if p not in self._prime_cache:
            self._prime_cache[p] = _factor_prime_quadratic(self, p)
        return self._prime_cache[p]

    def conjugation(self, x: QuadElt) -> QuadElt:
        return x.conj()


class CubicElt:
    __slots__ = ("K", "c")

    def __init__(self, K, coords):
        self.K = K
        self.c = tuple(Fraction(x) for x in coords)

    def __repr__(self):
        return f"cubic{self.c}"

    def __eq__(self, other):
        return isinstance(other, CubicElt) and self.K == other.K and self.c == other.c

    def __hash__(self):
        return hash((self.K.label, self.c))

    def __add__(self, o):
        o = self.K.element(o)
        return CubicElt(self.K, [x + y for x, y in zip(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self):
        return CubicElt(self.K, [-x for x in self.c])

    def __sub__(self, o):
        return self + (-self.K.element(o))

    def __rsub__(self, o):
        return -(self - o)

    def __mul__(self, o):
        o = self.K.element(o)
        a, b = self.c, o.c
        raw = [Fraction(0)] * 5
        for i in range(3):
            if a[i] == 0:
                continue
            for j in range(3):
                raw[i + j] += a[i] * b[j]
        c0, c1, c2 = self.K.coeffs
        for k in (4, 3):
            top = raw[k]
            if top:
                raw[k] = Fraction(0)
                raw[k - 1] -= top * c2
                raw[k - 2] -= top * c1
                raw[k - 3] -= top * c0
        return CubicElt(self.K, raw[:3])

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
        # x/y = x * adj(y)/N(y) via the multiplication matrix inverse
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError
        m = _mult_matrix(o)
        inv = _mat3_inverse(m)
        x = self.c
        return CubicElt(self.K, [sum(inv[i][j] * x[j] for j in range(3))
                                 for i in range(3)])

    def norm(self) -> Fraction:
        return _mat3_det(_mult_matrix(self))

    def trace(self) -> Fraction:
        m = _mult_matrix(self)
        return m[0][0] + m[1][1] + m[2][2]

    def is_zero(self):
        return all(x == 0 for x in self.c)

    def is_integral(self):
        return all(x.denominator == 1 for x in self.c)

    def log_abs(self, place: int) -> float:
        r = self.K.real_roots()[place]
        val = float(self.c[0]) + float(self.c[1]) * r + float(self.c[2]) * r * r
        if abs(val) < 1e-12:
            raise ValueError("embedding too close to 0 for float log")
        return math.log(abs(val))


def _mult_matrix(x: CubicElt):
    K = x.K
    cols = []
    basis = [K.one(), K.theta(), K.theta() * K.theta()]
    for e in basis:
        prod = x * e
        cols.append(prod.c)
    return [[cols[j][i] for j in range(3)] for i in range(3)]


def _mat3_det(m) -> Fraction:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _mat3_inverse(m):
    det = _mat3_det(m)
    cof = [[(m[(i + 1) % 3][(j + 1) % 3] * m[(i + 2) % 3][(j + 2) % 3]
             - m[(i + 1) % 3][(j + 2) % 3] * m[(i + 2) % 3][(j + 1) % 3])
            for j in range(3)] for i in range(3)]
    return [[cof[j][i] / det for j in range(3)] for i in range(3)]


class CyclicCubicField(NumberField):
    kind = "cubic"
    degree = 3
    signature = (3, 0)

    def __init__(self, coeffs, conductor: int):
        # monic x^3 + c2 x^2 + c1 x + c0, discriminant = conductor^2
        self.coeffs = tuple(int(c) for c in coeffs)
        self.conductor = conductor
        self.discriminant = conductor * conductor
        c0, c1, c2 = self.coeffs
        disc = (18 * c2 * c1 * c0 - 4 * c2**3 * c0 + c2**2 * c1**2
                - 4 * c1**3 - 27 * c0**2)
        if disc != self.discriminant:
            raise UnsupportedField(
                f"poly discriminant {disc} != conductor^2; non-monogenic cubic")
        self.defining_poly = (c0, c1, c2, 1)
        self.label = f"cubic({conductor})"
        self._roots = None
        self._sigma = None
        self._prime_cache = {}

    def element(self, x, *rest):
        if isinstance(x, CubicElt):
            if x.K != self:
                raise ValueError("foreign element")
            return x
        if rest:
            return CubicElt(self, (x,) + tuple(rest))
        if isinstance(x, (list, tuple)):
            return CubicElt(self, x)
        return CubicElt(self, (Fraction(x), 0, 0))

    def one(self):
        return CubicElt(self, (1, 0, 0))

    def theta(self):
        return CubicElt(self, (0, 1, 0))

    def real_roots(self):
        if self._roots is None:
            c0, c1, c2 = self.coeffs
            self._roots = sorted(_cubic_real_roots(c2, c1, c0))
        return self._roots

    def automorphism(self):
        """A generator sigma of Gal(K/Q) as a map on elements."""
        if self._sigma is None:
            self._sigma = _cubic_automorphism(self)
        return self._sigma

    def primes_above(self, p: int):
        if p not in self._prime_cache:
            self._prime_cache[p] = _factor_prime_cubic(self, p)
        return self._prime_cache[p]


def _cubic_real_roots(a2, a1, a0):
    # all real (totally real field); Newton from spread starts, then polish
    def f(x):
        return ((x + a2) * x + a1) * x + a0

    def fp(x):
        return (3 * x + 2 * a2) * x + a1

    bound = 1 + max(abs(a2), abs(a1), abs(a0))
    roots = []
    seen = []
    for start in [x * bound / 50.0 for x in range(-50, 51)]:
        x = start
        for _ in range(80):
            d = fp(x)
            if abs(d) < 1e-14:
                break
            x -= f(x) / d
        if abs(f(x)) < 1e-8 and all(abs(x - s) > 1e-6 for s in seen):
            seen.append(x)
            roots.append(x)
    if len(roots) != 3:
        raise ArithmeticError("failed to isolate three real roots")
    return roots


def _cubic_automorphism(K: CyclicCubicField):
    """sigma with sigma(theta) = q(theta), coefficients found by interpolation
    against the numerical roots and verified exactly."""
    r = K.real_roots()
    # try the cyclic permutations of the roots
    for perm in ((1, 2, 0), (2, 0, 1)):
        tgt = [r[perm[i]] for i in range(3)]
        # solve Vandermonde [1, r, r^2] q = tgt numerically
        import itertools
        m = [[1.0, r[i], r[i] * r[i]] for i in range(3)]
        q = _solve3(m, tgt)
        cand = [Fraction(round(x * 6), 6) for x in q]  # denominators divide 6 here
        if all(abs(float(c) - x) < 1e-5 for c, x in zip(cand, q)):
            sig_theta = CubicElt(K, cand)
            # verify: poly(sig_theta) = 0 and sigma != id
            c0, c1, c2 = K.coeffs
            val = sig_theta * sig_theta * sig_theta + c2 * (sig_theta * sig_theta) \
                + c1 * sig_theta + K.element(c0)
            if val.is_zero() and sig_theta != K.theta():
                def sigma(x: CubicElt) -> CubicElt:
                    acc = K.element(x.c[0])
                    acc = acc + x.c[1] * sig_theta
                    acc = acc + x.c[2] * (sig_theta * sig_theta)
                    return acc
                return sigma
    raise UnsupportedField("no exact cubic automorphism found")


def _solve3(m, b):
    import copy
    a = [row[:] + [b[i]] for i, row in enumerate(m)]
    for i in range(3):
        piv = max(range(i, 3), key=lambda r: abs(a[r][i]))
        a[i], a[piv] = a[piv], a[i]
        for r in range(3):
            if r != i:
                fac = a[r][i] / a[i][i]
                a[r] = [x - fac * y for x, y in zip(a[r], a[i])]
    return [a[i][3] / a[i][i] for i in range(3)]


# ---------------------------------------------------------------------------
# prime ideals
# ---------------------------------------------------------------------------


class PrimeIdeal:
    """Prime of a catalogued field with enough data for valuations/residues.

    kind: "rational", "split", "inert", "ramified"; idx orders the primes
    above p canonically (split roots ascending).
    """

    def __init__(self, field, p, e, f, kind, idx=0, root=None):
        self.field = field
        self.p = p
        self.e = e
        self.f = f
        self.kind = kind
        self.idx = idx
        self.root = root          # residue of the monogenic generator mod p
        self._lift_cache = {}
        self._gf = None

    @property
    def below(self):
        return self.p

    def norm(self):
        return self.p**self.f

    def __repr__(self):
        return f"({self.p};{self.field.label}#{self.idx})"

    def key(self):
        return (self.p, self.idx, self.field.label)

    def __eq__(self, other):
        return isinstance(other, PrimeIdeal) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other):
        return (self.norm(), self.p, self.idx) < (other.norm(), other.p, other.idx)

    def two_element_rep(self):
        K = self.field
        if K.kind == "rational":
            return (self.p, None)
        gen = K.omega() if K.kind == "quadratic" else K.theta()
        if self.kind == "inert":
            return (self.p, None)
        if self.root is None:
            return (self.p, gen)
        return (self.p, gen - K.element(self.root))

    # -- local data -------------------------------------------------------

    def root_lift(self, k: int) -> int:
        """The monogenic generator's residue mod p^k (split/ramified, f=1)."""
        if k in self._lift_cache:
            return self._lift_cache[k]
        K = self.field
        if self.kind == "ramified":
            r = _ramified_root(K, self.p, k)
        else:
            poly = list(K.defining_poly)
            r = lift_root(poly, self.root, self.p, k).value
        self._lift_cache[k] = r
        return r

    def gf(self) -> GFq:
        """Residue field as GF(p^f) over the monogenic generator image."""
        if self._gf is None:
            K = self.field
            if self.f == 1:
                self._gf = GFq(self.p, [(-self.root) % self.p
                                        if self.root is not None else 0, 1])
            else:
                poly = [c % self.p for c in K.defining_poly]
                self._gf = GFq(self.p, poly)
        return self._gf

    def valuation(self, x) -> int:
        K = self.field
        if K.kind == "rational":
            x = Fraction(x)
            if x == 0:
                raise ValueError("valuation of 0")
            v = 0
            n, d = x.numerator, x.denominator
            while n % self.p == 0:
                n //= self.p
                v += 1
            while d % self.p == 0:
                d //= self.p
                v -= 1
            return v
        if x.is_zero():
            raise ValueError("valuation of 0")
        nx = x.norm()
        vn = _frac_val(nx, self.p)
        if self.kind == "inert":
            assert vn % self.f == 0
            return vn // self.f
        if self.kind == "ramified":
            return vn
        # split, f = 1: evaluate at the lifted root
        den = _common_den(x)
        y = den * x  # integral coords now
        k = max(vn + 2 * _frac_val(Fraction(den), self.p) + 2, 2)
        r = self.root_lift(k)
        mod = self.p**k
        val_int = _eval_at_root(y, r, mod)
        v = 0
        while val_int % self.p == 0 and v < k:
            val_int //= self.p
            v += 1
        return v - _frac_val(Fraction(den), self.p)

    def reduce(self, x):
        """Image of x in the residue field (tuple for f>1, int for f=1).

        Requires x integral at p up to a denominator coprime to p.
        """
        K = self.field
        if K.kind == "rational":
            x = Fraction(x)
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        den = _common_den(x)
        if den % self.p == 0:
            raise ValueError("reduction needs a denominator coprime to p")
        inv = pow(den, -1, self.p)
        y = den * x
        if self.f == 1:
            r = self.root_lift(1)
            return _eval_at_root(y, r, self.p) * inv % self.p
        gf = self.gf()
        coords = _int_coords(y)
        return gf.mul(gf.element([c % self.p for c in coords]), gf.embed(inv))

    def split_unit_embedding(self, x, precision: int):
        """(v, u) with image of x in Qp equal to p^v * u, u a unit PadicInt.

        Only for split places (local field Qp).
        """
        assert self.kind in ("split", "rational")
        p = self.p
        if self.field.kind == "rational":
            xf = Fraction(x)
            v = _frac_val(xf, p)
            u = xf / Fraction(p)**v
            return v, PadicInt(p, u, precision)
        den = _common_den(x)
        dv = _frac_val(Fraction(den), p)
        v = self.valuation(x)
        k = precision + max(v, 0) + dv + 2
        r = self.root_lift(k)
        mod = p**k
        num = _eval_at_root(den * x, r, mod)
        vn = v + dv  # valuation of the integral representative
        assert num % p**vn == 0
        u = (num // p**vn) * pow((den // p**dv) % mod, -1, mod) % mod
        return v, PadicInt(p, u, precision)


def _frac_val(x: Fraction, p: int) -> int:
    v = 0
    n, d = x.numerator, x.denominator
    if n == 0:
        raise ValueError("valuation of 0")
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _common_den(x) -> int:
    if isinstance(x, QuadElt):
        u, v = x.omega_coords()
        return math.lcm(u.denominator, v.denominator)
    return math.lcm(*(c.denominator for c in x.c))


def _int_coords(x):
    """Integer coordinates over the monogenic power basis (omega / theta)."""
    if isinstance(x, QuadElt):
        u, v = x.omega_coords()
        assert u.denominator == 1 and v.denominator == 1
        return [int(u), int(v)]
    assert all(c.denominator == 1 for c in x.c)
    return [int(c) for c in x.c]


def _eval_at_root(x, r: int, mod: int) -> int:
    coords = _int_coords(x)
    acc = 0
    for c in reversed(coords):
        acc = (acc * r + c) % mod
    return acc


def _ramified_root(K, p, k):
    """Root of the defining polynomial mod p^? for the ramified prime; only
    the mod-p root is well defined, which is all reductions need."""
    poly = K.defining_poly
    for r in range(p):
        acc = 0
        for c in reversed(poly):
            acc = (acc * r + c) % p
        if acc == 0:
            return r
    raise ArithmeticError("no ramified root found")


# -- factorization ----------------------------------------------------------


def _factor_prime_quadratic(K: QuadraticField, p: int):
    D = K.discriminant
    if p == 2:
        if K.d % 4 == 1:
            if K.d % 8 == 1:
                roots = sorted(r for r in range(2)
                               if (r * r - r + (1 - K.d) // 4) % 2 == 0)
                return [PrimeIdeal(K, 2, 1, 1, "split", i, roots[i]) for i in (0, 1)]
            return [PrimeIdeal(K, 2, 1, 2, "inert", 0)]
        r = 0 if K.d % 2 == 0 else 1
        return [PrimeIdeal(K, 2, 2, 1, "ramified", 0, r)]
    if D % p == 0:
        r = _ramified_root(K, p, 1)
        return [PrimeIdeal(K, p, 2, 1, "ramified", 0, r)]
    # Kronecker symbol on the monogenic polynomial
    c0, c1, _ = K.defining_poly
    disc = c1 * c1 - 4 * c0
    if pow(disc % p, (p - 1) // 2, p) == 1:
        s = _sqrt_mod_prime(disc % p, p)
        inv2 = pow(2, -1, p)
        roots = sorted(((-c1 + s) * inv2 % p, (-c1 - s) * inv2 % p))
        return [PrimeIdeal(K, p, 1, 1, "split", i, roots[i]) for i in (0, 1)]
    return [PrimeIdeal(K, p, 1, 2, "inert", 0)]


def _poly_gcd_mod(a, b, p):
    a = [x % p for x in a]
    b = [x % p for x in b]

    def deg(u):
        d = len(u) - 1
        while d >= 0 and u[d] == 0:
            d -= 1
        return d

    while deg(b) >= 0:
        da, db = deg(a), deg(b)
        if da < db:
            a, b = b, a
            continue
        inv = pow(b[deg(b)], -1, p)
        q = a[:]
        lead = q[da] * inv % p
        for i in range(db + 1):
            q[da - db + i] = (q[da - db + i] - lead * b[i]) % p
        a, b = b, q
    d = deg(a)
    if d < 0:
        return [0]
    inv = pow(a[d], -1, p)
    return [x * inv % p for x in a[:d + 1]]


def _powmod_poly(base, e, modpoly, p):
    """base(x)^e mod (modpoly, p), coefficient lists low-to-high."""
    def mulmod(u, v):
        out = [0] * (len(u) + len(v) - 1)
        for i, ui in enumerate(u):
            if ui:
                for j, vj in enumerate(v):
                    out[i + j] = (out[i + j] + ui * vj) % p
        # reduce mod modpoly (monic)
        dm = len(modpoly) - 1
        for k in range(len(out) - 1, dm - 1, -1):
            top = out[k]
            if top:
                out[k] = 0
                for i in range(dm):
                    out[k - dm + i] = (out[k - dm + i] - top * modpoly[i]) % p
        return out[:dm]

    result = [1]
    while e:
        if e & 1:
            result = mulmod(result, base)
        base = mulmod(base, base)
        e >>= 1
    return result


def _cubic_roots_mod_p(poly, p):
    """Roots mod p of a cubic that splits completely (cyclic field, split p)."""
    if p < 600:
        return sorted(r for r in range(p)
                      if sum(c * pow(r, i, p) for i, c in enumerate(poly)) % p == 0)
    # split x^p - x gcd, then Cantor-Zassenhaus by random shifts
    import random
    rng = random.Random(p)
    f = [c % p for c in poly]
    roots = []
    stack = [f]
    while stack:
        g = stack.pop()
        dg = len(g) - 1
        if dg == 1:
            roots.append((-g[0]) * pow(g[1], -1, p) % p)
            continue
        while True:
            a = rng.randrange(p)
            h = _powmod_poly([a, 1], (p - 1) // 2, g, p)
            h = h[:] + [0]
            h[0] = (h[0] - 1) % p
            d = _poly_gcd_mod(h, g, p)
            if 0 < len(d) - 1 < dg:
                q = _poly_divide_mod(g, d, p)
                stack.append(d)
                stack.append(q)
                break
    return sorted(roots)


def _poly_divide_mod(a, b, p):
    a = [x % p for x in a]
    out = [0] * (len(a) - len(b) + 1)
    inv = pow(b[-1], -1, p)
    for k in range(len(out) - 1, -1, -1):
        c = a[k + len(b) - 1] * inv % p
        out[k] = c
        if c:
            for i in range(len(b)):
                a[k + i] = (a[k + i] - c * b[i]) % p
    return out


def _factor_prime_cubic(K: CyclicCubicField, p: int):
    poly = list(K.defining_poly)
    if K.conductor % p == 0:
        r = _ramified_root(K, p, 1)
        return [PrimeIdeal(K, p, 3, 1, "ramified", 0, r)]
    # cyclic cubic: either splits completely or stays inert
    xp = _powmod_poly([0, 1], p, [c % p for c in poly], p)
    xp_minus_x = [(xp[i] - (1 if i == 1 else 0)) % p for i in range(max(len(xp), 2))]
    g = _poly_gcd_mod(xp_minus_x, [c % p for c in poly], p)
    if len(g) - 1 == 3:
        roots = _cubic_roots_mod_p(poly, p)
        return [PrimeIdeal(K, p, 1, 1, "split", i, roots[i]) for i in range(3)]
    if len(g) - 1 == 0:
        return [PrimeIdeal(K, p, 1, 3, "inert", 0)]
    raise ArithmeticError(f"unexpected partial splitting in cyclic cubic at {p}")


def factor_rational_prime(K: NumberField, p: int):
    """Complete splitting of p in K with sum(e*f) = degree."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    pr = K.primes_above(p)
    assert sum(q.e * q.f for q in pr) == K.degree
    return pr


def splitting_in_cyclotomic(p: int, m: int) -> int:
    """Multiplicative order of p modulo m (order 1 = split in Q(zeta_m))."""
    if math.gcd(p, m) != 1:
        raise ValueError("gcd(p, m) != 1")
    if m <= 2:
        return 1
    k, acc = 1, p % m
    while acc != 1:
        acc = acc * p % m
        k += 1
    return k
