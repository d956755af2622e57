"""Quadratic ideal and binary-form machinery for quadratic fields.

Ideals are HNF modules g*(a Z + (b + omega) Z).  Principality and generator
extraction go through exact lattice reduction (imaginary) or the reduction
cycle of the attached indefinite form with transformation tracking (real).
Definite form composition with BSGS supplies class orders for discriminants
far beyond the relation-search range.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .numberfield import PrimeIdeal, QuadElt, QuadraticField
from .padic import _sqrt_mod_prime


def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def _hnf2(gens):
    """HNF of the Z-module spanned by (x, y) pairs over the basis {1, w}.

    Returns (A, B, C) with module = A Z + (B + C w) Z, A, C > 0, 0 <= B < A.
    Requires full rank.
    """
    gens = [(int(x), int(y)) for x, y in gens if x or y]
    c, xs = 0, None
    vec = (0, 0)
    for (x, y) in gens:
        if y:
            if c == 0:
                c, vec = abs(y), ((x if y > 0 else -x), abs(y))
            else:
                g, s, t = _xgcd(c, y)
                vec = (s * vec[0] + t * x, g)
                c = g
    if c == 0:
        raise ArithmeticError("module not of full rank")
    a = 0
    for (x, y) in gens:
        a = math.gcd(a, x - (y // c) * vec[0])
    if a == 0:
        raise ArithmeticError("module not of full rank")
    return a, vec[0] % a, c


class QuadIdeal:
    """g * (a Z + (b + omega) Z) with a | N(b + omega), 0 <= b < a, g > 0."""

    __slots__ = ("K", "a", "b", "g")

    def __init__(self, K: QuadraticField, a: int, b: int, g: Fraction = Fraction(1)):
        t, n0 = K.omega_trace, K.omega_norm
        a = int(a)
        assert a > 0 and (b * b + t * b + n0) % a == 0
        self.K = K
        self.a = a
        self.b = b % a
        self.g = Fraction(g)

    def __repr__(self):
        return f"<{self.g}*({self.a},{self.b}+w)>"

    def __eq__(self, other):
        return (isinstance(other, QuadIdeal) and self.K == other.K
                and self.a == other.a and self.b == other.b and self.g == other.g)

    def norm(self) -> Fraction:
        return self.g * self.g * self.a

    def basis(self):
        K = self.K
        return (self.g * K.element(self.a),
                self.g * (K.element(self.b) + K.omega()))

    @classmethod
    def unit_ideal(cls, K):
        return cls(K, 1, 0)

    @classmethod
    def from_prime(cls, P: PrimeIdeal):
        K = P.field
        t, n0 = K.omega_trace, K.omega_norm
        p = P.p
        if P.kind == "inert":
            return cls(K, 1, 0, Fraction(p))
        if P.kind == "split":
            b = P.root % p
            assert (b * b + t * b + n0) % p == 0
            return cls(K, p, b)
        for b in range(p):
            if (b * b + t * b + n0) % p == 0:
                return cls(K, p, b)
        raise ArithmeticError("no HNF form for the ramified prime")

    @classmethod
    def from_element(cls, x: QuadElt):
        K = x.K
        u, v = x.omega_coords()
        den = math.lcm(u.denominator, v.denominator)
        U, V = int(u * den), int(v * den)
        t, n0 = K.omega_trace, K.omega_norm
        # Z(U + V w) + Z(w(U + V w)); w^2 = t w - n0
        A, B, C = _hnf2([(U, V), (-V * n0, U + V * t)])
        return cls(K, A // C, B // C, Fraction(C, den))

    def __mul__(self, other: "QuadIdeal"):
        K = self.K
        t, n0 = K.omega_trace, K.omega_norm
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        gens = [
            (a1 * a2, 0),
            (a1 * b2, a1),
            (a2 * b1, a2),
            (b1 * b2 - n0, b1 + b2 + t),
        ]
        A, B, C = _hnf2(gens)
        return QuadIdeal(K, A // C, B // C, self.g * other.g * C)

    def __pow__(self, k: int):
        assert k >= 0
        out = QuadIdeal.unit_ideal(self.K)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scaled(self, x: Fraction):
        return QuadIdeal(self.K, self.a, self.b, self.g * abs(Fraction(x)))

    def form(self):
        """The binary form (A, B, C) of the primitive part, disc = field disc."""
        K = self.K
        t, n0 = K.omega_trace, K.omega_norm
        A = self.a
        B = 2 * self.b + t
        C = (self.b * self.b + t * self.b + n0) // self.a
        return (A, B, C)

    def contains(self, x: QuadElt) -> bool:
        al, be = self.basis()
        # solve x = m al + n be over Q, check integrality
        det = al.a * be.b - be.a * al.b
        if det == 0:
            return False
        m = (x.a * be.b - be.a * x.b) / det
        n = (al.a * x.b - x.a * al.b) / det
        return m.denominator == 1 and n.denominator == 1

    def principal_generator(self):
        """A generator when principal, else None.  Exact."""
        if self.K.d < 0:
            return self._principal_imaginary()
        return self._principal_real()

    def _principal_imaginary(self):
        K = self.K
        alpha, beta = self.basis()

        def ip2(x, y):  # 2 * <x, y> = Tr(x * conj(y))
            return (x * y.conj()).trace()

        a, b = alpha, beta
        if a.norm() > b.norm():
            a, b = b, a
        while True:
            m = round(Fraction(ip2(b, a), 2 * a.norm()))
            b = b - K.element(m) * a
            if b.norm() >= a.norm():
                break
            a, b = b, a
        nm = self.norm()
        for cand in (a, b, a + b, a - b):
            if not cand.is_zero() and abs(cand.norm()) == nm:
                return cand
        return None

    def _principal_real(self):
        K = self.K
        A, B, C = self.form()
        hit = indefinite_represent_unit(A, B, C, K.discriminant)
        if hit is None:
            return None
        m, n = hit
        x = K.element(m * self.a) + K.element(n) * (K.element(self.b) + K.omega())
        x = self.g * x
        assert abs(x.norm()) == self.norm()
        return x


# -- indefinite reduction cycle with tracking --------------------------------


def _indef_reduced(a, b, c, D):
    if b <= 0 or b * b >= D:
        return False
    return D < (b + 2 * abs(a))**2


def _rho(a, b, c, D):
    """One reduction step (a,b,c) -> (c, r, (r^2-D)/(4c)) with the transform."""
    tc = 2 * abs(c)
    base = (-b) % tc
    if c * c > D:
        r = base if base <= abs(c) else base - tc
    else:
        hi = math.isqrt(D)
        r = base + ((hi - base) // tc) * tc
    cc = (r * r - D) // (4 * c)
    s = (r + b) // (2 * c)
    # rho = S then T^s acting on representation coordinates
    return (c, r, cc), s


def _cycle_walk(A, B, C, D, visit):
    """Reduce (A,B,C) and walk its rho-cycle once, calling visit(form, M).

    M is the accumulated 2x2 integer matrix with f0(M v) = f_k(v); stops when
    the first reduced form recurs or visit returns a value (returned).
    """
    f = (A, B, C)
    m = [[1, 0], [0, 1]]

    def apply_rho(f, m):
        (a, b, c) = f
        nf, s = _rho(a, b, c, D)
        # M <- M @ S @ T^s ; S = [[0,-1],[1,0]], T^s = [[1,s],[0,1]]
        m00, m01, m10, m11 = m[0][0], m[0][1], m[1][0], m[1][1]
        # M @ S
        m00, m01 = m01, -m00
        m10, m11 = m11, -m10
        # @ T^s
        m01 += s * m00
        m11 += s * m10
        return nf, [[m00, m01], [m10, m11]]

    guard = 0
    while not _indef_reduced(*f, D):
        f, m = apply_rho(f, m)
        guard += 1
        if guard > 8 * (math.isqrt(D) + 10):
            raise ArithmeticError("reduction did not terminate")
    first = f
    while True:
        out = visit(f, m)
        if out is not None:
            return out
        f, m = apply_rho(f, m)
        guard += 1
        if guard > 64 * (math.isqrt(D) + 10):
            raise ArithmeticError("cycle walk exceeded bound")
        if f == first:
            return visit(f, m, last=True)


def indefinite_represent_unit(A, B, C, D):
    """(m, n) with A m^2 + B mn + C n^2 = +-1, or None if the cycle misses 1."""
    def visit(f, m, last=False):
        if abs(f[0]) == 1:
            return (m[0][0], m[1][0])
        if last:
            return ()
        return None

    out = _cycle_walk(A, B, C, D, visit)
    return None if out == () else out


def real_quad_fundamental_unit(K: QuadraticField) -> QuadElt:
    """Fundamental unit via the reduction cycle of the principal form."""
    t, n0 = K.omega_trace, K.omega_norm
    D = K.discriminant
    hits: list[QuadElt] = []

    def visit(f, m, last=False):
        if abs(f[0]) == 1:
            x = K.element(m[0][0]) + K.element(m[1][0]) * K.omega()
            hits.append(x)
        if last:
            return ()
        return None

    _cycle_walk(1, t, n0, D, visit)
    units = []
    for i, x in enumerate(hits):
        for y in hits[i + 1:]:
            u = y / x
            assert abs(u.norm()) == 1
            la = u.log_abs(0)
            if abs(la) > 1e-9:
                units.append((abs(la), u))
    if not units:
        raise ArithmeticError("no unit found on the principal cycle")
    units.sort(key=lambda p: p[0])
    u = units[0][1]
    # normalize: first embedding positive and > 1
    if u.log_abs(0) < 0:
        u = K.one() / u
    if u.embedding_sign(0) < 0:
        u = -u
    return u


# -- definite forms: reduction, composition, BSGS orders ---------------------


def definite_reduce(f):
    a, b, c = f
    while True:
        if -a < b <= a <= c:
            if a == c and b < 0:
                b = -b
            return (a, b, c)
        if a > c:
            a, b, c = c, -b, a
            continue
        # translate b into (-a, a]
        r = b % (2 * a)
        if r > a:
            r -= 2 * a
        c += (r * r - b * b) // (4 * a)
        b = r


def principal_form(D):
    if D % 4 == 0:
        return (1, 0, -D // 4)
    return (1, 1, (1 - D) // 4)


def ideal_from_form(K: QuadraticField, f) -> QuadIdeal:
    """Primitive ideal with .form() equal to f (consistent orientation)."""
    A, B, _ = f
    t = K.omega_trace
    assert (B - t) % 2 == 0
    b = ((B - t) // 2) % A
    return QuadIdeal(K, A, b)


def definite_compose(K: QuadraticField, f1, f2):
    """Composition of classes via exact ideal multiplication, reduced."""
    I = ideal_from_form(K, f1) * ideal_from_form(K, f2)
    return definite_reduce(I.form())


def form_inverse(f):
    a, b, c = f
    return definite_reduce((a, -b, c))


def form_pow(K, f, k):
    e = principal_form(K.discriminant)
    if k < 0:
        f, k = form_inverse(f), -k
    out = e
    base = f
    while k:
        if k & 1:
            out = definite_compose(K, out, base)
        base = definite_compose(K, base, base)
        k >>= 1
    return out


def form_order(K: QuadraticField, f, h_bound=None):
    """Order of the class of f in Cl(K), K imaginary, via BSGS."""
    D = K.discriminant
    f = definite_reduce(f)
    e = principal_form(D)
    if f == e:
        return 1
    if h_bound is None:
        h_bound = int(math.isqrt(-D) * (math.log(-D) + 3) / math.pi) + 10
    m = math.isqrt(h_bound) + 1
    baby = {}
    acc = e
    for j in range(m):
        baby.setdefault(acc, j)
        acc = definite_compose(K, acc, f)
    giant = form_pow(K, f, m)
    cur = giant
    n = None
    for i in range(1, m + 2):
        if cur in baby:
            n = i * m - baby[cur]
            break
        cur = definite_compose(K, cur, giant)
    if n is None or n == 0:
        raise ArithmeticError("BSGS failed to find the order")
    from sympy import factorint
    for q in factorint(n):
        while n % q == 0 and form_pow(K, f, n // q) == e:
            n //= q
    return n


def subgroup_table(K, forms, cap=400000):
    """BFS of <forms>: ({reduced form: exponent vector}, fundamental relations).

    The relations (differences across non-tree edges of the Cayley graph)
    generate the full kernel of Z^n -> <forms>.
    """
    D = K.discriminant
    e = principal_form(D)
    table = {e: tuple([0] * len(forms))}
    relations = []
    frontier = [e]
    while frontier:
        nxt = []
        for f in frontier:
            vec = table[f]
            for i, g in enumerate(forms):
                h = definite_compose(K, f, g)
                nv = list(vec)
                nv[i] += 1
                if h not in table:
                    table[h] = tuple(nv)
                    nxt.append(h)
                    if len(table) > cap:
                        raise ArithmeticError("subgroup enumeration cap hit")
                else:
                    rel = [a - b for a, b in zip(nv, table[h])]
                    if any(rel):
                        relations.append(rel)
        frontier = nxt
    return table, relations
