"""Finite-precision l-adic integers and exact linear algebra over Zl.

A PadicInt is a residue v mod l^N together with the exponent N; arithmetic
keeps the minimum precision of its operands and division by l^v costs v
digits, recorded rather than silently dropped.  The Iwasawa logarithm uses
the convention Log l = 0 and Log(torsion) = 0, with the l = 2 branch taken
through <u> = u/omega(u) = 1 mod 4.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DivisionByZeroDivisor, PrecisionExhausted

DEFAULT_PRECISION = 24


def _vl(n: int, ell: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


class PadicInt:
    """An element of Zl known modulo l^precision_exp."""

    __slots__ = ("ell", "value", "precision_exp")

    def __init__(self, ell: int, value, precision_exp: int = DEFAULT_PRECISION):
        if precision_exp <= 0:
            raise PrecisionExhausted(f"precision exponent {precision_exp} <= 0")
        self.ell = ell
        self.precision_exp = precision_exp
        if isinstance(value, Fraction):
            den = value.denominator
            if den % ell == 0:
                raise ValueError(f"{value} is not an l-adic integer at l={ell}")
            mod = ell**precision_exp
            value = value.numerator * pow(den, -1, mod)
        self.value = value % (ell**self.precision_exp)

    # -- basics ---------------------------------------------------------

    def __repr__(self):
        return f"{self.value} mod {self.ell}^{self.precision_exp}"

    def __eq__(self, other):
        if isinstance(other, int):
            other = PadicInt(self.ell, other, self.precision_exp)
        if not isinstance(other, PadicInt):
            return NotImplemented
        n = min(self.precision_exp, other.precision_exp)
        m = self.ell**n
        return self.ell == other.ell and self.value % m == other.value % m

    def __hash__(self):
        return hash((self.ell, self.value, self.precision_exp))

    def is_zero(self) -> bool:
        """True iff indistinguishable from 0 at this precision."""
        return self.value == 0

    def valuation(self):
        """l-valuation, or None when the residue is 0 at precision."""
        if self.value == 0:
            return None
        return _vl(self.value, self.ell)

    def unit_part(self) -> "PadicInt":
        v = self.valuation()
        if v is None:
            raise DivisionByZeroDivisor("unit part of 0 at precision")
        return PadicInt(self.ell, self.value // self.ell**v, self.precision_exp - v) \
            if v else self

    def with_precision(self, n: int) -> "PadicInt":
        if n > self.precision_exp:
            raise PrecisionExhausted(
                f"cannot raise precision {self.precision_exp} -> {n}")
        return PadicInt(self.ell, self.value, n)

    def lift(self) -> int:
        """Symmetric integer lift in (-l^N/2, l^N/2]."""
        m = self.ell**self.precision_exp
        return self.value - m if 2 * self.value > m else self.value

    # -- ring operations -------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return PadicInt(self.ell, other, self.precision_exp)
        if isinstance(other, PadicInt):
            if other.ell != self.ell:
                raise ValueError("mixed primes")
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.precision_exp, o.precision_exp)
        return PadicInt(self.ell, self.value + o.value, n)

    __radd__ = __add__

    def __neg__(self):
        return PadicInt(self.ell, -self.value, self.precision_exp)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.precision_exp, o.precision_exp)
        return PadicInt(self.ell, self.value * o.value, n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.value == 0:
            raise DivisionByZeroDivisor(f"division by {o!r}")
        v = _vl(o.value, self.ell)
        n = min(self.precision_exp, o.precision_exp) - v
        if n <= 0:
            raise PrecisionExhausted(f"division by {o!r} exhausts precision")
        if v:
            if self.value % self.ell**v:
                raise ValueError(
                    f"{self!r} not divisible by l^{v}; quotient not in Zl")
            num = self.value // self.ell**v
        else:
            num = self.value
        mod = self.ell**n
        return PadicInt(self.ell, num * pow(o.value // self.ell**v, -1, mod), n)

    def __pow__(self, k: int):
        if k < 0:
            return PadicInt(self.ell, 1, self.precision_exp) / self**(-k)
        return PadicInt(self.ell, pow(self.value, k, self.ell**self.precision_exp),
                        self.precision_exp)

    def __str__(self):
        return f"{self.value} mod {self.ell}^{self.precision_exp}"


def padic_arith(a: PadicInt, b: PadicInt, op: str) -> PadicInt:
    """Named dispatch kept for the documented operation surface."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


# -- Teichmueller and the Iwasawa logarithm -----------------------------


def teichmueller(x: PadicInt) -> PadicInt:
    """The root of unity omega(x) = x mod l (mod 4 for l = 2)."""
    ell, n = x.ell, x.precision_exp
    if x.value % ell == 0:
        raise ValueError("teichmueller lift needs a unit")
    if ell == 2:
        return PadicInt(2, 1 if x.value % 4 == 1 else -1, n)
    mod = ell**n
    # x^(l^n) is fixed by u -> u^l to the working precision
    return PadicInt(ell, pow(x.value, ell**n, mod), n)


def _log_one_unit(t: int, ell: int, n: int) -> int:
    """log(1+t) mod l^n for v_l(t) >= 1 (>= 2 when l = 2), exact tail bound."""
    if t == 0:
        return 0
    vt = _vl(t, ell)
    if vt < 1 or (ell == 2 and vt < 2):
        raise PrecisionExhausted("series argument outside the convergence disc")
    # k-th term valuation >= k*vt - v_l(k) >= k*vt - bitlength(k); the latter
    # bound is non-decreasing in k, so the tail past kmax stays above n.
    kmax = 1
    while kmax * vt - kmax.bit_length() < n:
        kmax += 1
    slack = _vl_bound(kmax, ell) + 2
    mod = ell**(n + slack)
    acc = 0
    power = 1
    for k in range(1, kmax + 1):
        power = (power * t) % (mod * ell**slack)
        v = _vl(k, ell) if k % ell == 0 else 0
        num = power // ell**v if v else power
        term = num * pow(k // ell**v, -1, mod) % mod
        acc = (acc - term if k % 2 == 0 else acc + term) % mod
    return acc % (ell**n)


def _vl_bound(k: int, ell: int) -> int:
    b = 0
    while ell**(b + 1) <= k:
        b += 1
    return b


def iwasawa_log(x, ell: int | None = None, precision: int = DEFAULT_PRECISION) -> PadicInt:
    """Iwasawa logarithm with Log l = 0 and Log(roots of unity) = 0.

    Accepts a PadicInt unit, or a nonzero int/Fraction whose l-part and sign
    are split off before the series.
    """
    if isinstance(x, PadicInt):
        ell, n = x.ell, x.precision_exp
        if x.value % ell == 0:
            raise ValueError("logarithm of a non-unit PadicInt")
        u = (x / teichmueller(x)).value
        return PadicInt(ell, _log_one_unit(u - 1, ell, n), n)
    if ell is None:
        raise ValueError("ell required for rational input")
    n = precision
    x = Fraction(x)
    if x == 0:
        raise ValueError("Log 0 undefined")
    num, den = abs(x.numerator), x.denominator
    while num % ell == 0:
        num //= ell
    while den % ell == 0:
        den //= ell
    mod = ell**n
    u = PadicInt(ell, num * pow(den, -1, mod), n)
    return iwasawa_log(u)


# -- Hensel helpers ------------------------------------------------------


def hensel_sqrt(d: int, ell: int, n: int) -> PadicInt:
    """A square root of d in Zl at precision, d an l-adic unit square."""
    if ell == 2:
        if d % 8 != 1:
            raise ValueError(f"{d} is not a 2-adic unit square")
        r = 1
        for k in range(3, n + 1):
            # maintain r^2 = d mod 2^(k+1) using r odd
            if (r * r - d) % (1 << (k + 1)):
                r += 1 << (k - 1)
        return PadicInt(2, r, n)
    if pow(d % ell, (ell - 1) // 2, ell) != 1:
        raise ValueError(f"{d} is not a square mod {ell}")
    r = _sqrt_mod_prime(d % ell, ell)
    mod = ell
    while mod < ell**n:
        mod *= ell
        r = (r - (r * r - d) * pow(2 * r, -1, mod)) % mod
    return PadicInt(ell, r, n)


def _sqrt_mod_prime(a: int, p: int) -> int:
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, tt = 0, t
        while tt != 1:
            tt = tt * tt % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def lift_root(coeffs: list[int], r: int, ell: int, n: int) -> PadicInt:
    """Hensel-lift a simple root r mod l of the integer polynomial coeffs."""
    def f(x, mod):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % mod
        return acc

    def fp(x, mod):
        acc = 0
        for k in range(len(coeffs) - 1, 0, -1):
            acc = (acc * x + k * coeffs[k]) % mod
        return acc

    if f(r, ell) % ell or fp(r, ell) % ell == 0:
        raise ValueError("not a simple root mod l")
    mod = ell
    while mod < ell**n:
        mod = min(mod * mod, ell**n)
        r = (r - f(r, mod) * pow(fp(r, mod), -1, mod)) % mod
    return PadicInt(ell, r, n)


# -- matrices over Zl at precision ---------------------------------------


class PadicMatrix:
    """Dense matrix with uniform (ell, precision) entries."""

    __slots__ = ("ell", "precision_exp", "rows", "cols", "entries")

    def __init__(self, ell: int, entries, precision_exp: int = DEFAULT_PRECISION):
        self.ell = ell
        self.precision_exp = precision_exp
        self.rows = len(entries)
        self.cols = len(entries[0]) if entries else 0
        mod = ell**precision_exp
        self.entries = [[(e.value if isinstance(e, PadicInt) else int(e)) % mod
                         for e in row] for row in entries]

    @classmethod
    def identity(cls, ell: int, n: int, precision_exp: int = DEFAULT_PRECISION):
        return cls(ell, [[1 if i == j else 0 for j in range(n)] for i in range(n)],
                   precision_exp)

    def __getitem__(self, ij):
        i, j = ij
        return PadicInt(self.ell, self.entries[i][j], self.precision_exp)

    def copy(self):
        return PadicMatrix(self.ell, [row[:] for row in self.entries],
                           self.precision_exp)

    def __matmul__(self, other: "PadicMatrix") -> "PadicMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        mod = self.ell**min(self.precision_exp, other.precision_exp)
        out = [[sum(self.entries[i][k] * other.entries[k][j]
                    for k in range(self.cols)) % mod
                for j in range(other.cols)] for i in range(self.rows)]
        return PadicMatrix(self.ell, out, min(self.precision_exp, other.precision_exp))

    def __repr__(self):
        return f"PadicMatrix({self.rows}x{self.cols} mod {self.ell}^{self.precision_exp})"


def smith_normal_form(m: PadicMatrix):
    """U, D, V with U m V = D, U and V invertible at precision.

    Diagonal entries are exact powers of l in divisibility order; an entry
    that vanishes at the working precision is reported as 0 (free cokernel
    direction).  Callers certify rank decisions by recomputing at doubled
    precision.
    """
    ell, prec = m.ell, m.precision_exp
    mod = ell**prec
    a = [row[:] for row in m.entries]
    r, c = m.rows, m.cols
    u = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    v = [[1 if i == j else 0 for j in range(c)] for i in range(c)]

    def vl(x):
        return prec if x == 0 else _vl(x, ell)

    for k in range(min(r, c)):
        # pivot of minimal valuation in the trailing block
        best, bi, bj = prec, -1, -1
        for i in range(k, r):
            for j in range(k, c):
                w = vl(a[i][j])
                if w < best:
                    best, bi, bj = w, i, j
        if bi < 0 or best >= prec:
            break
        if bi != k:
            a[k], a[bi] = a[bi], a[k]
            u[k], u[bi] = u[bi], u[k]
        if bj != k:
            for row in a:
                row[k], row[bj] = row[bj], row[k]
            for row in v:
                row[k], row[bj] = row[bj], row[k]
        piv = a[k][k]
        w = vl(piv)
        inv = pow(piv // ell**w, -1, mod)
        # scale the pivot row so the pivot is exactly l^w
        a[k] = [x * inv % mod for x in a[k]]
        u[k] = [x * inv % mod for x in u[k]]
        pw = ell**w
        for i in range(k + 1, r):
            if a[i][k]:
                q = a[i][k] // pw
                a[i] = [(x - q * y) % mod for x, y in zip(a[i], a[k])]
                u[i] = [(x - q * y) % mod for x, y in zip(u[i], u[k])]
        for j in range(k + 1, c):
            if a[k][j]:
                q = a[k][j] // pw
                for row in a:
                    row[j] = (row[j] - q * row[k]) % mod
                for row in v:
                    row[j] = (row[j] - q * row[k]) % mod

    # minimal-valuation pivoting already yields divisibility order
    d = [[0] * c for _ in range(r)]
    last = -1
    for i in range(min(r, c)):
        w = prec if a[i][i] == 0 else _vl(a[i][i], ell)
        assert w >= last, "pivot valuations out of order"
        last = w
        d[i][i] = 0 if w >= prec else ell**w
    return (PadicMatrix(ell, u, prec), PadicMatrix(ell, d, prec),
            PadicMatrix(ell, v, prec))


def elementary_divisors(m: PadicMatrix) -> list[int]:
    """Cokernel divisors read off the SNF; 0 marks a free direction."""
    _, d, _ = smith_normal_form(m)
    out = []
    for i in range(m.rows):
        out.append(d.entries[i][i] if i < min(m.rows, m.cols) else 0)
    return out


def kernel_basis(m: PadicMatrix) -> list[list[PadicInt]]:
    """Basis of the saturated kernel lattice {x : m x = 0 at precision}."""
    u, d, v = smith_normal_form(m)
    out = []
    for j in range(m.cols):
        dj = d.entries[j][j] if j < min(m.rows, m.cols) else 0
        if dj == 0:
            out.append([v[i, j] for i in range(m.cols)])
    return out


def solve(m: PadicMatrix, b: list[PadicInt]):
    """One solution x of m x = b over Zl at precision, or None."""
    u, d, v = smith_normal_form(m)
    ell, prec = m.ell, m.precision_exp
    mod = ell**prec
    ub = [sum(u.entries[i][k] * (b[k].value if isinstance(b[k], PadicInt) else b[k])
              for k in range(m.rows)) % mod for i in range(m.rows)]
    y = [0] * m.cols
    for i in range(m.rows):
        di = d.entries[i][i] if i < min(m.rows, m.cols) else 0
        if di == 0:
            if ub[i] % mod:
                return None
            continue
        w = _vl(di, ell)
        if ub[i] % ell**w:
            return None
        y[i] = (ub[i] // ell**w) % (mod // ell**w)
    x = [sum(v.entries[i][k] * y[k] for k in range(m.cols)) % mod
         for i in range(m.cols)]
    return [PadicInt(ell, xi, prec) for xi in x]
