"""Tiny GF(p^f) arithmetic for residue computations at tame places.

Elements are tuples of ints mod p of length f, coefficients of the class of
t in F_p[t]/(m(t)).  Only what the l-Sylow discrete logs need: multiply,
power, and Pohlig-Hellman in the cyclic l-part of the unit group.
"""

from __future__ import annotations


class GFq:
    def __init__(self, p: int, modulus: list[int]):
        # modulus: monic, coefficients low-to-high, degree f
        self.p = p
        self.f = len(modulus) - 1
        assert modulus[-1] % p == 1
        self.modulus = [c % p for c in modulus]
        self.order = p**self.f - 1

    def one(self):
        return tuple([1] + [0] * (self.f - 1))

    def embed(self, c: int):
        return tuple([c % self.p] + [0] * (self.f - 1))

    def element(self, coeffs):
        c = [x % self.p for x in coeffs]
        while len(c) > self.f:
            # reduce top coefficient
            top = c.pop()
            for i in range(self.f):
                c[len(c) - self.f + i] = (c[len(c) - self.f + i]
                                          - top * self.modulus[i]) % self.p
        c += [0] * (self.f - len(c))
        return tuple(c)

    def mul(self, a, b):
        f, p = self.f, self.p
        prod = [0] * (2 * f - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        for k in range(2 * f - 2, f - 1, -1):
            top = prod[k]
            if top:
                prod[k] = 0
                for i in range(f):
                    prod[k - f + i] = (prod[k - f + i] - top * self.modulus[i]) % p
        return tuple(prod[:f])

    def pow(self, a, e: int):
        e %= self.order
        out = self.one()
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def is_one(self, a):
        return a == self.one()


def sylow_dlog(field: GFq, x, ell: int) -> tuple[int, int]:
    """(dlog of x in the l-Sylow of GF(q)^*, t with l^t the Sylow order).

    x must be a unit (nonzero).  The dlog is taken against a fixed Sylow
    generator found deterministically; returns value mod l^t.
    """
    q1 = field.order
    t = 0
    while q1 % ell == 0:
        q1 //= ell
        t += 1
    if t == 0:
        return 0, 0
    lt = ell**t
    # project onto the Sylow
    xs = field.pow(x, q1)
    gen = None
    c = 2
    while gen is None:
        g = field.embed(c) if field.f == 1 else field.element([c, 1])
        gs = field.pow(g, q1)
        if not field.is_one(field.pow(gs, lt // ell)):
            gen = gs
        c += 1
        if c > 10000:
            raise RuntimeError("no Sylow generator found")
    # Pohlig-Hellman, l-ary digits
    result = 0
    gamma = field.pow(gen, lt // ell)  # order l
    # baby table for order-l dlog
    table = {}
    acc = field.one()
    for k in range(ell):
        table[acc] = k
        acc = field.mul(acc, gamma)
    cur = xs
    for i in range(t):
        probe = field.pow(cur, lt // ell**(i + 1))
        k = table.get(probe)
        if k is None:
            raise ValueError("element not in the Sylow subgroup")
        result += k * ell**i
        cur = field.mul(cur, field.pow(gen, (-k * ell**i) % lt))
    return result % lt, t
