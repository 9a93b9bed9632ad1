"""Slow, table-free reference arithmetic used as an independent oracle.

Elements are coefficient lists over GF(p), reduced by schoolbook division.
Nothing here imports the package's arithmetic.
"""


def digits(enc, p, n):
    out = []
    for _ in range(n):
        enc, d = divmod(enc, p)
        out.append(d)
    return out


def encode(coeffs, p):
    enc = 0
    for c in reversed(coeffs):
        enc = enc * p + c
    return enc


def polymulmod(a, b, mod, p):
    n = len(mod) - 1
    prod = [0] * (len(a) + len(b))
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for i in range(n + 1):
                prod[k - n + i] = (prod[k - n + i] - c * mod[i]) % p
    return (prod + [0] * n)[:n]


class NaiveField:
    def __init__(self, p, modulus):
        self.p, self.mod, self.n = p, list(modulus), len(modulus) - 1
        self.order = p**self.n

    def add(self, a, b):
        da, db = digits(a, self.p, self.n), digits(b, self.p, self.n)
        return encode([(x + y) % self.p for x, y in zip(da, db)], self.p)

    def neg(self, a):
        return encode([(-x) % self.p for x in digits(a, self.p, self.n)], self.p)

    def mul(self, a, b):
        return encode(polymulmod(digits(a, self.p, self.n), digits(b, self.p, self.n),
                                 self.mod, self.p), self.p)

    def pow(self, a, e):
        r = 1
        for _ in range(e):
            r = self.mul(r, a)
        return r


def is_irreducible_naive(coeffs, p):
    """Irreducible iff no monic factor of degree 1..n/2 divides it (trial division)."""
    n = len(coeffs) - 1
    for d in range(1, n // 2 + 1):
        for low in range(p**d):
            f = digits(low, p, d) + [1]
            if _divides(f, coeffs, p):
                return False
    return True


def _divides(f, g, p):
    r = list(g)
    df = len(f) - 1
    for k in range(len(r) - 1, df - 1, -1):
        c = r[k]
        if c:
            for i in range(df + 1):
                r[k - df + i] = (r[k - df + i] - c * f[i]) % p
    return not any(r[:df])
