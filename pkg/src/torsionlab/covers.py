"""Exact Euclidean arithmetic for the two coefficient covers: the integers
and univariate polynomials over a prime field.

Raw representations are plain ints for the integer cover and tuples of
ascending coefficients (no trailing zeros, each in [0, p)) for the
polynomial cover.  All algorithms downstream (Smith normal form, lattice
solving, resolutions) work on these raw values through a cover object.
"""

from __future__ import annotations

import re
from functools import lru_cache


class IntegerCover:
    """The ring of integers with canonical associates being non-negative."""

    kind = "Z"
    p = 0
    zero = 0
    one = 1

    def is_zero(self, a):
        return a == 0

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def divmod(self, a, b):
        return divmod(a, b)

    def exact_div(self, a, b):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError(f"{b} does not divide {a}")
        return q

    def divides(self, a, b):
        if a == 0:
            return b == 0
        return b % a == 0

    def gcd(self, a, b):
        while b:
            a, b = b, a % b
        return abs(a)

    def xgcd(self, a, b):
        x0, x1, y0, y1 = 1, 0, 0, 1
        g, h = a, b
        while h:
            q, r = divmod(g, h)
            g, h = h, r
            x0, x1 = x1, x0 - q * x1
            y0, y1 = y1, y0 - q * y1
        if g < 0:
            g, x0, y0 = -g, -x0, -y0
        return g, x0, y0

    def normalize(self, a):
        """Return (canonical associate, unit) with a = unit * canonical."""
        if a < 0:
            return -a, -1
        return a, 1

    def is_unit(self, a):
        return a in (1, -1)

    def unit_inv(self, u):
        return u

    def norm(self, a):
        return abs(a)

    def mod(self, a, m):
        return a % m

    def pow(self, a, k):
        return a ** k

    def factor(self, n):
        """Prime factorization of |n| by trial division, n != 0."""
        n = abs(n)
        out = {}
        d = 2
        while d * d <= n:
            while n % d == 0:
                out[d] = out.get(d, 0) + 1
                n //= d
            d += 1 if d == 2 else 2
        if n > 1:
            out[n] = out.get(n, 0) + 1
        return out

    def divisors(self, n):
        """Sorted canonical divisors of n (n != 0), including 1 and |n|."""
        n = abs(n)
        divs = [1]
        for q, e in sorted(self.factor(n).items()):
            divs = [d * q ** i for d in divs for i in range(e + 1)]
        return sorted(divs)

    def is_prime(self, n):
        return n > 1 and self.factor(n) == {n: 1}

    def format(self, a):
        return str(a)

    def size(self, m):
        """Number of residues mod m (m != 0)."""
        return abs(m)

    def residues(self, m):
        return range(abs(m))

    def __repr__(self):
        return "Z"


class PolyCover:
    """Univariate polynomials over GF(p); canonical associates are monic."""

    kind = "GF"
    zero = ()
    one = (1,)

    def __init__(self, p):
        if p < 2 or INTS.factor(p) != {p: 1}:
            raise ValueError(f"characteristic must be prime, got {p}")
        self.p = p

    def _trim(self, coeffs):
        i = len(coeffs)
        while i and coeffs[i - 1] == 0:
            i -= 1
        return tuple(coeffs[:i])

    def poly(self, coeffs):
        return self._trim([c % self.p for c in coeffs])

    def is_zero(self, a):
        return not a

    def add(self, a, b):
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % self.p
        return self._trim(out)

    def neg(self, a):
        return tuple((-c) % self.p for c in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return ()
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] = (out[i + j] + ca * cb) % self.p
        return self._trim(out)

    def divmod(self, a, b):
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        inv_lc = pow(b[-1], -1, p)
        r = list(a)
        q = [0] * max(len(a) - len(b) + 1, 0)
        db = len(b) - 1
        while len(r) >= len(b) and any(r):
            r = list(self._trim(r))
            if len(r) < len(b):
                break
            c = (r[-1] * inv_lc) % p
            d = len(r) - 1 - db
            q[d] = c
            for i, cb in enumerate(b):
                r[d + i] = (r[d + i] - c * cb) % p
        return self._trim(q), self._trim(r)

    def exact_div(self, a, b):
        q, r = self.divmod(a, b)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def divides(self, a, b):
        if not a:
            return not b
        return not self.divmod(b, a)[1]

    def gcd(self, a, b):
        while b:
            a, b = b, self.divmod(a, b)[1]
        return self.normalize(a)[0]

    def xgcd(self, a, b):
        x0, x1 = self.one, self.zero
        y0, y1 = self.zero, self.one
        g, h = a, b
        while h:
            q, r = self.divmod(g, h)
            g, h = h, r
            x0, x1 = x1, self.sub(x0, self.mul(q, x1))
            y0, y1 = y1, self.sub(y0, self.mul(q, y1))
        if g:
            _, u = self.normalize(g)
            ui = self.unit_inv(u)
            g, x0, y0 = self.mul(ui, g), self.mul(ui, x0), self.mul(ui, y0)
        return g, x0, y0

    def normalize(self, a):
        if not a:
            return (), self.one
        lc = a[-1]
        if lc == 1:
            return a, self.one
        inv = pow(lc, -1, self.p)
        return tuple((c * inv) % self.p for c in a), (lc,)

    def is_unit(self, a):
        return len(a) == 1

    def unit_inv(self, u):
        return (pow(u[0], -1, self.p),)

    def norm(self, a):
        return len(a)  # 1 + degree; zero polynomial has norm 0

    def mod(self, a, m):
        return self.divmod(a, m)[1]

    def pow(self, a, k):
        out = self.one
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def deg(self, a):
        return len(a) - 1 if a else -1

    def monic_polys(self, d):
        """All monic polynomials of degree d, lexicographic in low coefficients."""
        p = self.p

        def rec(i, acc):
            if i == d:
                yield tuple(acc) + (1,)
                return
            for c in range(p):
                yield from rec(i + 1, acc + [c])

        yield from rec(0, [])

    def factor(self, f):
        """Irreducible factorization of f != 0 by smallest-degree trial division."""
        f = self.normalize(f)[0]
        out = {}
        while len(f) > 1:
            hit = None
            for d in range(1, self.deg(f) // 2 + 1):
                for g in self.monic_polys(d):
                    if self.divides(g, f):
                        hit = g
                        break
                if hit:
                    break
            if hit is None:
                hit = f  # f itself irreducible
            out[hit] = out.get(hit, 0) + 1
            f = self.exact_div(f, hit)
            while self.divides(hit, f) and len(f) > 1:
                out[hit] += 1
                f = self.exact_div(f, hit)
            # restart scan: remaining factor may have smaller-degree divisors
        return out

    def divisors(self, m):
        """Sorted canonical (monic) divisors of m != 0."""
        divs = [self.one]
        for q, e in sorted(self.factor(m).items()):
            divs = [self.mul(d, self.pow(q, i)) for d in divs for i in range(e + 1)]
        return sorted(set(divs), key=lambda t: (len(t), t))

    def size(self, m):
        return self.p ** self.deg(m)

    def residues(self, m):
        d = self.deg(m)
        p = self.p

        def rec(i, acc):
            if i == d:
                yield self._trim(acc)
                return
            for c in range(p):
                yield from rec(i + 1, acc + [c])

        yield from rec(0, [])

    def format(self, a, var="x"):
        if not a:
            return "0"
        terms = []
        for i in range(len(a) - 1, -1, -1):
            c = a[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*{var}" if c != 1 else var)
            else:
                terms.append(f"{c}*{var}^{i}" if c != 1 else f"{var}^{i}")
        return "+".join(terms)

    def __repr__(self):
        return f"GF({self.p})[x]"

    def __eq__(self, other):
        return isinstance(other, PolyCover) and other.p == self.p

    def __hash__(self):
        return hash(("PolyCover", self.p))


INTS = IntegerCover()

_TERM_RE = re.compile(
    r"^\s*(?P<coef>\d+)?\s*\*?\s*(?:(?P<var>[a-z])\s*(?:\^\s*(?P<exp>\d+))?)?\s*$"
)


@lru_cache(maxsize=None)
def poly_cover(p):
    return PolyCover(p)


def parse_poly(cover, text):
    """Parse a polynomial like 'x^3+x+1' or '2*t^2+1' into a raw tuple."""
    text = text.replace(" ", "").replace("-", "+-")
    if not text:
        raise ValueError("empty polynomial")
    coeffs = {}
    for term in text.split("+"):
        if not term:
            continue
        sign = 1
        if term.startswith("-"):
            sign = -1
            term = term[1:]
        m = _TERM_RE.match(term)
        if not m or (m.group("coef") is None and m.group("var") is None):
            raise ValueError(f"bad polynomial term {term!r}")
        coef = int(m.group("coef") or 1) * sign
        if m.group("var") is None:
            exp = 0
        else:
            exp = int(m.group("exp") or 1)
        coeffs[exp] = coeffs.get(exp, 0) + coef
    deg = max(coeffs) if coeffs else 0
    return cover.poly([coeffs.get(i, 0) for i in range(deg + 1)])
