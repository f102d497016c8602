"""Effective principal ideal rings: the covers Z and GF(p)[x] and their
quotients by a principal modulus.

Every ideal is held by one canonical generator (a canonical divisor of the
modulus for quotient rings).  All values are immutable; operations are pure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

from .covers import INTS, parse_poly, poly_cover


class RingError(ValueError):
    pass


@dataclass(frozen=True)
class Ring:
    cover_kind: str  # "Z" or "GF"
    p: int  # characteristic of the polynomial cover, 0 for integers
    modulus: object  # raw cover element; cover.zero means no quotient

    @cached_property
    def cover(self):
        return INTS if self.cover_kind == "Z" else poly_cover(self.p)

    @property
    def is_quotient(self):
        return self.modulus != self.cover.zero

    @property
    def is_finite(self):
        return self.is_quotient

    @property
    def is_zero_ring(self):
        return self.is_quotient and self.cover.is_unit(self.modulus)

    @cached_property
    def size(self):
        return self.cover.size(self.modulus) if self.is_quotient else None

    def reduce(self, raw):
        if self.is_quotient:
            return self.cover.mod(raw, self.modulus)
        return raw

    def element(self, raw):
        return RingElement(self, self.reduce(raw))

    @property
    def zero(self):
        return self.element(self.cover.zero)

    @property
    def one(self):
        return self.element(self.cover.one)

    def add(self, a, b):
        return self.reduce(self.cover.add(a, b))

    def sub(self, a, b):
        return self.reduce(self.cover.sub(a, b))

    def neg(self, a):
        return self.reduce(self.cover.neg(a))

    def mul(self, a, b):
        return self.reduce(self.cover.mul(a, b))

    def is_unit_raw(self, a):
        if self.is_quotient:
            return self.cover.gcd(a, self.modulus) == self.cover.one
        return self.cover.is_unit(a)

    def elements(self):
        """All elements of a finite ring, canonical order."""
        if not self.is_finite:
            raise RingError("cannot enumerate an infinite ring")
        return [RingElement(self, r) for r in self.cover.residues(self.modulus)]

    def divide(self, b, a):
        """Some c with c*a = b in the ring, or None."""
        cover = self.cover
        if self.is_quotient:
            g, s, _ = cover.xgcd(a, self.modulus)
            q, r = cover.divmod(b, g)
            if r != cover.zero:
                return None
            return self.mul(s, q)
        if cover.is_zero(a):
            return cover.zero if cover.is_zero(b) else None
        q, r = cover.divmod(b, a)
        return q if r == cover.zero else None

    def canonical_ideal_gens(self):
        """Canonical generators of all ideals of a finite quotient ring."""
        if not self.is_quotient:
            raise RingError("infinite rings have infinitely many ideals")
        gens = [self.reduce(d) for d in self.cover.divisors(self.modulus)]
        seen, out = set(), []
        for g in gens:
            if g not in seen:
                seen.add(g)
                out.append(g)
        return out

    def __str__(self):
        cover = self.cover
        if self.cover_kind == "Z":
            return "Z" if not self.is_quotient else f"Z/{self.modulus}"
        base = f"GF({self.p})[x]"
        if not self.is_quotient:
            return base
        return f"{base}/({cover.format(self.modulus)})"

    def __repr__(self):
        return f"Ring({self})"


@dataclass(frozen=True)
class RingElement:
    ring: Ring
    rep: object

    def _check(self, other):
        if self.ring != other.ring:
            raise RingError("ring mismatch")

    def __add__(self, other):
        self._check(other)
        return RingElement(self.ring, self.ring.add(self.rep, other.rep))

    def __sub__(self, other):
        self._check(other)
        return RingElement(self.ring, self.ring.sub(self.rep, other.rep))

    def __neg__(self):
        return RingElement(self.ring, self.ring.neg(self.rep))

    def __mul__(self, other):
        self._check(other)
        return RingElement(self.ring, self.ring.mul(self.rep, other.rep))

    def __pow__(self, k):
        out = self.ring.one
        for _ in range(k):
            out = out * self
        return out

    @property
    def is_zero(self):
        return self.rep == self.ring.cover.zero

    @property
    def is_unit(self):
        return self.ring.is_unit_raw(self.rep)

    def __str__(self):
        return self.ring.cover.format(self.rep)

    def __repr__(self):
        return f"{self} in {self.ring}"


@dataclass(frozen=True)
class Ideal:
    ring: Ring
    gen: RingElement

    @property
    def is_zero(self):
        return self.gen.is_zero

    @property
    def is_unit(self):
        return self.gen.rep == self.ring.cover.one

    def contains(self, elt: RingElement):
        return self.ring.divide(elt.rep, self.gen.rep) is not None

    def __str__(self):
        return f"({self.gen})"

    def __repr__(self):
        return f"Ideal {self} of {self.ring}"


@dataclass(frozen=True)
class ExactZeroDivisorPair:
    ring: Ring
    x: RingElement
    y: RingElement


def _canonical_gen(ring: Ring, raw):
    cover = ring.cover
    if ring.is_quotient:
        g = cover.gcd(raw, ring.modulus)
        return ring.reduce(g)
    return cover.normalize(raw)[0]


def make_ring(spec: str) -> Ring:
    """Parse 'Z', 'Z/12', 'GF(2)[x]' or 'GF(2)[x]/(x^3+x+1)'."""
    text = spec.strip().replace(" ", "")
    m = re.fullmatch(r"Z(?:/(\d+))?", text)
    if m:
        n = int(m.group(1)) if m.group(1) else 0
        return Ring("Z", 0, n)
    m = re.fullmatch(r"GF\((\d+)\)\[([a-z])\](?:/\((.+)\))?", text)
    if m:
        p = int(m.group(1))
        if not INTS.is_prime(p):
            raise RingError(f"GF characteristic must be prime, got {p}")
        cover = poly_cover(p)
        if m.group(3) is None:
            return Ring("GF", p, ())
        f = parse_poly(cover, m.group(3))
        f = cover.normalize(f)[0]  # monic canonical modulus
        return Ring("GF", p, f)
    raise RingError(f"unsupported ring description {spec!r}")


def parse_element(ring: Ring, text: str) -> RingElement:
    text = text.strip()
    if ring.cover_kind == "Z":
        try:
            return ring.element(int(text))
        except ValueError as exc:
            raise RingError(f"bad integer element {text!r}") from exc
    return ring.element(parse_poly(ring.cover, text))


def parse_ideal(ring: Ring, text: str) -> Ideal:
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise RingError(f"ideal literal must be parenthesized, got {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return ideal_of(ring, [])
    parts = [p for p in inner.split(",") if p.strip()]
    return ideal_of(ring, [parse_element(ring, p) for p in parts])


def ideal_of(ring: Ring, gens) -> Ideal:
    """The ideal generated by the given elements, as one canonical generator."""
    cover = ring.cover
    acc = cover.zero
    for g in gens:
        if isinstance(g, RingElement):
            if g.ring != ring:
                raise RingError("element not in ring")
            acc = cover.gcd(acc, g.rep)
        else:
            acc = cover.gcd(acc, ring.reduce(g))
    return Ideal(ring, RingElement(ring, _canonical_gen(ring, acc)))


def ideal_power(I: Ideal, k: int) -> Ideal:
    if k < 0:
        raise RingError("ideal power needs k >= 0")
    ring = I.ring
    if k == 0:
        return Ideal(ring, ring.one)
    raw = ring.cover.pow(I.gen.rep, k)
    return Ideal(ring, RingElement(ring, _canonical_gen(ring, raw)))


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    if I.ring != J.ring:
        raise RingError("ring mismatch")
    raw = I.ring.cover.mul(I.gen.rep, J.gen.rep)
    return Ideal(I.ring, RingElement(I.ring, _canonical_gen(I.ring, raw)))


def is_idempotent(I: Ideal) -> bool:
    return ideal_power(I, 2) == I


def power_stabilization_index(I: Ideal):
    """Smallest s >= 1 with I^s = I^(s+1), or None when the chain never
    stabilizes (proper nonzero ideals of the covers)."""
    ring = I.ring
    if not ring.is_quotient:
        if I.is_zero or I.is_unit:
            return 1
        return None
    prev = I
    s = 1
    while True:
        nxt = ideal_product(prev, I)
        if nxt == prev:
            return s
        prev = nxt
        s += 1


def annihilator(ring: Ring, a) -> Ideal:
    """ann(a) = {r : r*a = 0} as a canonical principal ideal."""
    if isinstance(a, RingElement):
        if a.ring != ring:
            raise RingError("element not in ring")
        raw = a.rep
    else:
        raw = ring.reduce(a)
    cover = ring.cover
    if not ring.is_quotient:
        gen = cover.one if cover.is_zero(raw) else cover.zero
        return Ideal(ring, RingElement(ring, gen))
    g = cover.gcd(raw, ring.modulus)
    gen = cover.exact_div(ring.modulus, g)
    return Ideal(ring, RingElement(ring, ring.reduce(gen)))


def local_structure(ring: Ring) -> dict:
    """Locality of the ring: finite quotient A/(m) is local iff m is a power
    of a single prime; the covers themselves are not local."""
    if not ring.is_quotient:
        return {"is_local": False, "max_ideal": None}
    if ring.is_zero_ring:
        return {"is_local": False, "max_ideal": None}
    factors = ring.cover.factor(ring.modulus)
    if len(factors) == 1:
        q = next(iter(factors))
        return {"is_local": True, "max_ideal": ideal_of(ring, [ring.element(q)])}
    return {"is_local": False, "max_ideal": None}


def exact_zero_divisor_pairs(ring: Ring):
    """All (x, y) up to unit multiple with ann(x) = (y) and ann(y) = (x)."""
    if not ring.is_finite:
        raise RingError("ring not finite")
    loc = local_structure(ring)
    if not loc["is_local"]:
        raise RingError("ring not local")
    pairs = []
    for g in ring.canonical_ideal_gens():
        x = RingElement(ring, g)
        if x.is_zero or x.is_unit:
            continue
        ann_x = annihilator(ring, x)
        y = ann_x.gen
        if annihilator(ring, y) == ideal_of(ring, [x]):
            pairs.append(ExactZeroDivisorPair(ring, x, y))
    return pairs


def quotient_ring(ring: Ring, x) -> Ring:
    """The quotient of `ring` by the principal ideal (x), canonicalized."""
    raw = x.rep if isinstance(x, RingElement) else ring.reduce(x)
    cover = ring.cover
    if ring.is_quotient:
        modulus = cover.gcd(raw, ring.modulus)
    else:
        modulus = cover.normalize(raw)[0]
    return Ring(ring.cover_kind, ring.p, modulus)
