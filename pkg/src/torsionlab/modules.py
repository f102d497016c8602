"""Finitely presented modules over the supported ring class.

A module is the cokernel of its presentation matrix (rows index generators,
columns are relation vectors).  All structural computations lift the
presentation to the cover, append modulus relations, and run through one
shared lattice/subquotient toolkit, so kernels, images, Hom and tensor all
reduce to Smith normal form over Z or GF(p)[x].
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .rings import Ideal, Ring, RingElement, RingError, annihilator, quotient_ring
from .snf import Lattice, from_cols, kernel_cols, smith_normal_form


@dataclass(frozen=True)
class FpModule:
    ring: Ring
    rel: tuple  # g rows of length r

    @property
    def gens(self):
        return len(self.rel)

    @property
    def num_relations(self):
        return len(self.rel[0]) if self.rel else 0

    @cached_property
    def lifted_rel_cols(self):
        """Relation columns over the cover, including modulus relations."""
        g = self.gens
        cols = [[self.rel[i][c] for i in range(g)] for c in range(self.num_relations)]
        ring = self.ring
        if ring.is_quotient:
            z, m = ring.cover.zero, ring.modulus
            for i in range(g):
                col = [z] * g
                col[i] = m
                cols.append(col)
        return cols

    @cached_property
    def rel_lattice(self):
        return Lattice(self.ring.cover, self.gens, self.lifted_rel_cols)

    @cached_property
    def structure(self):
        """(invariant_factors, free_rank) over the cover."""
        cover = self.ring.cover
        res = self.rel_lattice.res
        invs = tuple(d for d in res.diag if d != cover.zero and not cover.is_unit(d))
        return invs, self.gens - res.rank

    @property
    def is_zero(self):
        invs, free = self.structure
        return not invs and free == 0

    @cached_property
    def cardinality(self):
        """Number of elements, or None when infinite."""
        invs, free = self.structure
        if free > 0:
            return None
        cover = self.ring.cover
        n = 1
        for d in invs:
            n *= cover.size(d)
        return n

    def describe(self):
        cover = self.ring.cover
        invs, free = self.structure
        return {"invariant_factors": [cover.format(d) for d in invs], "free_rank": free}

    def __str__(self):
        invs, free = self.structure
        cover = self.ring.cover
        parts = [f"{self.ring}/({cover.format(d)})" for d in invs]
        if free:
            parts.append(f"{self.ring}^{free}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FpModule({self} over {self.ring})"


def module_from_presentation(ring: Ring, rows) -> FpModule:
    canon = []
    for row in rows:
        out = []
        for x in row:
            if isinstance(x, RingElement):
                if x.ring != ring:
                    raise RingError("presentation entry outside ring")
                out.append(x.rep)
            else:
                out.append(ring.reduce(x))
        canon.append(tuple(out))
    if canon and len({len(r) for r in canon}) != 1:
        raise RingError("ragged presentation matrix")
    return FpModule(ring, tuple(canon))


def free_module(ring: Ring, rank: int) -> FpModule:
    return FpModule(ring, tuple(() for _ in range(rank)))


def cyclic_module(ring: Ring, a) -> FpModule:
    """R/(a) for an element, or R/I for an Ideal."""
    if isinstance(a, Ideal):
        a = a.gen
    return module_from_presentation(ring, [[a]])


def direct_sum(*mods) -> FpModule:
    if not mods:
        raise RingError("direct sum needs at least one summand")
    ring = mods[0].ring
    if any(m.ring != ring for m in mods):
        raise RingError("ring mismatch")
    z = ring.cover.zero
    total_r = sum(m.num_relations for m in mods)
    rows = []
    offset = 0
    for m in mods:
        r = m.num_relations
        for row in m.rel:
            rows.append((z,) * offset + tuple(row) + (z,) * (total_r - offset - r))
        offset += r
    return FpModule(ring, tuple(rows))


def invariant_factors(M: FpModule):
    """Invariant factor list plus free rank, classifying M up to isomorphism."""
    invs, free = M.structure
    return list(invs), free


def is_isomorphic(M: FpModule, N: FpModule) -> bool:
    if M.ring != N.ring:
        raise RingError("ring mismatch")
    return M.structure == N.structure


@dataclass(frozen=True)
class Morphism:
    domain: FpModule
    codomain: FpModule
    mat: tuple  # codomain.gens rows of length domain.gens

    def __post_init__(self):
        if self.domain.ring != self.codomain.ring:
            raise RingError("ring mismatch")
        lat = self.codomain.rel_lattice
        g_cod = self.codomain.gens
        for c in range(self.domain.num_relations):
            rho = [self.domain.rel[i][c] for i in range(self.domain.gens)]
            img = _mat_vec_ring(self.domain.ring, self.mat, rho, g_cod)
            if not lat.contains(img):
                raise RingError("morphism not well-defined on relations")

    @property
    def ring(self):
        return self.domain.ring

    def apply_col(self, col):
        return _mat_vec_ring(self.ring, self.mat, col, self.codomain.gens)

    def compose(self, other: "Morphism") -> "Morphism":
        """self after other."""
        if other.codomain != self.domain:
            raise RingError("composition mismatch")
        ring = self.ring
        g_out, g_in = self.codomain.gens, other.domain.gens
        rows = []
        for i in range(g_out):
            row = []
            for j in range(g_in):
                acc = ring.cover.zero
                for t in range(len(other.mat)):
                    acc = ring.add(acc, ring.mul(self.mat[i][t], other.mat[t][j]))
                row.append(acc)
            rows.append(tuple(row))
        return Morphism(other.domain, self.codomain, tuple(rows))

    def add(self, other: "Morphism") -> "Morphism":
        ring = self.ring
        rows = tuple(
            tuple(ring.add(a, b) for a, b in zip(ra, rb))
            for ra, rb in zip(self.mat, other.mat)
        )
        return Morphism(self.domain, self.codomain, rows)

    def negate(self) -> "Morphism":
        ring = self.ring
        return Morphism(
            self.domain,
            self.codomain,
            tuple(tuple(ring.neg(a) for a in row) for row in self.mat),
        )

    @property
    def is_zero_map(self):
        lat = self.codomain.rel_lattice
        g = self.codomain.gens
        for j in range(self.domain.gens):
            if not lat.contains([self.mat[i][j] for i in range(g)]):
                return False
        return True

    def same_map(self, other: "Morphism") -> bool:
        if self.domain != other.domain or self.codomain != other.codomain:
            return False
        return self.add(other.negate()).is_zero_map

    def __repr__(self):
        return f"Morphism {self.domain} -> {self.codomain}"


def _mat_vec_ring(ring, mat, vec, nrows):
    out = []
    for i in range(nrows):
        acc = ring.cover.zero
        row = mat[i]
        for a, x in zip(row, vec):
            acc = ring.add(acc, ring.mul(a, x))
        out.append(acc)
    return out


def identity_morphism(M: FpModule) -> Morphism:
    ring = M.ring
    o, z = ring.cover.one, ring.cover.zero
    rows = tuple(
        tuple(o if i == j else z for j in range(M.gens)) for i in range(M.gens)
    )
    return Morphism(M, M, rows)


def zero_morphism(M: FpModule, N: FpModule) -> Morphism:
    z = M.ring.cover.zero
    return Morphism(M, N, tuple((z,) * M.gens for _ in range(N.gens)))


def scalar_morphism(M: FpModule, a) -> Morphism:
    """Multiplication by a ring element (or ideal generator) on M."""
    if isinstance(a, Ideal):
        a = a.gen
    raw = a.rep if isinstance(a, RingElement) else M.ring.reduce(a)
    ring = M.ring
    z = ring.cover.zero
    rows = tuple(
        tuple(raw if i == j else z for j in range(M.gens)) for i in range(M.gens)
    )
    return Morphism(M, M, rows)


@dataclass(frozen=True)
class Subquotient:
    """A module presented as (lattice L_big)/(lattice L_small) inside
    cover^ambient, with the chosen basis of L_big as its generators."""

    ring: Ring
    ambient: int
    module: FpModule
    basis: tuple  # columns of L_big's basis
    lattice: Lattice
    small_cols: tuple

    def coords(self, col):
        """Express an ambient column in the subquotient's generators (mod m)."""
        y = self.lattice.coords_in_basis(col)
        if y is None:
            return None
        return [self.ring.reduce(c) for c in y]


def subquotient(ring: Ring, ambient: int, big_cols, small_cols) -> Subquotient:
    lat = Lattice(ring.cover, ambient, big_cols)
    basis = lat.basis_cols()
    rel_cols = []
    for c in small_cols:
        y = lat.coords_in_basis(c)
        if y is None:
            raise RingError("small lattice not contained in big lattice")
        rel_cols.append([ring.reduce(v) for v in y])
    rows = tuple(
        tuple(col[i] for col in rel_cols) for i in range(len(basis))
    )
    mod = FpModule(ring, rows)
    return Subquotient(
        ring, ambient, mod, tuple(tuple(c) for c in basis), lat,
        tuple(tuple(c) for c in small_cols),
    )


def subquotient_map(src: Subquotient, tgt: Subquotient, phi_rows) -> Morphism:
    """Morphism induced on subquotients by an ambient cover-linear map
    phi: cover^src.ambient -> cover^tgt.ambient mapping L_big to L_big and
    L_small into L_small (verified via the morphism well-definedness check)."""
    cover = src.ring.cover
    cols = []
    for b in src.basis:
        img = [cover.zero] * tgt.ambient
        for i in range(tgt.ambient):
            acc = cover.zero
            for j in range(src.ambient):
                acc = cover.add(acc, cover.mul(phi_rows[i][j], b[j]))
            img[i] = acc
        y = tgt.coords(img)
        if y is None:
            raise RingError("ambient map does not preserve the big lattice")
        cols.append(y)
    rows = tuple(
        tuple(cols[j][i] for j in range(len(cols))) for i in range(len(tgt.basis))
    )
    return Morphism(src.module, tgt.module, rows)


@dataclass(frozen=True)
class Submodule:
    ambient: FpModule
    module: FpModule
    embedding: Morphism
    sq: Subquotient

    def __eq__(self, other):
        if not isinstance(other, Submodule):
            return NotImplemented
        if self.ambient != other.ambient:
            return False
        return self.sq.lattice.equals(other.sq.lattice)

    def __hash__(self):
        return hash((self.ambient, self.module))

    def contains_submodule(self, other: "Submodule") -> bool:
        return self.sq.lattice.contains_lattice(other.sq.lattice)

    def __repr__(self):
        return f"Submodule {self.module} of {self.ambient}"


def submodule_from_cols(ambient: FpModule, extra_cols) -> Submodule:
    """The submodule of `ambient` spanned by the given ambient columns
    (the zero coset is always included via the relation lattice)."""
    ring = ambient.ring
    big = list(extra_cols) + list(ambient.lifted_rel_cols)
    sq = subquotient(ring, ambient.gens, big, ambient.lifted_rel_cols)
    emb_rows = tuple(
        tuple(ring.reduce(sq.basis[j][i]) for j in range(len(sq.basis)))
        for i in range(ambient.gens)
    )
    embedding = Morphism(sq.module, ambient, emb_rows)
    return Submodule(ambient, sq.module, embedding, sq)


def kernel(f: Morphism) -> Submodule:
    ring = f.ring
    cover = ring.cover
    g_dom, g_cod = f.domain.gens, f.codomain.gens
    tgt_basis = f.codomain.rel_lattice.basis_cols()
    ncols = g_dom + len(tgt_basis)
    rows = []
    for i in range(g_cod):
        row = [f.mat[i][j] for j in range(g_dom)]
        row.extend(b[i] for b in tgt_basis)
        rows.append(row)
    res = smith_normal_form(rows, cover, shape=(g_cod, ncols))
    vparts = [c[:g_dom] for c in kernel_cols(res)]
    return submodule_from_cols(f.domain, vparts)


def image(f: Morphism) -> Submodule:
    g_dom, g_cod = f.domain.gens, f.codomain.gens
    cols = [[f.mat[i][j] for i in range(g_cod)] for j in range(g_dom)]
    return submodule_from_cols(f.codomain, cols)


def cokernel(f: Morphism) -> FpModule:
    ring = f.ring
    rows = []
    for i in range(f.codomain.gens):
        rows.append(tuple(f.mat[i]) + tuple(f.codomain.rel[i]))
    return FpModule(ring, tuple(rows))


def morphism_parts(f: Morphism) -> dict:
    return {"kernel": kernel(f), "image": image(f), "cokernel": cokernel(f)}


def quotient_module(M: FpModule, sub: Submodule):
    """(M / sub, projection M -> M/sub)."""
    if sub.ambient != M:
        raise RingError("submodule of a different ambient module")
    ring = M.ring
    rows = tuple(
        tuple(ring.reduce(b[i]) for b in sub.sq.basis) for i in range(M.gens)
    )
    Q = FpModule(ring, rows)
    proj = Morphism(M, Q, identity_morphism(M).mat)
    return Q, proj


def colon_submodule(M: FpModule, I: Ideal) -> Submodule:
    """(0 :_M I) = {m : I m = 0}."""
    if I.ring != M.ring:
        raise RingError("ring mismatch")
    return kernel(scalar_morphism(M, I))


def ideal_multiple(I: Ideal, M: FpModule) -> Submodule:
    """The submodule I*M."""
    if I.ring != M.ring:
        raise RingError("ring mismatch")
    return image(scalar_morphism(M, I))


def hom_module(M: FpModule, N: FpModule):
    """Hom_R(M, N) as a presented module plus decode/encode between its
    elements and actual morphisms M -> N.

    Element coordinates flatten a matrix column-major: slot j*g_N + i holds
    entry (i, j) of the morphism matrix.
    """
    if M.ring != N.ring:
        raise RingError("ring mismatch")
    ring = M.ring
    cover = ring.cover
    g_m, g_n = M.gens, N.gens
    amb = g_n * g_m
    n_basis = N.rel_lattice.basis_cols()
    s_n = len(n_basis)
    r_m = M.num_relations
    z = cover.zero

    if r_m == 0:
        h_cols = [[z] * amb for _ in range(amb)]
        for k in range(amb):
            h_cols[k][k] = cover.one
    else:
        nrows = r_m * g_n
        ncols = amb + r_m * s_n
        rows = [[z] * ncols for _ in range(nrows)]
        for c in range(r_m):
            for j in range(g_m):
                coef = M.rel[j][c]
                if coef == z:
                    continue
                for i in range(g_n):
                    rows[c * g_n + i][j * g_n + i] = coef
            for b_idx, b in enumerate(n_basis):
                for i in range(g_n):
                    rows[c * g_n + i][amb + c * s_n + b_idx] = b[i]
        res = smith_normal_form(rows, cover, shape=(nrows, ncols))
        h_cols = [c[:amb] for c in kernel_cols(res)]

    z_cols = []
    for j in range(g_m):
        for b in n_basis:
            col = [z] * amb
            for i in range(g_n):
                col[j * g_n + i] = b[i]
            z_cols.append(col)

    sq = subquotient(ring, amb, h_cols, z_cols)

    def decode(vec) -> Morphism:
        flat = [z] * amb
        for coord, b in zip(vec, sq.basis):
            raw = coord.rep if isinstance(coord, RingElement) else coord
            for k in range(amb):
                flat[k] = cover.add(flat[k], cover.mul(raw, b[k]))
        rows_ = tuple(
            tuple(ring.reduce(flat[j * g_n + i]) for j in range(g_m))
            for i in range(g_n)
        )
        return Morphism(M, N, rows_)

    def encode(f: Morphism):
        flat = [f.mat[i][j] for j in range(g_m) for i in range(g_n)]
        y = sq.coords(flat)
        if y is None:
            raise RingError("morphism does not lie in Hom lattice")
        return y

    return sq.module, decode, encode


def tensor_module(M: FpModule, N: FpModule) -> FpModule:
    """M (x) N with generator (a, b) at index a*g_N + b."""
    if M.ring != N.ring:
        raise RingError("ring mismatch")
    ring = M.ring
    z = ring.cover.zero
    g_m, g_n = M.gens, N.gens
    g = g_m * g_n
    cols = []
    for c in range(M.num_relations):
        for b in range(g_n):
            col = [z] * g
            for a in range(g_m):
                col[a * g_n + b] = M.rel[a][c]
            cols.append(col)
    for a in range(g_m):
        for c in range(N.num_relations):
            col = [z] * g
            for b in range(g_n):
                col[a * g_n + b] = N.rel[b][c]
            cols.append(col)
    rows = tuple(tuple(col[i] for col in cols) for i in range(g))
    return FpModule(ring, rows)


def classify(M: FpModule) -> dict:
    """Projectivity/flatness from invariant factors; injectivity by the Baer
    criterion over all (principal) ideals, finite rings only."""
    ring = M.ring
    cover = ring.cover
    invs, free = M.structure
    if not ring.is_quotient:
        projective = not invs  # free modules only
        injective = None  # unsupported over an infinite base
    else:
        m = ring.modulus
        projective = all(
            cover.is_unit(cover.gcd(d, cover.exact_div(m, d))) for d in invs
        )
        injective = True
        for d in ring.canonical_ideal_gens():
            if d == cover.zero or cover.is_unit(d):
                continue
            ideal = Ideal(ring, RingElement(ring, d))
            lhs = colon_submodule(M, annihilator(ring, d))
            rhs = ideal_multiple(ideal, M)
            if lhs != rhs:
                injective = False
                break
    return {"projective": projective, "flat": projective, "injective": injective}


def restrict_scalars(M: FpModule, S: Ring, x) -> FpModule:
    """View a module over R = S/(x) as an S-module: same generators, lifted
    relations plus x times each generator."""
    raw = x.rep if isinstance(x, RingElement) else S.reduce(x)
    if quotient_ring(S, raw) != M.ring:
        raise RingError("quotient mismatch: ring of M is not S/(x)")
    z = S.cover.zero
    g = M.gens
    rows = []
    for i in range(g):
        extra = tuple(raw if i == j else z for j in range(g))
        rows.append(tuple(M.rel[i]) + extra)
    return FpModule(S, tuple(rows))
