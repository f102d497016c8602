"""Smith normal form with invertible transforms, and the lattice toolkit
(span bases, membership, solving, kernels) built on top of it.

Everything here works over a Euclidean cover (integers or GF(p)[x]) on raw
representations; matrices are lists of rows.  Pivoting is deterministic:
the smallest-norm nonzero entry of the working submatrix wins, ties broken
by row-major position.
"""

from __future__ import annotations

from dataclasses import dataclass, field


def identity(cover, n):
    z, o = cover.zero, cover.one
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def zeros(cover, m, n):
    z = cover.zero
    return [[z] * n for _ in range(m)]


def mat_mul(cover, A, B, n_cols_b=None):
    m = len(A)
    k = len(B)
    n = len(B[0]) if k else (n_cols_b or 0)
    add, mul, z = cover.add, cover.mul, cover.zero
    out = []
    for i in range(m):
        Ai = A[i]
        row = []
        for j in range(n):
            acc = z
            for t in range(k):
                a = Ai[t]
                if a != z:
                    acc = add(acc, mul(a, B[t][j]))
            row.append(acc)
        out.append(row)
    return out


def mat_vec(cover, A, v):
    add, mul, z = cover.add, cover.mul, cover.zero
    out = []
    for row in A:
        acc = z
        for a, x in zip(row, v):
            if a != z and x != z:
                acc = add(acc, mul(a, x))
        out.append(acc)
    return out


def transpose(A, ncols):
    if not A:
        return [[] for _ in range(ncols)]
    return [list(col) for col in zip(*A)]


def from_cols(cols, nrows):
    return [[c[i] for c in cols] for i in range(nrows)]


def mat_eq(A, B):
    return A == B


def bareiss_det(cover, A):
    """Fraction-free determinant over an integral domain (square A)."""
    n = len(A)
    if n == 0:
        return cover.one
    M = [list(r) for r in A]
    z = cover.zero
    sign_flip = False
    prev = cover.one
    for k in range(n - 1):
        if M[k][k] == z:
            for i in range(k + 1, n):
                if M[i][k] != z:
                    M[k], M[i] = M[i], M[k]
                    sign_flip = not sign_flip
                    break
            else:
                return z
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = cover.sub(
                    cover.mul(M[i][j], M[k][k]), cover.mul(M[i][k], M[k][j])
                )
                M[i][j] = cover.exact_div(num, prev)
            M[i][k] = z
        prev = M[k][k]
    det = M[n - 1][n - 1]
    return cover.neg(det) if sign_flip else det


@dataclass
class SnfResult:
    """U*A*V = D with U, V invertible over the cover and D diagonal with
    each diagonal entry dividing the next; inverses of the transforms are
    carried along because lattice solving needs them."""

    cover: object
    shape: tuple
    D: list
    U: list
    U_inv: list
    V: list
    V_inv: list
    det_u: object
    det_v: object
    diag: list = field(default_factory=list)
    rank: int = 0


def smith_normal_form(A, cover, shape=None):
    if shape is None:
        shape = (len(A), len(A[0]) if A else 0)
    m, n = shape
    z = cover.zero
    D = [list(row) for row in A]
    U = identity(cover, m)
    Ui = identity(cover, m)
    V = identity(cover, n)
    Vi = identity(cover, n)
    det_u = cover.one
    det_v = cover.one

    def swap_rows(i, j):
        nonlocal det_u
        if i == j:
            return
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]
        det_u = cover.neg(det_u)

    def swap_cols(i, j):
        nonlocal det_v
        if i == j:
            return
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]
        det_v = cover.neg(det_v)

    add, sub, mul = cover.add, cover.sub, cover.mul

    def combine_rows(t, i, s, u, bp, ap):
        # rows t,i <- (s*t + u*i, -bp*t + ap*i); inverse acts on Ui columns
        nbp = cover.neg(bp)
        for M_ in (D, U):
            rt, ri = M_[t], M_[i]
            for j in range(len(rt)):
                a_, b_ = rt[j], ri[j]
                rt[j] = add(mul(s, a_), mul(u, b_))
                ri[j] = add(mul(nbp, a_), mul(ap, b_))
        nu = cover.neg(u)
        for r in Ui:
            a_, b_ = r[t], r[i]
            r[t] = add(mul(a_, ap), mul(b_, bp))
            r[i] = add(mul(a_, nu), mul(b_, s))

    def row_reduce(t, i, q):
        # row i -= q * row t
        nq = cover.neg(q)
        for M_ in (D, U):
            rt, ri = M_[t], M_[i]
            for j in range(len(rt)):
                ri[j] = add(ri[j], mul(nq, rt[j]))
        for r in Ui:
            r[t] = add(r[t], mul(q, r[i]))

    def combine_cols(t, j, s, u, bp, ap):
        nbp = cover.neg(bp)
        for M_ in (D, V):
            for r in M_:
                a_, b_ = r[t], r[j]
                r[t] = add(mul(s, a_), mul(u, b_))
                r[j] = add(mul(nbp, a_), mul(ap, b_))
        nu = cover.neg(u)
        rt, rj = Vi[t], Vi[j]
        for k in range(len(rt)):
            a_, b_ = rt[k], rj[k]
            rt[k] = add(mul(ap, a_), mul(bp, b_))
            rj[k] = add(mul(nu, a_), mul(s, b_))

    def col_reduce(t, j, q):
        nq = cover.neg(q)
        for M_ in (D, V):
            for r in M_:
                r[j] = add(r[j], mul(nq, r[t]))
        rt, rj = Vi[t], Vi[j]
        for k in range(len(rt)):
            rt[k] = add(rt[k], mul(q, rj[k]))

    def add_row_into(t, i):
        # row t += row i
        for M_ in (D, U):
            rt, ri = M_[t], M_[i]
            for j in range(len(rt)):
                rt[j] = add(rt[j], ri[j])
        for r in Ui:
            r[i] = sub(r[i], r[t])

    def scale_row(t, w):
        nonlocal det_u
        wi = cover.unit_inv(w)
        for M_ in (D, U):
            M_[t] = [mul(w, x) for x in M_[t]]
        for r in Ui:
            r[t] = mul(r[t], wi)
        det_u = mul(det_u, w)

    limit = min(m, n)
    t = 0
    while t < limit:
        best = None
        for i in range(t, m):
            Di = D[i]
            for j in range(t, n):
                x = Di[j]
                if x != z:
                    nx = cover.norm(x)
                    if best is None or nx < best[0]:
                        best = (nx, i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            # clear column t below the pivot
            for i in range(t + 1, m):
                b = D[i][t]
                if b == z:
                    continue
                a = D[t][t]
                q, r = cover.divmod(b, a)
                if r == z:
                    row_reduce(t, i, q)
                else:
                    g, s, u = cover.xgcd(a, b)
                    combine_rows(t, i, s, u, cover.exact_div(b, g), cover.exact_div(a, g))
            # clear row t to the right of the pivot
            for j in range(t + 1, n):
                b = D[t][j]
                if b == z:
                    continue
                a = D[t][t]
                q, r = cover.divmod(b, a)
                if r == z:
                    col_reduce(t, j, q)
                else:
                    g, s, u = cover.xgcd(a, b)
                    combine_cols(t, j, s, u, cover.exact_div(b, g), cover.exact_div(a, g))
            if any(D[i][t] != z for i in range(t + 1, m)):
                continue
            if any(D[t][j] != z for j in range(t + 1, n)):
                continue
            # enforce divisibility of the remaining block by the pivot
            d = D[t][t]
            offender = None
            for i in range(t + 1, m):
                Di = D[i]
                for j in range(t + 1, n):
                    if Di[j] != z and not cover.divides(d, Di[j]):
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row_into(t, offender)
        canon, unit = cover.normalize(D[t][t])
        if unit != cover.one:
            scale_row(t, cover.unit_inv(unit))
        t += 1

    diag = [D[i][i] for i in range(limit)]
    rank = sum(1 for d in diag if d != z)
    return SnfResult(
        cover=cover,
        shape=(m, n),
        D=D,
        U=U,
        U_inv=Ui,
        V=V,
        V_inv=Vi,
        det_u=det_u,
        det_v=det_v,
        diag=diag,
        rank=rank,
    )


def solve(res: SnfResult, v):
    """One solution x of A x = v given res = snf(A), or None."""
    cover = res.cover
    m, n = res.shape
    z = cover.zero
    w = mat_vec(cover, res.U, v)
    y = [z] * n
    for i in range(m):
        if i < res.rank:
            d = res.diag[i]
            q, r = cover.divmod(w[i], d)
            if r != z:
                return None
            y[i] = q
        elif w[i] != z:
            return None
    return mat_vec(cover, res.V, y)


def kernel_cols(res: SnfResult):
    """Basis columns of ker(A) given res = snf(A)."""
    m, n = res.shape
    return [[res.V[i][j] for i in range(n)] for j in range(res.rank, n)]


def span_basis_cols(res: SnfResult):
    """Basis columns of the column span of A given res = snf(A)."""
    cover = res.cover
    m, n = res.shape
    out = []
    for i in range(res.rank):
        d = res.diag[i]
        out.append([cover.mul(res.U_inv[r][i], d) for r in range(m)])
    return out


class Lattice:
    """A sublattice of cover^ambient spanned by generator columns.

    One SNF is computed per lattice; membership tests, canonical bases and
    coordinates in the basis all reuse it.
    """

    def __init__(self, cover, ambient, gen_cols):
        self.cover = cover
        self.ambient = ambient
        self.gens = [list(c) for c in gen_cols]
        A = from_cols(self.gens, ambient)
        self.res = smith_normal_form(A, cover, shape=(ambient, len(self.gens)))

    @property
    def rank(self):
        return self.res.rank

    def basis_cols(self):
        return span_basis_cols(self.res)

    def contains(self, v):
        cover = self.cover
        z = cover.zero
        w = mat_vec(cover, self.res.U, v)
        for i in range(self.ambient):
            if i < self.res.rank:
                if cover.divmod(w[i], self.res.diag[i])[1] != z:
                    return False
            elif w[i] != z:
                return False
        return True

    def coords_in_basis(self, v):
        """Coordinates of v in basis_cols() order, or None if v not in the lattice."""
        cover = self.cover
        z = cover.zero
        w = mat_vec(cover, self.res.U, v)
        y = []
        for i in range(self.ambient):
            if i < self.res.rank:
                q, r = cover.divmod(w[i], self.res.diag[i])
                if r != z:
                    return None
                y.append(q)
            elif w[i] != z:
                return None
        return y

    def contains_lattice(self, other):
        return all(self.contains(c) for c in other.basis_cols())

    def equals(self, other):
        return self.contains_lattice(other) and other.contains_lattice(self)
