"""The q-bic form object and its intrinsic invariants.

A q-bic form on V = k^n is encoded by its Gram matrix B with
B[i][j] = beta(e_i^[1], e_j): linear in the second argument and
q-power-Frobenius-linear in the first.  This module computes the two
canonical filtrations, the type invariant (a; b_m), rank and radical,
the descent index nu, and the space of Hermitian vectors over finite
extensions.
"""

from __future__ import annotations

import re

from .fields import embed, extension_field
from .linalg import (MatrixF, Subspace, descent_test, intersect, kernel,
                     left_orthogonal, rank, right_orthogonal, subspace_sum,
                     twist_matrix, twist_subspace)


class QBicForm:
    __slots__ = ("field", "gram", "n")

    def __init__(self, field, gram):
        if gram.nrows != gram.ncols:
            raise ValueError("Gram matrix must be square")
        if gram.field != field:
            raise ValueError("Gram matrix field mismatch")
        self.field = field
        self.gram = gram
        self.n = gram.nrows

    def __eq__(self, other):
        return (isinstance(other, QBicForm) and self.field == other.field
                and self.gram == other.gram)

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        return f"QBicForm(n={self.n}, gram={self.gram!r})"


def direct_sum(f, g):
    if f.field != g.field:
        raise ValueError("field mismatch")
    return QBicForm(f.field,
                    MatrixF.block_diagonal(f.field, [f.gram, g.gram]))


# ---------------------------------------------------------------------------
# filtrations


class PerpFiltration:
    """The chain P_{-1} = 0, P_0 = V, P_i = right orthogonal of the twist
    of P_{i-1}.  Odd pieces increase to p_minus, even pieces decrease to
    p_plus; `length` is the first index at which both chains have
    stabilized."""

    __slots__ = ("n", "_pieces", "p_minus", "p_plus", "length")

    def __init__(self, n, pieces, p_minus, p_plus, length):
        self.n = n
        self._pieces = pieces  # index i+1 holds P_i, starting at P_{-1}
        self.p_minus = p_minus
        self.p_plus = p_plus
        self.length = length

    def piece(self, i):
        """P_i V for any i >= -1; stabilized values beyond the computed
        range."""
        if i < -1:
            raise ValueError("filtration index must be >= -1")
        if i + 1 < len(self._pieces):
            return self._pieces[i + 1]
        return self.p_minus if i % 2 else self.p_plus

    def computed_range(self):
        return len(self._pieces) - 1


def perp_filtration(f):
    n = f.n
    zero = Subspace.zero(f.field, n)
    full = Subspace.full(f.field, n)
    pieces = [zero, full]
    length = None
    step = 1
    while True:
        prev = pieces[-1]
        nxt = right_orthogonal(f.gram, twist_subspace(prev, 1))
        pieces.append(nxt)
        if len(pieces) >= 5 and pieces[-1] == pieces[-3] \
                and pieces[-2] == pieces[-4]:
            length = step - 2
            break
        step += 1
        assert step <= n + 3, "perp filtration failed to stabilize"
    p_plus = pieces[-1] if (len(pieces) - 2) % 2 == 0 else pieces[-2]
    p_minus = pieces[-1] if (len(pieces) - 2) % 2 == 1 else pieces[-2]
    return PerpFiltration(n, pieces, p_minus, p_plus, length)


class PerpPrimeFiltration:
    """The chain P'_0 = V, P'_i V^[i] = left orthogonal (under the
    (i-1)-twisted pairing) of the previous piece; each piece is stored in
    the coordinates of V^[i] together with the minimal twist level it
    descends to."""

    __slots__ = ("n", "pieces_on_twist", "descent_levels", "length")

    def __init__(self, n, pieces_on_twist, descent_levels, length):
        self.n = n
        self.pieces_on_twist = pieces_on_twist
        self.descent_levels = descent_levels
        self.length = length

    def piece_on_twist(self, i):
        """P'_i V^[i] in V^[i] coordinates, for any i >= 0."""
        if i < 0:
            raise ValueError("filtration index must be >= 0")
        if i < len(self.pieces_on_twist):
            return self.pieces_on_twist[i]
        # stabilized: P'_{i} = twist^2 of P'_{i-2} once both parities settle
        j = i
        while j >= len(self.pieces_on_twist):
            j -= 2
        return twist_subspace(self.pieces_on_twist[j], i - j)

    def descended_piece(self, i):
        """P'_i descended all the way to V; requires descent level 0."""
        if self.descent_level(i) != 0:
            raise ValueError(f"piece {i} does not descend to V")
        S = self.piece_on_twist(i)
        for _ in range(i):
            S2 = descent_test(S)
            assert S2 is not None
            S = S2
        return S

    def descent_level(self, i):
        if i < len(self.descent_levels):
            return self.descent_levels[i]
        j = i
        while j >= len(self.descent_levels):
            j -= 2
        return self.descent_levels[j] + (i - j)

    def nu(self):
        return max(self.descent_levels)


def perp_prime_filtration(f):
    n = f.n
    full = Subspace.full(f.field, n)
    pieces = [full]
    levels = [0]
    length = None
    step = 1
    while True:
        prev = pieces[-1]
        nxt = left_orthogonal(twist_matrix(f.gram, step - 1), prev)
        pieces.append(nxt)
        # minimal descent level: strip roots as long as they exist
        S, lvl = nxt, step
        while lvl > 0:
            S2 = descent_test(S)
            if S2 is None:
                break
            S = S2
            lvl -= 1
        levels.append(lvl)
        if len(pieces) >= 5:
            a = twist_subspace(pieces[-3], 2)
            b = twist_subspace(pieces[-4], 2)
            if pieces[-1] == a and pieces[-2] == b:
                length = step - 2
                break
        step += 1
        assert step <= n + 3, "perp-prime filtration failed to stabilize"
    return PerpPrimeFiltration(n, pieces, levels, length)


# ---------------------------------------------------------------------------
# the type invariant


class TypeSignature:
    """The invariant (a; b_1, b_2, ...) with n = a + sum(m b_m)."""

    __slots__ = ("a", "b", "n")

    def __init__(self, a, b):
        self.a = a
        self.b = {m: bm for m, bm in sorted(b.items()) if bm > 0}
        if a < 0 or any(m < 1 or bm < 0 for m, bm in self.b.items()):
            raise ValueError("invalid type data")
        self.n = a + sum(m * bm for m, bm in self.b.items())

    def b_m(self, m):
        return self.b.get(m, 0)

    @property
    def corank(self):
        return sum(self.b.values())

    @property
    def rank(self):
        return self.n - self.corank

    def is_nonsingular(self):
        return not self.b

    def max_block(self):
        """mu = max{m : b_m != 0}; None when nonsingular."""
        return max(self.b) if self.b else None

    def direct_sum(self, other):
        b = dict(self.b)
        for m, bm in other.b.items():
            b[m] = b.get(m, 0) + bm
        return TypeSignature(self.a + other.a, b)

    def key(self):
        maxm = max(self.b) if self.b else 0
        return (self.a,) + tuple(self.b_m(m) for m in range(1, maxm + 1))

    def __eq__(self, other):
        return (isinstance(other, TypeSignature)
                and self.a == other.a and self.b == other.b)

    def __hash__(self):
        return hash((self.a, tuple(sorted(self.b.items()))))

    def __str__(self):
        terms = []
        c = self.b_m(1)
        if c == 1:
            terms.append("0")
        elif c > 1:
            terms.append(f"0^{c}")
        if self.a == 1:
            terms.append("1")
        elif self.a > 1:
            terms.append(f"1^{self.a}")
        for m in sorted(self.b):
            if m == 1:
                continue
            bm = self.b[m]
            terms.append(f"N{m}" if bm == 1 else f"N{m}^{bm}")
        return "+".join(terms) if terms else "(empty)"

    def __repr__(self):
        return f"TypeSignature({self})"


_TYPE_TERM_RE = re.compile(r"^(?:(0)|(1)|N(\d+))(?:\^(\d+))?$")


def parse_type(text):
    """Parse a type string: terms joined by '+'; term = 1^a | N<m> |
    N<m>^<b> | 0^c, with 0 meaning N1."""
    a = 0
    b = {}
    for raw in text.split("+"):
        term = raw.strip()
        m = _TYPE_TERM_RE.match(term)
        if not m:
            raise ValueError(f"bad type term {term!r}")
        mult = int(m.group(4)) if m.group(4) else 1
        if m.group(1):
            b[1] = b.get(1, 0) + mult
        elif m.group(2):
            a += mult
        else:
            blk = int(m.group(3))
            if blk < 1:
                raise ValueError(f"bad block size in {term!r}")
            b[blk] = b.get(blk, 0) + mult
    return TypeSignature(a, b)


def type_of(f, filt=None):
    """The type (a; b_m), computed from perp-filtration quotient dimensions
    only, so it is valid over imperfect fields as well."""
    if filt is None:
        filt = perp_filtration(f)
    n = f.n
    dims = {i: filt.piece(i).dim for i in range(-1, n + 2)}

    def a_m(m):
        eps = -1 if m % 2 else 1
        lo, hi = dims[m + eps - 1], dims[m - eps - 1]
        return hi - lo

    avals = {m: a_m(m) for m in range(1, n + 2)}
    b = {}
    for m in range(1, n + 1):
        bm = avals[m] - avals[m + 1]
        if bm:
            b[m] = bm
    a = filt.p_plus.dim - filt.p_minus.dim
    t = TypeSignature(a, b)
    assert t.n == n, "type dimensions do not add up"
    return t


# ---------------------------------------------------------------------------
# rank, radical, total orthogonal, descent index


def rank_corank(f):
    r = rank(f.gram)
    return r, f.n - r


def radical(f):
    """Vectors of V^[1] orthogonal to everything on both sides."""
    left = kernel(f.gram.transpose())
    right = kernel(twist_matrix(f.gram, 1))
    return intersect(left, right)


def total_orthogonal(f, S):
    """The subspace of V^[1] orthogonal to S under beta and to S^[2] under
    the twisted pairing beta^[1]."""
    first = left_orthogonal(f.gram, S)
    second = right_orthogonal(twist_matrix(f.gram, 1), twist_subspace(S, 2))
    return intersect(first, second)


def nu_index(f, pfilt=None):
    """Minimal i such that the whole perp-prime filtration descends to
    V^[i]; zero over perfect (finite) fields."""
    if pfilt is None:
        pfilt = perp_prime_filtration(f)
    return pfilt.nu()


def nu_zero_bound(t):
    """The a-priori bound nu0 on the descent index, from the type alone.

    Requires a degenerate type; mu = max{m : b_m != 0}:
      - mu > 1 and no even blocks          -> mu - 2
      - mu odd, or (mu even and a = 0)     -> mu - 1
      - otherwise                          -> mu
    """
    mu = t.max_block()
    if mu is None:
        raise ValueError("nu0 is defined for degenerate types only")
    if mu > 1 and all(m % 2 for m in t.b):
        return mu - 2
    if mu % 2 == 1 or t.a == 0:
        return mu - 1
    return mu


# ---------------------------------------------------------------------------
# Hermitian vectors


class HermitianSpace:
    """The F_{q^2}-space of Hermitian vectors of f over the degree-r
    extension of its (finite) base field.

    A vector v over the extension K is Hermitian when
    B v = transpose(B^[1]) v^(q^2) exactly.
    """

    __slots__ = ("form", "r", "ext_field", "base_embedding", "fq2",
                 "fq2_embedding", "basis", "d", "point_count", "gram_ext")

    def __init__(self, form, r, ext_field, base_embedding, fq2,
                 fq2_embedding, basis, gram_ext):
        self.form = form
        self.r = r
        self.ext_field = ext_field
        self.base_embedding = base_embedding
        self.fq2 = fq2
        self.fq2_embedding = fq2_embedding
        self.basis = basis
        self.gram_ext = gram_ext
        self.d = len(basis)
        self.point_count = (form.field.q ** 2) ** self.d


class _GFpSpan:
    """Incremental GF(p) row space for independence testing."""

    def __init__(self, p, width):
        self.p = p
        self.width = width
        self.rows = []  # echelonized, pivot positions increasing

    def add(self, vec):
        """Reduce vec against the span; add if independent.  Returns True
        when the span grew."""
        p = self.p
        v = list(vec)
        for row, piv in self.rows:
            if v[piv]:
                f = (v[piv] * pow(row[piv], p - 2, p)) % p
                v = [(a - f * b) % p for a, b in zip(v, row)]
        piv = next((i for i, a in enumerate(v) if a), None)
        if piv is None:
            return False
        self.rows.append((v, piv))
        return True


def _flatten_ext_vector(K, vec):
    out = []
    for x in vec:
        dig = K._decode(x.val)
        out.extend(dig[i] if i < len(dig) else 0 for i in range(K.k))
    return out


def hermitian_space(f, r):
    """Solve for the Hermitian vectors of f over the degree-r extension.

    The defining map x -> Bx - transpose(B^[1]) x^(q^2) is F_{q^2}-linear,
    so the solutions are found by GF(p)-linear algebra after restricting
    scalars along the fixed power basis of the extension."""
    base = f.field
    if base.kind != "finite":
        raise ValueError("Hermitian point counting needs a finite base "
                         "field")
    K = extension_field(base, r)
    emb = embed(base, K)
    B = MatrixF(K, [[emb.apply(a) for a in row] for row in f.gram.rows])
    C = twist_matrix(B, 1).transpose()
    n = f.n
    p, kK = K.p, K.k
    q2 = base.q ** 2

    # GF(p)-matrix of x -> Bx - C x^(q^2) on K^n
    cols = []
    for j in range(n):
        for i in range(kK):
            x = [K.zero()] * n
            x[j] = K._make(K._encode([0] * i + [1]))
            xq2 = [K._make(K._fpow(v.val, q2)) for v in x]
            img = [u - w for u, w in zip(B.apply(x), C.apply(xq2))]
            cols.append(_flatten_ext_vector(K, img))
    from .fields import _gfp_kernel
    ker = _gfp_kernel(cols, p, n * kK)

    # decode GF(p)-kernel vectors back into K^n
    def decode(vec):
        out = []
        for j in range(n):
            out.append(K._make(K._encode(vec[j * kK:(j + 1) * kK])))
        return out

    solutions = [decode(v) for v in ker]

    # F_{q^2} inside K
    if base.k == 2 * base.e:
        fq2 = base
    else:
        from .fields import field_make
        fq2 = field_make(base.p, base.e, 2 * base.e, None, "finite")
    fq2_emb = embed(fq2, K)
    mults = []
    w = K.one()
    gen_img = K._make(fq2_emb.gen_image) if fq2.k > 1 else K.one()
    for _ in range(fq2.k):
        mults.append(w)
        w = w * gen_img

    # greedy F_{q^2}-independent subset of the solution space
    span = _GFpSpan(p, n * kK)
    basis = []
    for v in solutions:
        flat = _flatten_ext_vector(K, v)
        grew = False
        for mu in mults:
            if span.add(_flatten_ext_vector(K, [mu * x for x in v])):
                grew = True
        if grew:
            basis.append(v)
    expected = len(ker) // fq2.k
    assert len(ker) % fq2.k == 0 and len(basis) == expected, \
        "Hermitian solution space is not F_{q^2}-linear"
    return HermitianSpace(f, r, K, emb, fq2, fq2_emb, basis, B)


def hermitian_gram(h):
    """Gram matrix of beta on the Hermitian basis; entries lie in F_{q^2}
    and satisfy transpose(H) = H^[1]."""
    K = h.ext_field
    B = h.gram_ext
    from .fields import frobenius
    rows = []
    for vi in h.basis:
        vi_tw = [frobenius(x, 1) for x in vi]
        row = []
        for vj in h.basis:
            acc = K.zero()
            Bvj = B.apply(vj)
            for a, b in zip(vi_tw, Bvj):
                acc = acc + a * b
            val = h.fq2_embedding.preimage(acc)
            if val is None:
                raise AssertionError("Hermitian pairing value outside "
                                     "F_{q^2}")
            row.append(val)
        rows.append(row)
    return MatrixF(h.fq2, rows)


# ---------------------------------------------------------------------------
# JSON-facing report


def type_report(f):
    filt = perp_filtration(f)
    t = type_of(f, filt)
    pfilt = perp_prime_filtration(f)
    nu = pfilt.nu()
    report = {
        "type": str(t),
        "n": f.n,
        "a": t.a,
        "b": {str(m): bm for m, bm in sorted(t.b.items())},
        "corank": t.corank,
        "rank": t.rank,
        "nu": nu,
        "nu0": nu_zero_bound(t) if t.b else None,
    }
    return report
