"""Constructive normal forms under q-twisted conjugation.

Over a finite field every q-bic form is carried to its standard Gram matrix
1^a + sum_m N_m^(b_m) by an explicit basis change, possibly after a finite
extension for the nonsingular part.  The splitting of the N_m summands
follows the filtration seesaw; the nonsingular residue is orthonormalized
through its Hermitian vectors.  Every certificate is verified exactly:
transpose(U^[1]) . B . U equals the standard Gram matrix entrywise.
"""

from __future__ import annotations

import itertools

from .fields import embed, extension_field, frobenius
from .forms import (QBicForm, hermitian_gram, hermitian_space,
                    perp_filtration, perp_prime_filtration, total_orthogonal,
                    type_of, TypeSignature)
from .linalg import (MatrixF, Subspace, complement, descent_test, image,
                     intersect, kernel, right_orthogonal, subspace_sum,
                     twist_matrix, twist_subspace, twisted_congruence)


def jordan_gram(field, m):
    """The m-by-m Jordan block with zero diagonal."""
    return MatrixF.from_int_rows(
        field, [[1 if j == i + 1 else 0 for j in range(m)]
                for i in range(m)])


def standard_gram(t, field):
    """Block diagonal 1^a + N_1^(b_1) + N_2^(b_2) + ...: identity block
    first, then block sizes increasing."""
    blocks = []
    if t.a:
        blocks.append(MatrixF.identity(field, t.a))
    for m in sorted(t.b):
        for _ in range(t.b[m]):
            blocks.append(jordan_gram(field, m))
    return MatrixF.block_diagonal(field, blocks)


class NormalFormCertificate:
    __slots__ = ("form", "target", "transform", "extension_degree",
                 "extension_field", "verified")

    def __init__(self, form, target, transform, extension_degree,
                 extension_field_, verified):
        self.form = form
        self.target = target
        self.transform = transform
        self.extension_degree = extension_degree
        self.extension_field = extension_field_
        self.verified = verified


class NeedsExtension(Exception):
    """Raised when allow_extension is off but the base field is too small."""

    def __init__(self, degree):
        self.degree = degree
        super().__init__(f"needs extension of degree {degree}")


# ---------------------------------------------------------------------------
# helpers


def _require_finite(f):
    if f.field.kind != "finite":
        raise ValueError("normal forms require a finite base field")


def _subspace_vectors(S):
    """All nonzero vectors of S in a fixed deterministic order."""
    field = S.field
    cols = S.basis.columns()
    scalars = list(field.elements())
    for coeffs in itertools.product(scalars, repeat=len(cols)):
        if all(c.is_zero() for c in coeffs):
            continue
        vec = [field.zero()] * S.n
        for c, col in zip(coeffs, cols):
            if not c.is_zero():
                vec = [a + c * b for a, b in zip(vec, col)]
        yield vec


def _span(field, n, cols):
    return Subspace.from_columns(field, n, cols)


def _restricted_gram(B, M):
    """Gram of the restriction of beta to the column span of M, in the
    coordinates given by the columns."""
    return twist_matrix(M, 1).transpose() @ B @ M


def _choose_matching(field, X, D, B, target, b):
    """A b-dimensional subspace Y of X with B.Y = target, linearly disjoint
    from D.  Depth-first search over the vectors of X, deterministic."""
    n = X.n
    candidates = list(_subspace_vectors(X))

    def extend(chosen, start):
        if len(chosen) == b:
            Y = _span(field, n, chosen)
            imgs = _span(field, n, [B.apply(v) for v in chosen])
            if imgs == target:
                return Y
            return None
        for idx in range(start, len(candidates)):
            v = candidates[idx]
            trial = chosen + [v]
            Y = _span(field, n, trial)
            if Y.dim != len(trial):
                continue
            if intersect(Y, D).dim != 0:
                continue
            imgs = _span(field, n, [B.apply(u) for u in trial])
            if imgs.dim != len(trial) or not target.contains(imgs):
                continue
            got = extend(trial, idx + 1)
            if got is not None:
                return got
        return None

    Y = extend([], 0)
    if Y is None:
        raise AssertionError("no matching subspace found during peeling")
    return Y


def _extend_to_complement_avoiding(field, n, seed, avoid):
    """Grow `seed` to a complement of `avoid` in k^n by coordinate vectors,
    keeping the intersection with `avoid` trivial."""
    cur = seed
    target_dim = n - avoid.dim
    for i in range(n):
        if cur.dim == target_dim:
            break
        e = [field.one() if j == i else field.zero() for j in range(n)]
        trial = subspace_sum(cur, _span(field, n, [e]))
        if trial.dim > cur.dim and intersect(trial, avoid).dim == 0:
            cur = trial
    assert cur.dim == target_dim, "complement extension failed"
    return cur


# ---------------------------------------------------------------------------
# peeling one block size


class PeelResult:
    __slots__ = ("transform", "block", "rest")

    def __init__(self, transform, block, rest):
        self.transform = transform
        self.block = block
        self.rest = rest


def peel(f, m):
    """Split f = (N_m^(b_m) block) + (orthogonal rest) by an explicit basis
    change; returns the change of basis together with both summands."""
    _require_finite(f)
    field, B, n = f.field, f.gram, f.n
    t = type_of(f)
    b = t.b_m(m)
    if b == 0:
        raise ValueError(f"type has no N_{m} summand")
    P = perp_filtration(f)
    Pp = perp_prime_filtration(f)

    def Ppd(i):
        if i <= -1:
            return Subspace.zero(field, n)
        return Pp.descended_piece(i)

    if m == 1:
        Vprime = intersect(P.piece(1), Ppd(1))
        assert Vprime.dim == b
        block_cols = Vprime.basis.columns()
        Vpp = complement(Vprime)
    else:
        eps = 1 if m % 2 == 0 else -1
        # V_1: a lift of the b-dimensional quotient inside P_1
        S_hi = intersect(P.piece(1), Ppd(m - eps - 1))
        S_lo = intersect(P.piece(1), Ppd(m + eps - 1))
        V1 = complement(S_lo, inside=S_hi)
        assert V1.dim == b, "wrong invariant count while peeling"

        # V_2: the dual subspace to the image W_1 of V_1 under beta-dual
        Q = Ppd(m + eps - 2)
        Qb = Q.basis

        def dual_image(vec):
            tw = [frobenius(x, 1) for x in vec]
            return Qb.transpose().apply(B.transpose().apply(tw))

        W1 = _span(field, Q.dim, [dual_image(v) for v in V1.basis.columns()])
        assert W1.dim == b
        K = Ppd(m + eps - 1)  # descent of the kernel of beta-dual
        C1 = complement(subspace_sum(V1, K))
        C2 = complement(intersect(V1, K), inside=K)
        V1pp = subspace_sum(C1, C2)
        Wimg = _span(field, Q.dim,
                     [dual_image(v) for v in V1pp.basis.columns()])
        assert intersect(Wimg, W1).dim == 0
        W1p = _extend_to_complement_avoiding(field, Q.dim, Wimg, W1)
        ann = kernel(W1p.basis.transpose())
        V2_cols = [Qb.apply(c) for c in ann.basis.columns()]
        V2 = _span(field, n, V2_cols)
        assert V2.dim == b
        assert intersect(V2, Ppd(m - eps - 2)).dim == 0

        blocks = {1: V1, 2: V2}
        Btw = twist_matrix(B, 1).transpose()
        for i in range(3, m + 1):
            prev = blocks[i - 2]
            target = image(Btw @ twist_matrix(prev.basis, 2))
            if i % 2 == 1:
                X = intersect(P.piece(i), Ppd(m - eps - i))
                D = Ppd(m + eps - i)
            else:
                X = intersect(P.piece(i - 2), Ppd(m + eps - i))
                D = Ppd(m - eps - i)
            blocks[i] = _choose_matching(field, X, D, B, target, b)

        M = None
        for i in range(1, m + 1):
            M = blocks[i].basis if M is None else M.hstack(blocks[i].basis)
        Vprime = image(M)
        assert Vprime.dim == m * b, "peeled blocks are not disjoint"

        block_cols = _standardize_block(field, B, M, m, b)
        Vpp_twisted = total_orthogonal(f, Vprime)
        Vpp = descent_test(Vpp_twisted)
        assert Vpp is not None, "total orthogonal does not descend"

    assert Vpp.dim == n - m * b
    cols = block_cols + Vpp.basis.columns()
    U = MatrixF(field, cols).transpose()
    G = twisted_congruence(B, U)
    blockG = MatrixF.block_diagonal(
        field, [jordan_gram(field, m)] * b) if b else MatrixF.zero(field, 0, 0)
    restG = G.submatrix(range(m * b, n), range(m * b, n))
    expect = MatrixF.block_diagonal(field, [blockG, restG])
    assert G == expect, "peeled Gram is not block diagonal"
    return PeelResult(U, QBicForm(field, blockG), QBicForm(field, restG))


def _standardize_block(field, B, M, m, b):
    """Adjust the decomposition spanned by the columns of M (m groups of b)
    until the restricted Gram is exactly N_m^(b) in a suitable basis;
    returns the resulting column vectors of V."""
    G = _restricted_gram(B, M)
    mb = m * b

    def unit_block(i):
        cols = []
        for s in range(b):
            vec = [field.zero()] * mb
            vec[(i - 1) * b + s] = field.one()
            cols.append(vec)
        return _span(field, mb, cols)

    blocks = {i: unit_block(i) for i in range(1, m + 1)}

    # recognition conditions, asserted before the final adjustment
    assert kernel(G) == blocks[1], "V_1 is not the right kernel"
    assert kernel(G.transpose()) == blocks[m], "V_m is not the left kernel"
    pair12 = G.submatrix(range(b), range(b, 2 * b))
    assert pair12.is_invertible(), "beta_{1,2} is not an isomorphism"
    Gtw = twist_matrix(G, 1).transpose()
    for i in range(2, m):
        lhs = image(G @ blocks[i + 1].basis)
        rhs = image(Gtw @ twist_matrix(blocks[i - 1].basis, 2))
        assert lhs == rhs, "image matching fails in the middle range"

    # Gram-Schmidt-like adjustment of the even-indexed subspaces
    if m % 2 == 1:
        for k in range(1, (m + 1) // 2):
            Vsub = blocks[2 * k]
            for i in range(2 * k + 1, m + 1):
                Vsub = subspace_sum(Vsub, blocks[i])
            new2k = intersect(Vsub,
                              right_orthogonal(G, twist_subspace(Vsub, 1)))
            assert new2k.dim == b
            updates = {2 * k: new2k}
            orth = right_orthogonal(G, twist_subspace(new2k, 1))
            for i in range(2 * k + 2, m + 1, 2):
                Si = subspace_sum(blocks[2 * k + 1], blocks[i])
                newi = intersect(Si, orth)
                assert newi.dim == b
                updates[i] = newi
            blocks.update(updates)
    else:
        updates = {}
        for k in range(1, m // 2 + 1):
            S = blocks[2 * k]
            R = None
            for ell in range(k + 1, m // 2 + 1):
                S = subspace_sum(S, blocks[2 * ell])
                R = blocks[2 * ell - 1] if R is None else \
                    subspace_sum(R, blocks[2 * ell - 1])
            if R is None:
                updates[2 * k] = blocks[2 * k]
            else:
                newk = intersect(S,
                                 right_orthogonal(G, twist_subspace(R, 1)))
                assert newk.dim == b
                updates[2 * k] = newk
        blocks.update(updates)

    # chain of dual bases: beta(v_i^[1], v_{i+1}) = identity per block
    basis_chain = [blocks[1].basis.columns()]
    for i in range(1, m):
        prev = basis_chain[-1]
        nxt_basis = blocks[i + 1].basis
        pair = MatrixF(field,
                       [[_pairing(G, u, w) for w in nxt_basis.columns()]
                        for u in prev])
        C = pair.inverse()
        cols = nxt_basis.columns()
        new_cols = []
        for s in range(b):
            vec = [field.zero()] * mb
            for c in range(b):
                coef = C.rows[c][s]
                if not coef.is_zero():
                    vec = [a + coef * x for a, x in zip(vec, cols[c])]
            new_cols.append(vec)
        basis_chain.append(new_cols)

    # interleave: per copy s the chain v_1^(s), ..., v_m^(s)
    out = []
    for s in range(b):
        for i in range(m):
            out.append(M.apply(basis_chain[i][s]))
    return out


def _pairing(G, u, w):
    tw = [frobenius(x, 1) for x in u]
    acc = G.field.zero()
    for a, c in zip(tw, G.apply(w)):
        if a and c:
            acc = acc + a * c
    return acc


# ---------------------------------------------------------------------------
# orthonormalizing the nonsingular residue


def orthonormalize_nonsingular(f, allow_extension=True):
    """Carry a nonsingular form to the identity Gram matrix, over the
    smallest extension whose Hermitian vectors span."""
    _require_finite(f)
    field, n = f.field, f.n
    if n == 0:
        return NormalFormCertificate(f, TypeSignature(0, {}),
                                     MatrixF.identity(field, 0), 1, field,
                                     True)
    t = type_of(f)
    if not t.is_nonsingular():
        raise ValueError("form is singular")
    r_cap = max(2 * n, 4)
    h = None
    for r in range(1, r_cap + 1):
        cand = hermitian_space(f, r)
        if cand.d == n:
            h = cand
            break
    if h is None:
        raise AssertionError(
            f"Hermitian vectors do not span within extensions of degree "
            f"{r_cap}")
    if h.r > 1 and not allow_extension:
        raise NeedsExtension(h.r)
    K = h.ext_field
    fq2 = h.fq2
    H = hermitian_gram(h)
    A = _diagonalize_hermitian(H)
    HA = twisted_congruence(H, A)
    # scale each diagonal entry to 1 via the norm equation x^(q+1) = c^{-1}
    q = fq2.q
    scales = []
    for i in range(n):
        c = HA.rows[i][i]
        assert not c.is_zero()
        target = c.inverse()
        x = next(u for u in fq2.elements()
                 if not u.is_zero() and u ** (q + 1) == target)
        scales.append(x)
    D = MatrixF(fq2, [[scales[i] if i == j else fq2.zero()
                       for j in range(n)] for i in range(n)])
    A = A @ D
    assert twisted_congruence(H, A) == MatrixF.identity(fq2, n)

    # assemble the transform over K: columns are F_{q^2}-combinations of
    # the Hermitian basis vectors
    emb2 = embed(fq2, K)
    Vmat = MatrixF(K, h.basis).transpose()
    A_K = MatrixF(K, [[emb2.apply(a) for a in row] for row in A.rows])
    U = Vmat @ A_K
    BK = h.gram_ext
    verified = twisted_congruence(BK, U) == MatrixF.identity(K, n)
    assert verified, "orthonormalization certificate failed to verify"
    return NormalFormCertificate(f, t, U, h.r, K, True)


def _diagonalize_hermitian(H):
    """Congruence transform A with A^[1]T H A diagonal; H nondegenerate
    Hermitian over F_{q^2}."""
    fq2 = H.field
    n = H.nrows
    A = MatrixF.identity(fq2, n)
    work = H
    done = 0
    while done < n:
        idx = list(range(done, n))
        # find a vector with nonzero self-pairing among remaining columns
        piv = next((j for j in idx if not work.rows[j][j].is_zero()), None)
        if piv is None:
            # mix two columns: h(u + lam w, u + lam w) = Tr(lam h(u, w))
            pair = next(((i, j) for i in idx for j in idx
                         if i != j and not work.rows[i][j].is_zero()))
            i, j = pair
            lam = next(lv for lv in fq2.elements()
                       if not (lv * work.rows[i][j]
                               + frobenius(lv * work.rows[i][j], 1)).is_zero())
            T = MatrixF.identity(fq2, n)
            rows = [list(r) for r in T.rows]
            rows[j][i] = lam
            T = MatrixF(fq2, rows)
            A = A @ T
            work = twisted_congruence(H, A)
            continue
        # swap pivot into position, then clear its row/column
        T = MatrixF.identity(fq2, n)
        if piv != done:
            rows = [list(r) for r in T.rows]
            rows[done][done] = fq2.zero()
            rows[piv][piv] = fq2.zero()
            rows[done][piv] = fq2.one()
            rows[piv][done] = fq2.one()
            T = MatrixF(fq2, rows)
            A = A @ T
            work = twisted_congruence(H, A)
        c = work.rows[done][done]
        rows = [[fq2.one() if i == j else fq2.zero() for j in range(n)]
                for i in range(n)]
        cinv = c.inverse()
        for j in range(done + 1, n):
            # clear h(v_done, v_j): v_j -> v_j - (h(v_done,v_j)/c) v_done
            rows[done][j] = -(cinv * work.rows[done][j])
        T = MatrixF(fq2, rows)
        A = A @ T
        work = twisted_congruence(H, A)
        done += 1
    return A


# ---------------------------------------------------------------------------
# full normal form and isomorphism testing


def normal_form(f, allow_extension=True):
    """Peel block sizes in increasing order, then orthonormalize the
    nonsingular residue; returns a verified certificate carrying f to
    standard_gram(type_of(f))."""
    _require_finite(f)
    field, n = f.field, f.n
    t = type_of(f)
    U = MatrixF.identity(field, n)
    rest = f
    offset = 0
    for m in sorted(t.b):
        res = peel(rest, m)
        lift = MatrixF.block_diagonal(
            field, [MatrixF.identity(field, offset), res.transform])
        U = U @ lift
        offset += m * t.b[m]
        rest = res.rest

    cert0 = orthonormalize_nonsingular(rest, allow_extension)
    K = cert0.extension_field
    if K == field:
        U_K = U
        B_K = f.gram
    else:
        emb = embed(field, K)

        def lift_mat(M):
            return MatrixF(K, [[emb.apply(a) for a in r] for r in M.rows])

        U_K = lift_mat(U)
        B_K = lift_mat(f.gram)
    tail = MatrixF.block_diagonal(
        K, [MatrixF.identity(K, offset), cert0.transform])
    U_K = U_K @ tail

    # move the identity block to the front: degenerate blocks were peeled
    # smallest first, so the current Gram is N_1^... then 1^a at the end
    perm_cols = []
    for j in range(n - t.a, n):
        perm_cols.append(j)
    for j in range(n - t.a):
        perm_cols.append(j)
    Pm = MatrixF(K, [[K.one() if perm_cols[j] == i else K.zero()
                      for j in range(n)] for i in range(n)])
    U_K = U_K @ Pm

    target = standard_gram(t, K)
    verified = twisted_congruence(B_K, U_K) == target
    assert verified, "normal-form certificate failed to verify"
    return NormalFormCertificate(f, t, U_K, cert0.extension_degree, K, True)


def is_isomorphic(f, g, mode="geometric"):
    """Isomorphism verdict.  Geometric mode compares types (a complete
    invariant over the algebraic closure).  Rational mode searches for an
    explicit witness over the common base field."""
    if f.n != g.n:
        raise ValueError("dimension mismatch")
    _require_finite(f)
    _require_finite(g)
    tf, tg = type_of(f), type_of(g)
    if mode == "geometric":
        return {"verdict": "yes" if tf == tg else "no",
                "type_from": str(tf), "type_to": str(tg)}
    if mode != "rational":
        raise ValueError(f"unknown mode {mode!r}")
    if f.field != g.field:
        raise ValueError("rational mode requires a common base field")
    if tf != tg:
        return {"verdict": "no", "type_from": str(tf), "type_to": str(tg)}
    try:
        cf = normal_form(f, allow_extension=False)
        cg = normal_form(g, allow_extension=False)
    except NeedsExtension:
        return {"verdict": "geometric-yes/rational-undetermined",
                "type_from": str(tf), "type_to": str(tg)}
    A = cf.transform @ cg.transform.inverse()
    assert twisted_congruence(f.gram, A) == g.gram
    return {"verdict": "yes", "type_from": str(tf), "type_to": str(tg),
            "witness": A}
