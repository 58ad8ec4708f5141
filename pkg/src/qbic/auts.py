"""Automorphism groups of q-bic forms.

The automorphism group scheme of a q-bic form with Gram matrix B consists
of the invertible A with A^[1],T B A = B.  Its dimension and the dimension
of its Lie algebra are closed-form functions of the type invariant; this
module evaluates those formulas and, on tiny instances, enumerates the
rational points directly as an independent check.
"""

from __future__ import annotations

import os

from . import CostGuardError
from .fields import field_make
from .forms import type_of
from .linalg import MatrixF, kernel, twisted_congruence

_ENUM_GUARD = 5 ** 9


def lie_dim(t):
    """Dimension of the Lie algebra: tangent vectors are the maps
    V -> P_1 V, so the dimension is n * corank."""
    return t.n * t.corank


def group_dim(t):
    """Dimension of the automorphism group scheme of a form of type t."""
    mu = t.max_block() or 0
    total = 0
    for k in range(1, mu // 2 + 2):
        b_odd = t.b_m(2 * k - 1)
        b_even = t.b_m(2 * k)
        total += k * (b_odd * b_odd + b_even * b_even)
        total += (t.a + sum(m * t.b_m(m) for m in range(2 * k, mu + 1))) * b_odd
        total += 2 * k * sum(t.b_m(m) for m in range(2 * k + 1, mu + 1)) * b_even
    return total


def phi(t, m):
    """Growth coefficient of group_dim under direct sums: adding one N_m
    summand to a fixed form of type t increases the dimension by phi(t, m)
    plus the contribution of the new summand itself."""
    if m < 1:
        raise ValueError("m must be positive")
    if m % 2 == 1:
        k = (m + 1) // 2
        return (t.n + t.b_m(2 * k - 1)
                + 2 * sum((k - l) * t.b_m(2 * l - 1) for l in range(1, k)))
    k = m // 2
    mu = t.max_block() or 0
    return (sum(2 * l * t.b_m(2 * l) for l in range(1, k))
            + 2 * k * (sum(t.b_m(2 * l - 1) for l in range(1, mu + 1))
                       + sum(t.b_m(2 * l) for l in range(k, mu + 1))))


def _check_enum_guard(f):
    field = f.field
    if field.kind != "finite":
        raise CostGuardError("point enumeration requires a finite field")
    if f.n > 3 or field.order ** (f.n * f.n) > _ENUM_GUARD:
        raise CostGuardError(
            f"point enumeration over GF({field.order}) needs "
            f"{field.order}^{f.n * f.n} candidates; guard is n <= 3 and "
            f"|field|^(n^2) <= {_ENUM_GUARD}")


def _count_range(field, B, start, stop, want_samples):
    """Count stabilizers among the candidate matrices with enumeration
    index in [start, stop); candidates are indexed by base-|field|
    digits, row-major."""
    n = B.nrows
    order = field.order
    elements = list(field.elements())
    count = 0
    samples = []
    for idx in range(start, stop):
        digits = []
        v = idx
        for _ in range(n * n):
            digits.append(v % order)
            v //= order
        A = MatrixF(field, [[elements[digits[i * n + j]] for j in range(n)]
                            for i in range(n)])
        if not A.is_invertible():
            continue
        if twisted_congruence(B, A) == B:
            count += 1
            if want_samples and len(samples) < 10:
                samples.append(A)
    return count, samples


def _count_range_worker(args):
    (p, e, k, modulus, rows, start, stop) = args
    field = field_make(p, e, k, modulus)
    elements = list(field.elements())
    B = MatrixF(field, [[elements[v] for v in row] for row in rows])
    count, _ = _count_range(field, B, start, stop, False)
    return count


def enumerate_points(f, jobs=1):
    """Exhaustively count the invertible A with A^[1],T B A = B over a
    small finite field, returning (count, samples) with at most 10 sample
    matrices.  Guarded: refuses fields/dimensions where the candidate
    space exceeds the enumeration budget."""
    _check_enum_guard(f)
    field = f.field
    n = f.n
    total = field.order ** (n * n)
    if jobs is None:
        jobs = int(os.environ.get("QBIC_JOBS", "1"))
    if jobs <= 1:
        return _count_range(field, f.gram, 0, total, True)
    import concurrent.futures
    rows = [[f.gram[i, j].val for j in range(n)] for i in range(n)]
    chunk = (total + 4 * jobs - 1) // (4 * jobs)
    tasks = [(field.p, field.e, field.k, field.modulus, rows,
              s, min(s + chunk, total)) for s in range(0, total, chunk)]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as ex:
        count = sum(ex.map(_count_range_worker, tasks))
    # Samples come from a sequential scan so output is identical
    # regardless of the worker count.
    samples = []
    for start in range(0, total, 4096):
        _, found = _count_range(field, f.gram, start,
                                min(start + 4096, total), True)
        samples.extend(found)
        if len(samples) >= min(count, 10):
            break
    return count, samples[:10]


def lie_points(f):
    """Count the matrices phi with B.phi = 0 over the base field; these
    are the tangent vectors id + eps*phi of the automorphism group, and
    the count is |field|^(n * corank)."""
    if f.field.kind != "finite":
        raise CostGuardError("Lie point counting requires a finite field")
    if f.n > 8:
        raise CostGuardError("Lie point counting is guarded at n <= 8")
    # B.phi = 0 holds iff every column of phi lies in the kernel of B.
    d = kernel(f.gram).dim
    return f.field.order ** (f.n * d)


def aut_report(f, points=False, jobs=1):
    """JSON-ready report on the automorphism group of f."""
    t = type_of(f)
    report = {
        "type": str(t),
        "lie_dim": lie_dim(t),
        "group_dim": group_dim(t),
        "points": None,
    }
    if points:
        count, _ = enumerate_points(f, jobs=jobs)
        report["points"] = {"field": f"{f.field.p}^{f.field.k}",
                            "count": count}
    return report
