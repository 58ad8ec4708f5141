"""Specialization order on the moduli of q-bic forms of dimension n.

Types of q-bic forms stratify the space of Gram matrices; a type tA
specializes to tB when the orbit closure of tA contains tB.  This module
enumerates all types of a given dimension, evaluates the numerical
necessary and sufficient conditions for specialization, closes the basic
degeneration moves into a reachability relation, assembles the Hasse
diagram with per-edge evidence, and constructs explicit one-parameter
degeneration witnesses over GF(q^2)(t).
"""

from __future__ import annotations

import json
import logging
from collections import deque

from . import CostGuardError
from .fields import evaluate_at_zero, field_make
from .forms import QBicForm, TypeSignature, type_of
from .auts import group_dim
from .linalg import MatrixF

log = logging.getLogger(__name__)

_POSET_CAP = 8

# basic degeneration families: (family id, human-readable rewrite)
FAMILY_RULES = {
    1: "N_{2s+1} ~> 1^2 + N_{2s-1}",
    2: "N_{2s} ~> 1 + N_{2s-1}",
    3: "1^2 + N_{2s-2} ~> N_{2s}",
    4: "N_{2s-2t} + N_{2s+2} ~> N_{2s-2t+2} + N_{2s}",
    5: "N_{2s+1} + N_{2s+2t-1} ~> N_{2s-1} + N_{2s+2t+1}",
    6: "1^{2t-2s-1} + N_{2s} ~> N_{2t-1}",
}


# ---------------------------------------------------------------------------
# type enumeration and the numerical functionals


def enumerate_types(n):
    """All types (a; b) with a + sum(m b_m) = n, ordered lexicographically
    by (a, b_1, b_2, ...)."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []

    def go(rem, m, b):
        if m > n:
            if rem >= 0:
                out.append(TypeSignature(rem, dict(b)))
            return
        for bm in range(rem // m + 1):
            if bm:
                b[m] = bm
            go(rem - m * bm, m + 1, b)
            if bm:
                del b[m]

    go(n, 1, {})
    out.sort(key=lambda t: t.key())
    return out


def psi(t, m):
    """The specialization functional Psi_m."""
    if m < 1:
        raise ValueError("m must be positive")
    if m % 2 == 1:
        k = (m + 1) // 2
        return (t.b_m(2 * k - 1)
                + 2 * sum((k - l) * t.b_m(2 * l - 1) for l in range(1, k)))
    k = m // 2
    mu = t.max_block() or 0
    return (sum(l * t.b_m(2 * l) for l in range(1, k))
            + k * (sum(t.b_m(2 * l - 1) for l in range(1, mu + 1))
                   + sum(t.b_m(2 * l) for l in range(k, mu + 1))))


def theta(t, m):
    """Theta_m = b_1 + b_3 + ... + b_{2m-1}."""
    return sum(t.b_m(2 * k - 1) for k in range(1, m + 1))


def _theta_inf(t):
    return sum(bm for m, bm in t.b.items() if m % 2 == 1)


def necessary(tA, tB):
    """Necessary condition for a specialization tA ~> tB: Psi_m(tA) <=
    Psi_m(tB) for all m.  All b_m vanish beyond n, so both parities of
    Psi_m are eventually affine in m with slope governed by Theta_inf;
    checking m <= 2n+2 together with the slopes is exact."""
    if tA.n != tB.n:
        raise ValueError("types must have the same dimension")
    n = tA.n
    if any(psi(tA, m) > psi(tB, m) for m in range(1, 2 * n + 3)):
        return False
    return _theta_inf(tA) <= _theta_inf(tB)


def sufficient(tA, tB):
    """Sufficient condition: the Psi inequalities of necessary() together
    with Theta_m(tA) <= Theta_m(tB) for all m."""
    if not necessary(tA, tB):
        return False
    n = tA.n
    return all(theta(tA, m) <= theta(tB, m) for m in range(1, n + 2))


# ---------------------------------------------------------------------------
# degeneration witnesses over GF(q^2)(t)


class SpecializationWitness:
    """A Gram matrix over GF(q^2)(t) whose generic fiber has one type and
    whose fiber at t = 0 has another, exhibiting a specialization."""

    __slots__ = ("family", "s", "t", "form", "claimed_generic",
                 "claimed_special", "generic_type", "special_type",
                 "verified")

    def __init__(self, family, s, t, form, claimed_generic, claimed_special):
        self.family = family
        self.s = s
        self.t = t
        self.form = form
        self.claimed_generic = claimed_generic
        self.claimed_special = claimed_special
        self.generic_type = type_of(form)
        self.special_type = type_of(special_fiber(form))
        self.verified = (self.generic_type == claimed_generic
                         and self.special_type == claimed_special)

    def __repr__(self):
        status = "ok" if self.verified else "FAILED"
        return (f"SpecializationWitness(F{self.family}, s={self.s}, "
                f"t={self.t}, {self.generic_type} ~> {self.special_type}, "
                f"{status})")


def special_fiber(form):
    """Evaluate a form over GF(q^2)(t) at t = 0."""
    K = form.field
    F = K.finite_part
    rows = [[evaluate_at_zero(form.gram[i, j]) for j in range(form.n)]
            for i in range(form.n)]
    return QBicForm(F, MatrixF(F, rows))


def _witness_gram(field, family, s, t):
    """The degeneration Gram matrix of the given family over GF(q^2)(t),
    with the field's variable t playing the uniformizer."""
    one = field.one()
    pi = field.t_gen()

    def build(n, entries):
        rows = [[field.zero() for _ in range(n)] for _ in range(n)]
        for (i, j, v) in entries:
            rows[i - 1][j - 1] = v
        return MatrixF(field, rows)

    def chain(offset, m):
        # superdiagonal of an N_m block occupying rows/cols offset+1..offset+m
        return [(offset + i, offset + i + 1, one) for i in range(1, m)]

    if family == 1:
        if s < 1:
            raise ValueError("family 1 needs s >= 1")
        n = 2 * s + 1
        entries = chain(0, 2 * s - 1) + [(2 * s - 1, 2 * s, pi),
                                         (2 * s, 2 * s + 1, one),
                                         (2 * s + 1, 2 * s, one)]
        return build(n, entries)
    if family == 2:
        if s < 1:
            raise ValueError("family 2 needs s >= 1")
        n = 2 * s
        entries = chain(0, 2 * s - 1) + [(2 * s - 1, 2 * s, pi),
                                         (2 * s, 2 * s, one)]
        return build(n, entries)
    if family == 3:
        if s < 1:
            raise ValueError("family 3 needs s >= 1")
        n = 2 * s
        entries = chain(0, 2 * s - 2) + [(2 * s - 1, 2 * s, one),
                                         (2 * s, 2 * s - 1, pi)]
        if s > 1:
            entries.append((2 * s - 2, 2 * s - 1, one))
        return build(n, entries)
    if family == 4:
        if t is None or not (s >= t >= 1):
            raise ValueError("family 4 needs s >= t >= 1")
        mid = 2 * s - 2 * t
        n = 2 * s + mid + 2
        entries = (chain(0, 2 * s) + chain(2 * s, mid)
                   + [(n - 1, n, one), (2 * s, n - 1, pi)])
        if mid:
            entries.append((2 * s + mid, n - 1, one))
        return build(n, entries)
    if family == 5:
        if t is None or s < 1 or t < 1:
            raise ValueError("family 5 needs s >= 1 and t >= 1")
        n = 4 * s + 2 * t
        entries = (chain(0, 2 * s - 1) + chain(2 * s - 1, 2 * s + 2 * t - 1)
                   + [(n - 1, n, one), (2 * s - 1, n - 1, pi),
                      (n - 2, n - 1, one)])
        return build(n, entries)
    if family == 6:
        # core move 1 + N_{2s} ~> N_{2s+1} of the composite family
        if s < 0:
            raise ValueError("family 6 needs s >= 0")
        n = 2 * s + 1
        entries = chain(0, n) + [(n, n, pi)]
        return build(n, entries)
    raise ValueError(f"unknown family {family}")


def _family_claim(family, s, t):
    """(generic type, special type) the family's Gram matrix must realize."""
    def T(a=0, **blocks):
        return TypeSignature(a, {int(k[1:]): v for k, v in blocks.items()})

    def N(*ms):
        b = {}
        for m in ms:
            if m >= 1:
                b[m] = b.get(m, 0) + 1
        return TypeSignature(0, b)

    if family == 1:
        return N(2 * s + 1), TypeSignature(2, {2 * s - 1: 1})
    if family == 2:
        return N(2 * s), TypeSignature(1, {2 * s - 1: 1})
    if family == 3:
        gen = TypeSignature(2, {2 * s - 2: 1} if s > 1 else {})
        return gen, N(2 * s)
    if family == 4:
        return (N(2 * s - 2 * t, 2 * s + 2), N(2 * s - 2 * t + 2, 2 * s))
    if family == 5:
        return (N(2 * s + 1, 2 * s + 2 * t - 1),
                N(2 * s - 1, 2 * s + 2 * t + 1))
    if family == 6:
        return TypeSignature(1, {2 * s: 1} if s else {}), N(2 * s + 1)
    raise ValueError(f"unknown family {family}")


def witness(family, s, t=None, q=2):
    """Build and verify the degeneration witness of the given family."""
    p, e = _split_prime_power(q)
    K = field_make(p, e, 2 * e, kind="rational-function")
    gram = _witness_gram(K, family, s, t)
    claimed_generic, claimed_special = _family_claim(family, s, t)
    return SpecializationWitness(family, s, t, QBicForm(K, gram),
                                 claimed_generic, claimed_special)


def _split_prime_power(q):
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            m = q
            while m % p == 0:
                m //= p
                e += 1
            if m == 1:
                return p, e
            break
    raise ValueError(f"q = {q} is not a prime power")


_F6_VERIFIED = {}


def _f6_core_ok(s, q=2):
    """Composite-family instances reduce to the move 1 + N_{2s} ~>
    N_{2s+1}; each core is backed by a degeneration witness, checked once
    per (s, q)."""
    key = (s, q)
    if key not in _F6_VERIFIED:
        w = witness(6, s, q=q)
        if not w.verified:
            log.warning("composite move 1+N_%d ~> N_%d failed witness "
                        "verification; excluded", 2 * s, 2 * s + 1)
        _F6_VERIFIED[key] = w.verified
    return _F6_VERIFIED[key]


# ---------------------------------------------------------------------------
# generator steps and reachability


def generator_step(t, verify_f6=True):
    """All types reachable from t by a single basic degeneration move.

    Returns (new type, family id, s, t-parameter) tuples; every emitted
    step satisfies the necessary predicate.  Composite family-6 instances
    are checked against a degeneration witness unless verify_f6 is False.
    """
    results = []

    def emit(new, family, s, tp):
        assert necessary(t, new), (t, new, family, s, tp)
        results.append((new, family, s, tp))

    def moved(da, removals, additions):
        b = dict(t.b)
        for m in removals:
            b[m] = b.get(m, 0) - 1
            if b[m] < 0:
                return None
        for m in additions:
            b[m] = b.get(m, 0) + 1
        if t.a + da < 0:
            return None
        return TypeSignature(t.a + da, b)

    mu = t.max_block() or 0
    n = t.n
    # F1: N_{2s+1} ~> 1^2 + N_{2s-1}
    for s in range(1, mu // 2 + 1):
        if t.b_m(2 * s + 1):
            emit(moved(2, [2 * s + 1], [2 * s - 1]), 1, s, None)
    # F2: N_{2s} ~> 1 + N_{2s-1}
    for s in range(1, mu // 2 + 1):
        if t.b_m(2 * s):
            emit(moved(1, [2 * s], [2 * s - 1]), 2, s, None)
    # F3: 1^2 + N_{2s-2} ~> N_{2s}
    if t.a >= 2:
        for s in range(1, n // 2 + 1):
            if s == 1 or t.b_m(2 * s - 2):
                new = moved(-2, [] if s == 1 else [2 * s - 2], [2 * s])
                if new is not None:
                    emit(new, 3, s, None)
    # F4: N_{2s-2t} + N_{2s+2} ~> N_{2s-2t+2} + N_{2s}
    for s in range(1, mu // 2 + 1):
        if not t.b_m(2 * s + 2):
            continue
        for tp in range(1, s + 1):
            if s == tp or t.b_m(2 * s - 2 * tp):
                removals = [2 * s + 2] if s == tp else [2 * s + 2,
                                                        2 * s - 2 * tp]
                new = moved(0, removals, [2 * s - 2 * tp + 2, 2 * s])
                if new is not None:
                    emit(new, 4, s, tp)
    # F5: N_{2s+1} + N_{2s+2t-1} ~> N_{2s-1} + N_{2s+2t+1}
    for s in range(1, mu // 2 + 1):
        if not t.b_m(2 * s + 1):
            continue
        for tp in range(1, (mu - 2 * s + 2) // 2 + 1):
            hi = 2 * s + 2 * tp - 1
            need = 2 if hi == 2 * s + 1 else 1
            if t.b_m(hi) < need or not t.b_m(2 * s + 1):
                continue
            new = moved(0, [2 * s + 1, hi], [2 * s - 1, 2 * s + 2 * tp + 1])
            if new is not None:
                emit(new, 5, s, tp)
    # F6 composite: 1^{2t-2s-1} + N_{2s} ~> N_{2t-1}; expands into F3
    # steps followed by the core move 1 + N_{2t-2} ~> N_{2t-1}
    for s in range(0, mu // 2 + 1):
        if s and not t.b_m(2 * s):
            continue
        for tp in range(s + 1, (n + 1) // 2 + 1):
            ones = 2 * tp - 2 * s - 1
            if t.a < ones:
                break
            if verify_f6:
                if not _f6_core_ok(tp - 1):
                    continue
            elif _F6_VERIFIED.get((tp - 1, 2)) is False:
                continue
            new = moved(-ones, [2 * s] if s else [], [2 * tp - 1])
            if new is not None:
                emit(new, 6, s, tp)
    return results


# ---------------------------------------------------------------------------
# the specialization poset


class StratumNode:
    __slots__ = ("t", "stratum_dim", "codim")

    def __init__(self, t):
        self.t = t
        self.codim = group_dim(t)
        self.stratum_dim = t.n * t.n - self.codim

    def __repr__(self):
        return f"StratumNode({self.t}, dim={self.stratum_dim})"


class SpecEdge:
    __slots__ = ("src", "dst", "evidence", "status", "path")

    def __init__(self, src, dst, evidence, status, path=None):
        self.src = src
        self.dst = dst
        self.evidence = evidence   # "S", "G", or "SG" for proven edges
        self.status = status       # "proven" | "unknown-candidate"
        self.path = path           # generator steps when evidence has G

    def __repr__(self):
        return (f"SpecEdge({self.src.t} ~> {self.dst.t}, "
                f"{self.evidence or '?'}, {self.status})")


class ModuliPoset:
    def __init__(self, n, nodes, edges, unknown, proven):
        self.n = n
        self.nodes = nodes
        self.edges = edges         # Hasse-reduced proven edges
        self.unknown = unknown     # unknown-candidate SpecEdges
        self.proven = proven       # full proven relation as a set of pairs

    def to_dot(self, include_unknown=False):
        lines = ["digraph qbics {", "  rankdir=LR;"]
        for node in self.nodes:
            lines.append(f'  "{node.t}" [label="{node.t}\\n'
                         f'dim {node.stratum_dim}"];')
        for edge in self.edges:
            lines.append(f'  "{edge.src.t}" -> "{edge.dst.t}" '
                         f'[label="{edge.evidence}"];')
        if include_unknown:
            for edge in self.unknown:
                lines.append(f'  "{edge.src.t}" -> "{edge.dst.t}" '
                             '[style=dashed];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self):
        data = {
            "n": self.n,
            "nodes": [{"type": str(node.t),
                       "stratum_dim": node.stratum_dim,
                       "codim": node.codim} for node in self.nodes],
            "edges": [{"from": str(edge.src.t), "to": str(edge.dst.t),
                       "evidence": edge.evidence, "status": edge.status}
                      for edge in self.edges],
            "unknown": [{"from": str(edge.src.t), "to": str(edge.dst.t),
                         "status": edge.status} for edge in self.unknown],
        }
        return json.dumps(data, indent=2, sort_keys=True) + "\n"


def generator_path(tA, tB):
    """Shortest sequence of basic moves from tA to tB, or None.  The
    search prunes states that cannot numerically specialize to tB."""
    if tA == tB:
        return []
    seen = {tA.key(): None}
    queue = deque([tA])
    while queue:
        cur = queue.popleft()
        for (new, family, s, tp) in generator_step(cur, verify_f6=False):
            keyn = new.key()
            if keyn in seen or not necessary(new, tB):
                continue
            seen[keyn] = (cur, (family, s, tp, new))
            if new == tB:
                path = []
                node = new
                while seen[node.key()] is not None:
                    prev, step = seen[node.key()]
                    path.append(step)
                    node = prev
                path.reverse()
                # composite moves rely on a verified core witness
                if all(_f6_core_ok(step[2] - 1) for step in path
                       if step[0] == 6):
                    return path
                return generator_path(tA, tB)  # rerun without the bad core
            queue.append(new)
    return None


def build_poset(n, restrict=None, cap=_POSET_CAP):
    """Nodes, proven Hasse edges, and unknown-candidate pairs for the
    specialization order in dimension n.

    The proven relation is the transitive closure of the sufficient
    predicate together with reachability under basic moves, computed over
    all types of dimension n; `restrict` then induces the sub-poset on
    the given types before Hasse reduction.
    """
    if n > cap:
        raise CostGuardError(f"poset construction guarded at n <= {cap}")
    universe = enumerate_types(n)
    index = {t.key(): i for i, t in enumerate(universe)}
    m = len(universe)

    reach = [[False] * m for _ in range(m)]
    for i, t in enumerate(universe):
        reach[i][i] = True
        for j, s in enumerate(universe):
            if i != j and sufficient(t, s):
                reach[i][j] = True
        for (new, _, _, _) in generator_step(t):
            reach[i][index[new.key()]] = True
    for k in range(m):
        rk = reach[k]
        for i in range(m):
            if reach[i][k]:
                ri = reach[i]
                for j in range(m):
                    if rk[j]:
                        ri[j] = True

    for i in range(m):
        for j in range(m):
            if i != j and reach[i][j]:
                assert not reach[j][i], "specialization order has a 2-cycle"

    if restrict is not None:
        chosen = []
        for t in restrict:
            if t.key() not in index:
                raise ValueError(f"type {t} does not have dimension {n}")
            chosen.append(t)
    else:
        chosen = universe
    nodes = [StratumNode(t) for t in chosen]
    idx = [index[t.key()] for t in chosen]

    proven = {(str(chosen[i]), str(chosen[j]))
              for i in range(len(chosen)) for j in range(len(chosen))
              if i != j and reach[idx[i]][idx[j]]}

    edges = []
    unknown = []
    for i, src in enumerate(nodes):
        for j, dst in enumerate(nodes):
            if i == j:
                continue
            if reach[idx[i]][idx[j]]:
                # Hasse reduction within the chosen node set
                if any(k != i and k != j and reach[idx[i]][idx[k]]
                       and reach[idx[k]][idx[j]] for k in range(len(nodes))):
                    continue
                assert src.stratum_dim > dst.stratum_dim
                evidence = ""
                if sufficient(src.t, dst.t):
                    evidence += "S"
                path = generator_path(src.t, dst.t)
                if path is not None:
                    evidence += "G"
                edges.append(SpecEdge(src, dst, evidence, "proven", path))
            elif necessary(src.t, dst.t):
                unknown.append(SpecEdge(src, dst, None, "unknown-candidate"))
    return ModuliPoset(n, nodes, edges, unknown, proven)


def specialize_query(tA, tB):
    """Decide whether tA specializes to tB.

    Returns ("yes", evidence), ("no", smallest violated Psi index), or
    ("unknown", None).
    """
    if tA.n != tB.n:
        raise ValueError("types must have the same dimension")
    if tA == tB:
        return ("yes", {"kind": "equal"})
    if not necessary(tA, tB):
        m = 1
        while psi(tA, m) <= psi(tB, m):
            m += 1
        return ("no", m)
    if sufficient(tA, tB):
        return ("yes", {"kind": "sufficient"})
    path = generator_path(tA, tB)
    if path is not None:
        steps = [{"family": f"F{family}", "s": s, "t": tp,
                  "result": str(new)} for (family, s, tp, new) in path]
        return ("yes", {"kind": "generator-path", "steps": steps})
    return ("unknown", None)
