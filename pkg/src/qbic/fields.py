"""Exact arithmetic in GF(p^k) and in the rational function field GF(p^k)(t).

The distinguished power q = p^e drives everything semilinear downstream:
frobenius(x, i) = x^(q^i) and its partial inverse qth_root.  Finite
descriptors require 2e | k so that the quadratic extension F_{q^2} embeds.

Elements are kept in a unique canonical form (degree-reduced polynomial in
the generator z; fractions in lowest terms with monic denominator), so
equality is plain representation equality.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache

# ---------------------------------------------------------------------------
# polynomials over the prime field GF(p), coefficient lists low-to-high


def _pp_trim(a):
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return a[:n]


def _pp_add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _pp_trim(out)


def _pp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pp_trim(out)


def _pp_mod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(_pp_trim(a)) - 1 >= dm:
        a = _pp_trim(a)
        d = len(a) - 1
        c = (a[-1] * inv_lead) % p
        for i, mi in enumerate(m):
            a[d - dm + i] = (a[d - dm + i] - c * mi) % p
        a = a[:-1]
    return _pp_trim(a)


def _pp_powmod(a, n, m, p):
    r = [1]
    a = _pp_mod(a, m, p)
    while n:
        if n & 1:
            r = _pp_mod(_pp_mul(r, a, p), m, p)
        a = _pp_mod(_pp_mul(a, a, p), m, p)
        n >>= 1
    return r


def _pp_gcd(a, b, p):
    a, b = _pp_trim(list(a)), _pp_trim(list(b))
    while b:
        a, b = b, _pp_mod(a, b, p)
    # normalize monic
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [(c * inv) % p for c in a]
    return a


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _pp_is_irreducible(f, p):
    """Rabin test for a polynomial over GF(p)."""
    f = _pp_trim(list(f))
    d = len(f) - 1
    if d < 1:
        return False
    x = [0, 1]
    xq = _pp_powmod(x, p ** d, f, p)
    if _pp_trim(_pp_add(xq, [(p - c) % p for c in x], p)):
        return False
    for ell in _prime_factors(d):
        xe = _pp_powmod(x, p ** (d // ell), f, p)
        g = _pp_gcd(_pp_add(xe, [(p - c) % p for c in x], p), f, p)
        if len(g) != 1:
            return False
    return True


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# shipped default moduli, constant term first
_DEFAULT_MODULI = {
    (2, 2): (1, 1, 1),        # z^2+z+1
    (3, 2): (1, 0, 1),        # z^2+1
    (2, 4): (1, 1, 0, 0, 1),  # z^4+z+1
}


def _default_modulus(p, k):
    got = _DEFAULT_MODULI.get((p, k))
    if got is not None:
        return got
    # deterministic search: lexicographically smallest monic irreducible,
    # low coefficients varying fastest
    for lower in itertools.product(range(p), repeat=k):
        cand = list(lower) + [1]
        if _pp_is_irreducible(cand, p):
            return tuple(cand)
    raise ValueError(f"no irreducible polynomial of degree {k} over GF({p})")


class FieldDescriptor:
    """A coefficient field: GF(p^k) or GF(p^k)(t), with q = p^e marked.

    Immutable; equality and hashing go through (p, e, k, modulus, kind).
    """

    __slots__ = ("p", "e", "k", "modulus", "kind", "q", "order",
                 "_mul_table", "_inv_table", "_base", "__weakref__")

    def __init__(self, p, e, k, modulus, kind):
        self.p = p
        self.e = e
        self.k = k
        self.modulus = tuple(modulus)
        self.kind = kind
        self.q = p ** e
        self.order = p ** k
        self._mul_table = None
        self._inv_table = None
        self._base = None
        if kind == "finite" and self.order <= 256:
            self._build_tables()

    # -- construction helpers ------------------------------------------------

    def _build_tables(self):
        n = self.order
        mul = [[0] * n for _ in range(n)]
        for a in range(n):
            pa = self._decode(a)
            for b in range(a, n):
                c = self._encode(_pp_mod(_pp_mul(pa, self._decode(b), self.p),
                                         list(self.modulus), self.p))
                mul[a][b] = c
                mul[b][a] = c
        inv = [0] * n
        for a in range(1, n):
            for b in range(1, n):
                if mul[a][b] == 1:
                    inv[a] = b
                    break
        self._mul_table = mul
        self._inv_table = inv

    def _decode(self, v):
        p = self.p
        out = []
        while v:
            out.append(v % p)
            v //= p
        return out

    def _encode(self, coeffs):
        v = 0
        for c in reversed(_pp_trim(list(coeffs))):
            v = v * self.p + c
        return v

    # -- identity ------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, FieldDescriptor)
                and (self.p, self.e, self.k, self.modulus, self.kind)
                == (other.p, other.e, other.k, other.modulus, other.kind))

    def __hash__(self):
        return hash((self.p, self.e, self.k, self.modulus, self.kind))

    def __repr__(self):
        return f"FieldDescriptor({self.spec_string()!r})"

    def spec_string(self):
        tail = "(t)" if self.kind == "rational-function" else ""
        mod = ",".join(str(c) for c in self.modulus)
        return f"{self.p}^{self.k}{tail} q={self.q} mod=[{mod}]"

    @property
    def finite_part(self):
        """The underlying finite field GF(p^k) descriptor."""
        if self.kind == "finite":
            return self
        if self._base is None:
            self._base = field_make(self.p, self.e, self.k, self.modulus,
                                    "finite")
        return self._base

    # -- scalar arithmetic on int encodings (finite part) --------------------

    def _fadd(self, a, b):
        p = self.p
        if p == 2:
            return a ^ b
        return self._encode(_pp_add(self._decode(a), self._decode(b), p))

    def _fneg(self, a):
        p = self.p
        if p == 2:
            return a
        return self._encode([(p - c) % p for c in self._decode(a)])

    def _fmul(self, a, b):
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._encode(_pp_mod(_pp_mul(self._decode(a), self._decode(b),
                                            self.p),
                                    list(self.modulus), self.p))

    def _finv(self, a):
        if a == 0:
            raise ZeroDivisionError("inversion of zero field element")
        if self._inv_table is not None:
            return self._inv_table[a]
        return self._fpow(a, self.order - 2)

    def _fpow(self, a, n):
        if a == 0:
            return 0 if n else 1
        n %= self.order - 1
        r = 1
        while n:
            if n & 1:
                r = self._fmul(r, a)
            a = self._fmul(a, a)
            n >>= 1
        return r

    # -- element constructors ------------------------------------------------

    def _make(self, val):
        return FieldElement(self, val)

    def _wrap_fin(self, v):
        if self.kind == "finite":
            return self._make(v)
        return self._make(((v,) if v else (), (1,)))

    def zero(self):
        return self._wrap_fin(0)

    def one(self):
        return self._wrap_fin(1)

    def from_int(self, n):
        return self._wrap_fin(n % self.p)

    def gen(self):
        """The generator z of GF(p^k) over GF(p)."""
        if self.k == 1:
            raise ValueError("prime field has no generator z")
        return self._wrap_fin(self.p)

    def t_gen(self):
        if self.kind != "rational-function":
            raise ValueError("t exists only in a rational function field")
        return self._make(((0, 1), (1,)))

    def elements(self):
        """All elements, finite fields only."""
        if self.kind != "finite":
            raise ValueError("cannot enumerate a rational function field")
        for v in range(self.order):
            yield self._make(v)

    def random_element(self, rng, degree=1):
        """Random element; for rational function fields a random fraction
        with numerator and denominator degrees at most `degree`."""
        if self.kind == "finite":
            return self._make(rng.randrange(self.order))
        num = [rng.randrange(self.order) for _ in range(degree + 1)]
        while True:
            den = [rng.randrange(self.order) for _ in range(degree + 1)]
            if any(den):
                break
        return self._make(_rf_reduce(self, num, den))

    def parse(self, text):
        return _parse_element(self, text)

    # polynomial-over-finite-part helpers used by the fraction representation
    # live at module level (_poly_* / _rf_*)


def field_make(p, e, k, modulus=None, kind="finite"):
    """Build a validated field descriptor.

    q = p^e; requires 2e | k so the field contains F_{q^2}.  When the
    modulus is omitted a fixed table of defaults is used for small (p, k),
    otherwise the lexicographically smallest monic irreducible is chosen.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if e < 1 or k < 1:
        raise ValueError("e and k must be positive")
    if k % (2 * e) != 0:
        raise ValueError(f"2e = {2 * e} does not divide k = {k}")
    if kind not in ("finite", "rational-function"):
        raise ValueError(f"unknown field kind {kind!r}")
    if modulus is None:
        modulus = _default_modulus(p, k)
    else:
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] == 0:
            raise ValueError("modulus must have degree k")
        if not _pp_is_irreducible(list(modulus), p):
            raise ValueError("modulus is reducible")
    return FieldDescriptor(p, e, k, modulus, kind)


# ---------------------------------------------------------------------------
# polynomials in t over the finite part, coefficients = int encodings


def _poly_trim(a):
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return tuple(a[:n])


def _poly_add(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F._fadd(out[i], c)
    return _poly_trim(out)


def _poly_neg(F, a):
    return tuple(F._fneg(c) for c in a)


def _poly_mul(F, a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = F._fadd(out[i + j], F._fmul(ai, bj))
    return _poly_trim(out)


def _poly_divmod(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    inv_lead = F._finv(b[-1])
    while len(a) >= len(b):
        while a and a[-1] == 0:
            a.pop()
        if len(a) < len(b):
            break
        c = F._fmul(a[-1], inv_lead)
        sh = len(a) - len(b)
        q[sh] = c
        for i, bi in enumerate(b):
            a[sh + i] = F._fadd(a[sh + i], F._fneg(F._fmul(c, bi)))
        a.pop()
    return _poly_trim(q), _poly_trim(a)


def _poly_gcd(F, a, b):
    a, b = _poly_trim(a), _poly_trim(b)
    while b:
        a, b = b, _poly_divmod(F, a, b)[1]
    if a:
        inv = F._finv(a[-1])
        a = tuple(F._fmul(c, inv) for c in a)
    return a


def _rf_reduce(F, num, den):
    """Canonical form of a fraction: lowest terms, monic denominator."""
    num, den = _poly_trim(num), _poly_trim(den)
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return ((), (1,))
    g = _poly_gcd(F, num, den)
    if len(g) > 1:
        num = _poly_divmod(F, num, g)[0]
        den = _poly_divmod(F, den, g)[0]
    inv_lead = F._finv(den[-1])
    if den[-1] != 1:
        num = tuple(F._fmul(c, inv_lead) for c in num)
        den = tuple(F._fmul(c, inv_lead) for c in den)
    return (num, den)


class FieldElement:
    """An element of a FieldDescriptor, held in canonical form.

    Finite fields store the polynomial in z as a base-p integer encoding;
    rational function fields store a reduced (numerator, denominator) pair
    of coefficient tuples.  Immutable and hashable.
    """

    __slots__ = ("field", "val")

    def __init__(self, field, val):
        self.field = field
        self.val = val

    # -- helpers -------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("field mismatch")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def is_zero(self):
        if self.field.kind == "finite":
            return self.val == 0
        return not self.val[0]

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        F = self.field
        if F.kind == "finite":
            return F._make(F._fadd(self.val, other.val))
        (n1, d1), (n2, d2) = self.val, other.val
        FB = F.finite_part
        num = _poly_add(FB, _poly_mul(FB, n1, d2), _poly_mul(FB, n2, d1))
        return F._make(_rf_reduce(FB, num, _poly_mul(FB, d1, d2)))

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        if F.kind == "finite":
            return F._make(F._fneg(self.val))
        n, d = self.val
        return F._make((_poly_neg(F.finite_part, n), d))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        F = self.field
        if F.kind == "finite":
            return F._make(F._fmul(self.val, other.val))
        (n1, d1), (n2, d2) = self.val, other.val
        FB = F.finite_part
        return F._make(_rf_reduce(FB, _poly_mul(FB, n1, n2),
                                  _poly_mul(FB, d1, d2)))

    __rmul__ = __mul__

    def inverse(self):
        F = self.field
        if F.kind == "finite":
            return F._make(F._finv(self.val))
        n, d = self.val
        if not n:
            raise ZeroDivisionError("inversion of zero field element")
        return F._make(_rf_reduce(F.finite_part, d, n))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        r = self.field.one()
        a = self
        while n:
            if n & 1:
                r = r * a
            a = a * a
            n >>= 1
        return r

    # -- identity ------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        return (isinstance(other, FieldElement)
                and self.field == other.field and self.val == other.val)

    def __hash__(self):
        return hash((self.field, self.val))

    def __repr__(self):
        return f"<{self}>"

    def __str__(self):
        if self.field.kind == "finite":
            return _fin_str(self.field, self.val)
        return _rf_str(self.field, self.val)

    def __bool__(self):
        return not self.is_zero()


# ---------------------------------------------------------------------------
# Frobenius and q-th roots


def frobenius(x, i):
    """x ** (q ** i), the i-fold q-power Frobenius."""
    F = x.field
    if i == 0:
        return x
    if F.kind == "finite":
        return F._make(F._fpow(x.val, F.q ** i))
    FB = F.finite_part
    qi = F.q ** i

    def tw(poly):
        out = [0] * ((len(poly) - 1) * qi + 1) if poly else []
        for j, c in enumerate(poly):
            if c:
                out[j * qi] = FB._fpow(c, qi)
        return _poly_trim(out)

    n, d = x.val
    return F._make((tw(n), tw(d)))


def qth_root(x):
    """The y with y^q = x, or None if x is not a q-th power.

    Over the finite part the Frobenius is an automorphism, so the root
    always exists: y = x^(p^(k-e)).  Over GF(p^k)(t) the root exists iff
    every exponent of t appearing in the reduced fraction is divisible by q.
    """
    F = x.field
    if F.kind == "finite":
        return F._make(F._fpow(x.val, F.p ** (F.k - F.e)))
    FB = F.finite_part
    q = F.q
    root_exp = FB.p ** (FB.k - FB.e)

    def rt(poly):
        out = [0] * ((len(poly) - 1) // q + 1) if poly else []
        for j, c in enumerate(poly):
            if c:
                if j % q != 0:
                    return None
                out[j // q] = FB._fpow(c, root_exp)
        return _poly_trim(out)

    n, d = x.val
    rn = rt(n)
    if rn is None:
        return None
    rd = rt(d)
    if rd is None:
        return None
    return F._make((rn, rd))


def evaluate_at_zero(x):
    """Substitute t = 0 in a rational function field element.

    Returns an element of the finite part; errors if the denominator
    vanishes at t = 0.
    """
    F = x.field
    if F.kind == "finite":
        return x
    n, d = x.val
    d0 = d[0] if d else 0
    if d0 == 0:
        raise ZeroDivisionError("denominator vanishes at t = 0")
    FB = F.finite_part
    n0 = n[0] if n else 0
    return FB._make(FB._fmul(n0, FB._finv(d0)))


def lift_constant(x, rational_field):
    """Embed a finite field element as a constant of GF(p^k)(t)."""
    if rational_field.finite_part != x.field:
        raise ValueError("field mismatch")
    return rational_field._make(((x.val,) if x.val else (), (1,)))


# ---------------------------------------------------------------------------
# printing


def _fin_str(F, v):
    if v == 0:
        return "0"
    digits = F._decode(v)
    terms = []
    for i in range(len(digits) - 1, -1, -1):
        c = digits[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            var = "z" if i == 1 else f"z^{i}"
            terms.append(var if c == 1 else f"{c}*{var}")
    return "+".join(terms)


def _tpoly_terms(F, poly):
    FB = F.finite_part
    terms = []
    for i in range(len(poly) - 1, -1, -1):
        c = poly[i]
        if not c:
            continue
        cs = _fin_str(FB, c)
        if i == 0:
            terms.append(cs)
            continue
        var = "t" if i == 1 else f"t^{i}"
        if c == 1:
            terms.append(var)
        else:
            if "+" in cs:
                cs = f"({cs})"
            terms.append(f"{cs}*{var}")
    return terms


def _rf_str(F, val):
    num, den = val
    if not num:
        return "0"
    nterms = _tpoly_terms(F, num)
    ns = "+".join(nterms)
    if den == (1,):
        return ns
    if len(nterms) > 1 or ("+" in ns and not ns.startswith("(")):
        ns = f"({ns})"
    dterms = _tpoly_terms(F, den)
    ds = "+".join(dterms)
    if len(dterms) > 1 or "*" in ds:
        ds = f"({ds})"
    return f"{ns}/{ds}"


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\s*(\d+|[zt()+\-*/^])")


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError(
                    f"bad element literal at position {pos}: {text[pos:]!r}")
            break
        out.append(m.group(1))
        pos = m.end()
    return out


class _ElementParser:
    def __init__(self, field, tokens):
        self.field = field
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expr(self):
        if self.peek() == "-":
            self.take()
            v = -self.term()
        else:
            v = self.term()
        while self.peek() in ("+", "-"):
            if self.take() == "+":
                v = v + self.term()
            else:
                v = v - self.term()
        return v

    def term(self):
        v = self.factor()
        while self.peek() in ("*", "/"):
            if self.take() == "*":
                v = v * self.factor()
            else:
                v = v / self.factor()
        return v

    def factor(self):
        v = self.atom()
        while self.peek() == "^":
            self.take()
            t = self.take()
            if t is None or not t.isdigit():
                raise ValueError("expected integer exponent after '^'")
            v = v ** int(t)
        return v

    def atom(self):
        t = self.take()
        if t is None:
            raise ValueError("unexpected end of element literal")
        if t.isdigit():
            return self.field.from_int(int(t))
        if t == "z":
            return self.field.gen() if self.field.k > 1 else \
                self._fail("z used in a prime field")
        if t == "t":
            return self.field.t_gen()
        if t == "(":
            v = self.expr()
            if self.take() != ")":
                raise ValueError("unbalanced parentheses in element literal")
            return v
        raise ValueError(f"unexpected token {t!r} in element literal")

    def _fail(self, msg):
        raise ValueError(msg)


def _parse_element(field, text):
    p = _ElementParser(field, _tokenize(text))
    v = p.expr()
    if p.peek() is not None:
        raise ValueError(f"trailing tokens in element literal: {p.peek()!r}")
    return v


_SPEC_RE = re.compile(
    r"^\s*(\d+)\^(\d+)(\(t\))?\s+q=(\d+)(?:\s+mod=\[([\d,\s]*)\])?\s*$")


def parse_field_spec(text):
    """Parse a field spec string like '2^2 q=2 mod=[1,1,1]' or '2^2(t) q=2'."""
    m = _SPEC_RE.match(text)
    if not m:
        raise ValueError(f"bad field spec: {text!r}")
    p, k = int(m.group(1)), int(m.group(2))
    kind = "rational-function" if m.group(3) else "finite"
    q = int(m.group(4))
    e = 0
    qq = q
    while qq > 1 and qq % p == 0:
        qq //= p
        e += 1
    if qq != 1 or e == 0:
        raise ValueError(f"q = {q} is not a positive power of p = {p}")
    modulus = None
    if m.group(5) is not None:
        modulus = tuple(int(c) for c in m.group(5).replace(" ", "").split(",")
                        if c != "")
    return field_make(p, e, k, modulus, kind)


# ---------------------------------------------------------------------------
# extensions and subfield embeddings (used by the Hermitian machinery)


class Embedding:
    """A field embedding GF(p^j) -> GF(p^k) given by the image of z."""

    __slots__ = ("src", "dst", "gen_image", "_matrix")

    def __init__(self, src, dst, gen_image):
        self.src = src
        self.dst = dst
        self.gen_image = gen_image  # int encoding in dst
        self._matrix = None

    def apply(self, x):
        if x.field != self.src:
            raise ValueError("element not in the source field")
        D = self.dst
        digits = self.src._decode(x.val)
        acc, w = 0, 1
        for c in digits:
            if c:
                acc = D._fadd(acc, D._fmul(c % D.p, w))
            w = D._fmul(w, self.gen_image)
        return D._make(acc)

    def _build_matrix(self):
        # columns: dst GF(p)-coordinates of gen_image^i, i < src.k
        D, S = self.dst, self.src
        cols = []
        w = 1
        for _ in range(S.k):
            dig = D._decode(w)
            cols.append([dig[r] if r < len(dig) else 0 for r in range(D.k)])
            w = D._fmul(w, self.gen_image)
        self._matrix = cols

    def preimage(self, y):
        """Inverse on the image subfield; None if y is not in the image."""
        if y.field != self.dst:
            raise ValueError("element not in the target field")
        if self._matrix is None:
            self._build_matrix()
        D, S = self.dst, self.src
        p = D.p
        dig = D._decode(y.val)
        target = [dig[r] if r < len(dig) else 0 for r in range(D.k)]
        sol = _solve_gfp([list(col) for col in self._matrix], target, p, D.k)
        if sol is None:
            return None
        return S._make(S._encode(sol))


def _solve_gfp(cols, target, p, nrows):
    """Solve sum x_j cols[j] = target over GF(p); None if inconsistent."""
    ncols = len(cols)
    aug = [[cols[j][r] for j in range(ncols)] + [target[r]]
           for r in range(nrows)]
    piv_of_col = [-1] * ncols
    r = 0
    for c in range(ncols):
        sel = next((i for i in range(r, nrows) if aug[i][c]), None)
        if sel is None:
            continue
        aug[r], aug[sel] = aug[sel], aug[r]
        inv = pow(aug[r][c], p - 2, p)
        aug[r] = [(v * inv) % p for v in aug[r]]
        for i in range(nrows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(a - f * b) % p for a, b in zip(aug[i], aug[r])]
        piv_of_col[c] = r
        r += 1
    for i in range(r, nrows):
        if aug[i][ncols]:
            return None
    # also rows at pivoted area could be inconsistent only past rank
    sol = [0] * ncols
    for c in range(ncols):
        if piv_of_col[c] >= 0:
            sol[c] = aug[piv_of_col[c]][ncols]
    # verify (guards free-variable cases)
    for rr in range(nrows):
        s = sum(cols[j][rr] * sol[j] for j in range(ncols)) % p
        if s != target[rr] % p:
            return None
    return sol


@lru_cache(maxsize=None)
def extension_field(base, r):
    """GF(p^(k*r)) with the same (p, e), default modulus."""
    if base.kind != "finite":
        raise ValueError("extensions are taken of finite fields only")
    return field_make(base.p, base.e, base.k * r, None, "finite")


@lru_cache(maxsize=None)
def embed(src, dst):
    """The deterministic embedding GF(p^j) -> GF(p^k) for j | k.

    Chooses the first root of the source modulus inside dst, scanning the
    subfield of order p^j in a fixed order.
    """
    if src.kind != "finite" or dst.kind != "finite":
        raise ValueError("embeddings are between finite fields only")
    if src.p != dst.p or dst.k % src.k != 0:
        raise ValueError("no embedding: degree mismatch")
    if src == dst:
        return Embedding(src, dst, src.p if src.k > 1 else 1)
    p, j, k = src.p, src.k, dst.k
    # subfield of order p^j = fixed points of Frobenius^j; compute the
    # GF(p)-kernel of (x -> x^(p^j)) - id on dst
    cols = []
    for i in range(k):
        basis_elt = dst._encode([0] * i + [1])
        img = dst._fpow(basis_elt, p ** j)
        diff = dst._fadd(img, dst._fneg(basis_elt))
        dig = dst._decode(diff)
        cols.append([dig[r] if r < len(dig) else 0 for r in range(k)])
    kernel = _gfp_kernel(cols, p, k)
    if p ** len(kernel) > 4096:
        raise ValueError("subfield too large for root search")
    mod = list(src.modulus)
    for combo in itertools.product(range(p), repeat=len(kernel)):
        acc = 0
        for c, vec in zip(combo, kernel):
            if c:
                enc = dst._encode([(c * x) % p for x in vec])
                acc = dst._fadd(acc, enc)
        # evaluate src modulus at acc
        val, w = 0, 1
        for coeff in mod:
            if coeff:
                val = dst._fadd(val, dst._fmul(coeff, w))
            w = dst._fmul(w, acc)
        if val == 0 and (j == 1 or acc != 0):
            if j == 1:
                return Embedding(src, dst, 1)
            return Embedding(src, dst, acc)
    raise ValueError("no root of the source modulus found")


def _gfp_kernel(cols, p, nrows):
    """Kernel basis of the GF(p) matrix with the given columns."""
    ncols = len(cols)
    mat = [[cols[j][r] for j in range(ncols)] for r in range(nrows)]
    pivots = {}
    r = 0
    for c in range(ncols):
        sel = next((i for i in range(r, nrows) if mat[i][c]), None)
        if sel is None:
            continue
        mat[r], mat[sel] = mat[sel], mat[r]
        inv = pow(mat[r][c], p - 2, p)
        mat[r] = [(v * inv) % p for v in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[r])]
        pivots[c] = r
        r += 1
    out = []
    for c in range(ncols):
        if c in pivots:
            continue
        vec = [0] * ncols
        vec[c] = 1
        for pc, pr in pivots.items():
            vec[pc] = (-mat[pr][c]) % p
        out.append(vec)
    return out
