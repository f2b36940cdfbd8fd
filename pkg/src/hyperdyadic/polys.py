"""Univariate polynomials over Z, Q, finite fields and truncated unramified rings.

Includes finite-field factorization (squarefree, distinct-degree and
equal-degree splitting), square roots of polynomials in characteristic 2,
multifactor Hensel lifting of coprime factorizations, and resultants /
discriminants via the Sylvester matrix.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import reduce
from math import lcm

from .errors import (NotASquare, NotAUnit, PrecisionExhausted, ProductMismatch,
                     SeedsNotCoprime)
from .rings import SATURATED, FqElem, FqField, UnramElem, UnramRing, fq_field

__all__ = [
    "ZZ", "QQ", "Poly", "fq_factor", "char2_poly_sqrt", "hensel_lift_factors",
    "poly_resultant", "poly_discriminant", "roots_in_field", "fq_embedding",
    "split_over_extension", "DEFAULT_SEED",
]

DEFAULT_SEED = 20240229


class _IntegerRing:
    zero = 0
    one = 1

    def __call__(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return x.numerator
        return int(x)

    def is_zero(self, x):
        return x == 0

    def __repr__(self):
        return "ZZ"


class _RationalField:
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x):
        return Fraction(x)

    def is_zero(self, x):
        return x == 0

    def __repr__(self):
        return "QQ"


ZZ = _IntegerRing()
QQ = _RationalField()


def _is_field(ring) -> bool:
    return isinstance(ring, FqField) or ring is QQ


def _inverse(ring, a):
    if isinstance(ring, FqField):
        return a.inverse()
    if ring is QQ:
        return 1 / a
    if isinstance(ring, UnramRing):
        return a.invert()
    if a in (1, -1):
        return a
    raise NotAUnit(f"{a} is not invertible in {ring}")


class Poly:
    """Immutable polynomial, coefficients low degree first; zero is the empty tuple."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs=()):
        cs = [ring(c) for c in coeffs]
        while cs and ring.is_zero(cs[-1]):
            cs.pop()
        self.ring = ring
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls, ring) -> Poly:
        return cls(ring, [ring.zero, ring.one])

    @classmethod
    def constant(cls, ring, c) -> Poly:
        return cls(ring, [c])

    @classmethod
    def from_roots(cls, ring, roots) -> Poly:
        out = cls(ring, [ring.one])
        for r in roots:
            out = out * cls(ring, [-r, ring.one])
        return out

    # -- basic protocol ------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.ring.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.ring.one

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.ring.zero

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if self.ring.is_zero(c):
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            cs = repr(c)
            if mono and cs == "1":
                terms.append(mono)
            elif mono:
                terms.append(f"({cs})*{mono}")
            else:
                terms.append(f"({cs})" if " " in cs else cs)
        return " + ".join(reversed(terms))

    def _wrap(self, other):
        if isinstance(other, Poly):
            return other
        return Poly(self.ring, [other])

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        other = self._wrap(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.ring, [self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._wrap(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.ring, [self[k] - other[k] for k in range(n)])

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(self.ring, [c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return Poly(self.ring, [])
        zero = self.ring.zero
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if self.ring.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = Poly(self.ring, [self.ring.one])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        inv = _inverse(self.ring, other.lc)
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(self.ring, []), self
        quo = [self.ring.zero] * (dq + 1)
        dg = other.degree
        for k in range(dq, -1, -1):
            t = rem[k + dg] * inv
            quo[k] = t
            if self.ring.is_zero(t):
                continue
            for j, b in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - t * b
        return Poly(self.ring, quo), Poly(self.ring, rem[:dg])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = self.ring.zero if not isinstance(x, Poly) else Poly(x.ring, [])
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> Poly:
        return Poly(self.ring, [c * k for k, c in enumerate(self.coeffs)][1:])

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        inv = _inverse(self.ring, self.lc)
        return Poly(self.ring, [c * inv for c in self.coeffs])

    def map(self, fn, ring) -> Poly:
        return Poly(ring, [fn(c) for c in self.coeffs])

    def shift(self, u) -> Poly:
        """f(x + u)."""
        return self(Poly(self.ring, [u, self.ring.one]))

    def reverse(self, degree: int) -> Poly:
        """x^degree * f(1/x)."""
        cs = list(self.coeffs) + [self.ring.zero] * (degree + 1 - len(self.coeffs))
        return Poly(self.ring, reversed(cs))

    def powmod(self, e: int, modulus: Poly) -> Poly:
        result = Poly(self.ring, [self.ring.one]) % modulus
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return result

    def reduce_mod_power(self, j: int) -> Poly:
        """Coefficients of a polynomial over an unramified ring reduced mod p^j."""
        return Poly(self.ring, [c.reduce_mod_power(j) for c in self.coeffs])

    def truncate(self, N: int) -> Poly:
        ring = self.ring.with_precision(N)
        return Poly(ring, [c.truncate(N) for c in self.coeffs])

    def residue(self) -> Poly:
        """Reduction mod p of a polynomial over an unramified ring."""
        return Poly(self.ring.residue_field, [c.residue() for c in self.coeffs])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    if not _is_field(a.ring):
        raise TypeError("gcd is only defined over fields here")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly):
    """(g, s, t) with s*a + t*b = g monic."""
    ring = a.ring
    r0, r1 = a, b
    s0, s1 = Poly(ring, [ring.one]), Poly(ring, [])
    t0, t1 = Poly(ring, []), Poly(ring, [ring.one])
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = _inverse(ring, r0.lc)
    return r0 * inv, s0 * inv, t0 * inv


# ---------------------------------------------------------------------------
# finite-field factorization

def _pth_root_poly(f: Poly) -> Poly:
    p = f.ring.p
    if any(not f.ring.is_zero(c) for k, c in enumerate(f.coeffs) if k % p):
        raise NotASquare("not a p-th power")
    return Poly(f.ring, [c.pth_root() for c in f.coeffs[::p]])


def _squarefree_decomposition(f: Poly):
    out = []
    one = Poly(f.ring, [f.ring.one])
    c = poly_gcd(f, f.derivative())
    w = f // c
    i = 1
    while w.degree > 0:
        y = poly_gcd(w, c)
        z = w // y
        if z.degree > 0:
            out.append((z.monic(), i))
        i += 1
        w, c = y, c // y
    if c.degree > 0:
        p = f.ring.p
        for g, m in _squarefree_decomposition(_pth_root_poly(c.monic())):
            out.append((g, m * p))
    assert c.degree > 0 or c.monic() == one
    return out


def _distinct_degree(f: Poly):
    out = []
    F = f.ring
    x = Poly.x(F)
    h = x
    d = 0
    g = f
    while g.degree >= 2 * (d + 1):
        d += 1
        h = h.powmod(F.order, g)
        common = poly_gcd(g, h - x)
        if common.degree > 0:
            out.append((common, d))
            g = g // common
            h = h % g
    if g.degree > 0:
        out.append((g.monic(), g.degree))
    return out


def _equal_degree(f: Poly, d: int, rng: random.Random):
    if f.degree == d:
        return [f]
    F = f.ring
    while True:
        a = Poly(F, [F.from_int(rng.randrange(F.order)) for _ in range(f.degree)])
        if a.degree < 1:
            continue
        if F.p == 2:
            # trace map F_{q^d} -> F_2 applied to a mod f
            t, acc = a % f, Poly(F, [])
            for _ in range(F.m * d):
                acc = acc + t
                t = (t * t) % f
            b = acc
        else:
            b = a.powmod((F.order ** d - 1) // 2, f) - Poly(F, [F.one])
        g = poly_gcd(f, b)
        if 0 < g.degree < f.degree:
            return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


def _sort_key(pm):
    g, m = pm
    return (g.degree, tuple(c.n for c in reversed(g.coeffs)), m)


def fq_factor(f: Poly, seed: int = DEFAULT_SEED):
    """Factor f over F_q: sorted list of (monic irreducible, multiplicity)."""
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if not isinstance(f.ring, FqField):
        raise TypeError("fq_factor needs a polynomial over a finite field")
    rng = random.Random(seed)
    out = []
    for g, m in _squarefree_decomposition(f.monic()):
        for h, d in _distinct_degree(g):
            for irred in _equal_degree(h, d, rng):
                out.append((irred.monic(), m))
    merged = {}
    for g, m in out:
        merged[g] = merged.get(g, 0) + m
    return sorted(merged.items(), key=_sort_key)


def roots_in_field(f: Poly, seed: int = DEFAULT_SEED):
    """Distinct roots of f lying in its coefficient field, sorted by encoding."""
    return sorted(-g.coeffs[0] for g, _ in fq_factor(f, seed) if g.degree == 1)


def char2_poly_sqrt(f: Poly) -> Poly:
    """The unique g with g^2 = f over a field of characteristic 2."""
    if not isinstance(f.ring, FqField) or f.ring.p != 2:
        raise TypeError("char2_poly_sqrt needs a polynomial over F_{2^m}")
    if any(not c.is_zero() for c in f.coeffs[1::2]):
        raise NotASquare(f"{f} has a nonzero odd-degree coefficient")
    return Poly(f.ring, [c.pth_root() for c in f.coeffs[::2]])


# ---------------------------------------------------------------------------
# embeddings between finite fields

def fq_embedding(small: FqField, big: FqField, seed: int = DEFAULT_SEED):
    """A field embedding small -> big, sending the generator to the least root."""
    if small.p != big.p or big.m % small.m:
        raise ValueError(f"{small} does not embed in {big}")
    if small == big:
        return lambda a: a
    modulus = Poly(big, [big(c) for c in small.modulus])
    image = roots_in_field(modulus, seed)[0]
    powers = [big.one]
    for _ in range(small.m - 1):
        powers.append(powers[-1] * image)

    def embed(a: FqElem) -> FqElem:
        acc = big.zero
        for c, pw in zip(a.coeffs, powers):
            if c:
                acc = acc + pw * c
        return acc

    return embed


def split_over_extension(f: Poly, seed: int = DEFAULT_SEED):
    """Embed f into its splitting field over F_{p^m}.

    Returns (big field, embedding, roots in the big field, multiplicities).
    """
    F = f.ring
    degs = [g.degree for g, _ in fq_factor(f, seed)]
    big = fq_field(F.p, F.m * reduce(lcm, degs, 1))
    emb = fq_embedding(F, big, seed)
    fb = f.map(emb, big)
    roots = []
    for g, mult in fq_factor(fb, seed):
        assert g.degree == 1
        roots.append((-g.coeffs[0], mult))
    return big, emb, roots


# ---------------------------------------------------------------------------
# Hensel lifting

def _lift_pair(f: Poly, g0: Poly, h0: Poly):
    ring = f.ring
    _, s0, t0 = poly_xgcd(g0, h0)
    g = g0.map(ring.lift, ring)
    h = h0.map(ring.lift, ring)
    s = s0.map(ring.lift, ring)
    t = t0.map(ring.lift, ring)
    k = 1
    while k < ring.N:
        k2 = min(2 * k, ring.N)
        e = (f - g * h).reduce_mod_power(k2)
        q, r = divmod(s * e, h)
        g_new = (g + t * e + q * g).reduce_mod_power(k2)
        h_new = (h + r).reduce_mod_power(k2)
        b = (s * g_new + t * h_new - 1).reduce_mod_power(k2)
        c, d = divmod(s * b, h_new)
        s = (s - d).reduce_mod_power(k2)
        t = (t - t * b - c * g_new).reduce_mod_power(k2)
        g, h = g_new, h_new
        k = k2
    assert g.is_monic() and h.is_monic()
    return g, h


def _lift_tree(f: Poly, seeds):
    if len(seeds) == 1:
        return [f]
    mid = len(seeds) // 2
    left, right = seeds[:mid], seeds[mid:]
    g0 = reduce(lambda a, b: a * b, left)
    h0 = reduce(lambda a, b: a * b, right)
    g, h = _lift_pair(f, g0, h0)
    return _lift_tree(g, left) + _lift_tree(h, right)


def hensel_lift_factors(f: Poly, seeds) -> list:
    """Lift a coprime factorization of f mod p to monic factors mod p^N.

    f is a monic polynomial over an UnramRing; seeds are monic polynomials over
    its residue field, pairwise coprime, with product f mod p.
    """
    ring = f.ring
    if not isinstance(ring, UnramRing):
        raise TypeError("hensel_lift_factors needs a polynomial over an UnramRing")
    if not f.is_monic():
        raise ValueError("f must be monic")
    seeds = [s.monic() for s in seeds]
    for i in range(len(seeds)):
        for j in range(i + 1, len(seeds)):
            if poly_gcd(seeds[i], seeds[j]).degree > 0:
                raise SeedsNotCoprime(f"seeds {i} and {j} share a factor")
    prod = reduce(lambda a, b: a * b, seeds, Poly(ring.residue_field, [1]))
    if prod != f.residue():
        raise ProductMismatch("product of seeds differs from f mod p")
    return _lift_tree(f, seeds)


# ---------------------------------------------------------------------------
# resultants and discriminants

def _sylvester(f: Poly, g: Poly):
    m, n = f.degree, g.degree
    zero = f.ring.zero
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for k, c in enumerate(reversed(f.coeffs)):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k, c in enumerate(reversed(g.coeffs)):
            row[i + k] = c
        rows.append(row)
    return rows


def _det_bareiss(rows):
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _det_field(rows, ring):
    a = [list(r) for r in rows]
    n = len(a)
    det = ring.one
    for k in range(n):
        piv = next((i for i in range(k, n) if not ring.is_zero(a[i][k])), None)
        if piv is None:
            return ring.zero
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det = det * a[k][k]
        inv = _inverse(ring, a[k][k])
        for i in range(k + 1, n):
            if ring.is_zero(a[i][k]):
                continue
            t = a[i][k] * inv
            for j in range(k, n):
                a[i][j] = a[i][j] - t * a[k][j]
    return det


def _det_unram(rows, ring: UnramRing):
    """Determinant over Z_p^nr / p^N with minimal-valuation pivoting.

    The result is returned in a ring of reduced precision reflecting the
    digits consumed by the pivots.
    """
    p = ring.p
    a = [list(r) for r in rows]
    n = len(a)
    prec = ring.N
    det = ring.one
    for k in range(n):
        best, best_v = None, None
        for i in range(k, n):
            x = a[i][k].reduce_mod_power(prec)
            v = x.valuation()
            if v is SATURATED:
                continue
            if best is None or v.num < best_v:
                best, best_v = i, v.num
        if best is None or best_v >= prec:
            raise PrecisionExhausted("determinant pivot vanishes at working precision")
        if best != k:
            a[k], a[best] = a[best], a[k]
            det = -det
        piv = a[k][k]
        det = det * piv
        unit_inv = piv.div_p_power(best_v).invert()
        for i in range(k + 1, n):
            x = a[i][k]
            if x.reduce_mod_power(prec).is_zero():
                continue
            ratio = x.reduce_mod_power(prec)
            # ratio = x / piv = (x / p^v) * (piv / p^v)^(-1), known mod p^(prec - v)
            q = ratio.div_p_power(best_v) * unit_inv.truncate(ring.N - best_v)
            q = UnramElem(ring, q.c)
            for j in range(k, n):
                a[i][j] = a[i][j] - q * a[k][j]
        prec -= best_v
    if prec < 1:
        raise PrecisionExhausted("no digits of the determinant survive")
    return det.truncate(prec)


def _det(rows, ring):
    if ring is ZZ:
        return _det_bareiss(rows)
    if isinstance(ring, UnramRing):
        return _det_unram(rows, ring)
    return _det_field(rows, ring)


def poly_resultant(f: Poly, g: Poly):
    """Res(f, g) = lc(f)^deg(g) * prod g(root of f), via the Sylvester determinant."""
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of the zero polynomial")
    if f.degree == 0:
        return f.lc ** g.degree
    if g.degree == 0:
        return g.lc ** f.degree
    return _det(_sylvester(f, g), f.ring)


def poly_discriminant(f: Poly):
    """disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f)."""
    n = f.degree
    if n < 1:
        raise ValueError("discriminant of a constant")
    res = poly_resultant(f, f.derivative())
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    if f.ring is ZZ:
        q, r = divmod(sign * res, f.lc)
        assert r == 0
        return q
    if isinstance(f.ring, UnramRing):
        lc_inv = f.lc.invert().truncate(res.ring.N)
        return res * lc_inv * sign
    return res * _inverse(f.ring, f.lc) * sign
