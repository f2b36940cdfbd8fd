"""Exact arithmetic in finite fields F_{p^m} and in truncated unramified extensions of Z_p.

Finite field elements are stored as integers encoding their power-basis
coefficients in base p (for p = 2 this is a bitmask).  Unramified ring
elements are coefficient tuples reduced mod p^N in the power basis of the
lift of the residue field's defining polynomial.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotAUnit, PrecisionExhausted, PrecisionMismatch

__all__ = [
    "Val", "SATURATED", "Saturated", "FqField", "FqElem", "fq_field",
    "fq_trace", "fq_frobenius_orbit", "UnramRing", "UnramElem",
    "unram_valuation", "unram_frobenius", "unram_invert", "int_valuation",
]


# ---------------------------------------------------------------------------
# valuations

@functools.total_ordering
@dataclass(frozen=True)
class Val:
    """A valuation in (1/2)Z or +infinity."""

    num: int = 0
    den: int = 1
    finite: bool = True

    def __post_init__(self):
        if not self.finite:
            object.__setattr__(self, "num", 0)
            object.__setattr__(self, "den", 1)
            return
        if self.den not in (1, 2):
            raise ValueError(f"valuation denominator must be 1 or 2, got {self.den}")
        if self.den == 2 and self.num % 2 == 0:
            object.__setattr__(self, "num", self.num // 2)
            object.__setattr__(self, "den", 1)

    @classmethod
    def infinity(cls) -> Val:
        return cls(0, 1, False)

    @classmethod
    def of(cls, x) -> Val:
        if isinstance(x, Val):
            return x
        x = Fraction(x)
        return cls(x.numerator, x.denominator)

    def as_fraction(self) -> Fraction:
        if not self.finite:
            raise ValueError("infinite valuation has no rational value")
        return Fraction(self.num, self.den)

    def __add__(self, other):
        other = Val.of(other)
        if not (self.finite and other.finite):
            return Val.infinity()
        return Val.of(self.as_fraction() + other.as_fraction())

    __radd__ = __add__

    def __sub__(self, other):
        other = Val.of(other)
        if not other.finite:
            raise ValueError("cannot subtract an infinite valuation")
        if not self.finite:
            return self
        return Val.of(self.as_fraction() - other.as_fraction())

    def __lt__(self, other):
        other = Val.of(other)
        if not self.finite:
            return False
        if not other.finite:
            return True
        return self.as_fraction() < other.as_fraction()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Val.of(other)
        if not isinstance(other, Val):
            return NotImplemented
        return (self.finite, self.num, self.den) == (other.finite, other.num, other.den)

    def __hash__(self):
        return hash((self.finite, self.num, self.den))

    def __str__(self):
        if not self.finite:
            return "+inf"
        return str(self.num) if self.den == 1 else f"{self.num}/{self.den}"

    def __repr__(self):
        return f"Val({self})"

    def to_json(self) -> dict:
        if not self.finite:
            return {"inf": True}
        return {"num": self.num, "den": self.den}

    @classmethod
    def from_json(cls, d: dict) -> Val:
        if d.get("inf"):
            return cls.infinity()
        return cls(int(d["num"]), int(d["den"]))


class Saturated:
    """Valuation marker: every coefficient vanishes at the working precision."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "SATURATED"

    def __reduce__(self):
        return (Saturated, ())


SATURATED = Saturated()


def int_valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# prime-field polynomial helpers (lists of ints, low degree first)

def _pl_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pl_mod(a, f, p):
    a = [x % p for x in a]
    _pl_trim(a)
    df = len(f) - 1
    inv = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        t = a[-1] * inv % p
        shift = len(a) - 1 - df
        for k, fk in enumerate(f):
            a[shift + k] = (a[shift + k] - t * fk) % p
        _pl_trim(a)
    return a


def _pl_mulmod(a, b, f, p):
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _pl_mod(prod, f, p)


def _pl_powmod(a, e, f, p):
    result = [1]
    base = _pl_mod(list(a), f, p)
    while e:
        if e & 1:
            result = _pl_mulmod(result, base, f, p)
        base = _pl_mulmod(base, base, f, p)
        e >>= 1
    return result


def _pl_gcd(a, b, p):
    a = _pl_trim([x % p for x in a])
    b = _pl_trim([x % p for x in b])
    while b:
        a, b = b, _pl_mod(a, b, p)
    return a


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible_mod_p(f, p) -> bool:
    # Rabin's test
    m = len(f) - 1
    if m < 1 or f[-1] % p == 0:
        return False
    if m == 1:
        return True

    def x_pow_p_k(k):
        h = [0, 1]
        for _ in range(k):
            h = _pl_powmod(h, p, f, p)
        return h

    h = x_pow_p_k(m)
    if _pl_trim([(a - b) % p for a, b in itertools.zip_longest(h, [0, 1], fillvalue=0)]):
        return False
    for r in _prime_factors(m):
        h = x_pow_p_k(m // r)
        diff = _pl_trim([(a - b) % p for a, b in itertools.zip_longest(h, [0, 1], fillvalue=0)])
        if len(_pl_gcd(f, diff, p)) != 1:
            return False
    return True


@functools.cache
def smallest_irreducible(p: int, m: int) -> tuple:
    """Lexicographically smallest monic irreducible of degree m over F_p.

    Coefficient tuples are compared low degree first.
    """
    if m == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=m):
        if low[0] == 0:
            continue
        f = list(low) + [1]
        if _is_irreducible_mod_p(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# ---------------------------------------------------------------------------
# finite fields

class FqField:
    """The field F_p[t]/(modulus) with modulus monic irreducible of degree m."""

    def __init__(self, p: int, m: int, modulus=None):
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        if modulus is None:
            modulus = smallest_irreducible(p, m)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree m")
        if not _is_irreducible_mod_p(list(modulus), p):
            raise ValueError(f"{modulus} is reducible mod {p}")
        self.p = p
        self.m = m
        self.modulus = modulus
        self.order = p ** m
        self._mask = sum(c << k for k, c in enumerate(modulus)) if p == 2 else None
        self.zero = FqElem(self, 0)
        self.one = FqElem(self, 1)
        self.gen = FqElem(self, p % self.order if m > 1 else 0)

    def __repr__(self):
        return f"FqField({self.p}, {self.m})"

    def __eq__(self, other):
        return isinstance(other, FqField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash(("Fq", self.p, self.modulus))

    def __reduce__(self):
        return (FqField, (self.p, self.m, self.modulus))

    @property
    def characteristic(self) -> int:
        return self.p

    def __call__(self, x) -> FqElem:
        if isinstance(x, FqElem):
            if x.field != self:
                raise PrecisionMismatch(f"element of {x.field} used in {self}")
            return x
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError("denominator divisible by p")
            x = x.numerator * pow(x.denominator, -1, self.p)
        return FqElem(self, int(x) % self.p)

    def from_coeffs(self, coeffs) -> FqElem:
        coeffs = list(coeffs)
        if len(coeffs) > self.m:
            raise ValueError("too many coefficients")
        return FqElem(self, sum((int(c) % self.p) * self.p ** k for k, c in enumerate(coeffs)))

    def from_int(self, n: int) -> FqElem:
        if not 0 <= n < self.order:
            raise ValueError("encoding out of range")
        return FqElem(self, n)

    def elements(self):
        return (FqElem(self, n) for n in range(self.order))

    def is_zero(self, x) -> bool:
        return x.n == 0

    # raw integer-encoded arithmetic
    def _digits(self, n):
        p = self.p
        out = []
        for _ in range(self.m):
            n, r = divmod(n, p)
            out.append(r)
        return out

    def _undigits(self, ds):
        n = 0
        for d in reversed(ds):
            n = n * self.p + d
        return n

    def _add(self, a, b):
        if self.p == 2:
            return a ^ b
        p = self.p
        return self._undigits([(x + y) % p for x, y in zip(self._digits(a), self._digits(b))])

    def _neg(self, a):
        if self.p == 2:
            return a
        p = self.p
        return self._undigits([(-x) % p for x in self._digits(a)])

    def _mul(self, a, b):
        if self.p == 2:
            m, mask = self.m, self._mask
            top = 1 << m
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if a & top:
                    a ^= mask
            return r
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return self._undigits(_pl_mod(prod, list(self.modulus), self.p) + [0] * self.m)


class FqElem:
    __slots__ = ("field", "n")

    def __init__(self, field: FqField, n: int):
        self.field = field
        self.n = n

    def _other(self, other):
        if isinstance(other, FqElem):
            if other.field is not self.field and other.field != self.field:
                raise PrecisionMismatch(f"cannot combine {self.field} and {other.field}")
            return other.n
        if isinstance(other, int):
            return other % self.field.p
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FqElem(self.field, self.field._add(self.n, o))

    __radd__ = __add__

    def __neg__(self):
        return FqElem(self.field, self.field._neg(self.n))

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FqElem(self.field, self.field._add(self.n, self.field._neg(o)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FqElem(self.field, self.field._mul(self.n, o))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        f = self.field
        result, base = 1, self.n
        while e:
            if e & 1:
                result = f._mul(result, base)
            base = f._mul(base, base)
            e >>= 1
        return FqElem(f, result)

    def inverse(self) -> FqElem:
        if self.n == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.field(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.field(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, FqElem):
            return self.n == other.n and self.field == other.field
        if isinstance(other, int):
            return self.n == other % self.field.p and self.n < self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.modulus, self.n))

    def __lt__(self, other):
        return self.n < other.n

    def __bool__(self):
        return self.n != 0

    def is_zero(self) -> bool:
        return self.n == 0

    @property
    def coeffs(self) -> tuple:
        return tuple(self.field._digits(self.n))

    def frobenius(self, k: int = 1) -> FqElem:
        """x -> x^(p^k)."""
        return self ** (self.field.p ** (k % self.field.m))

    def pth_root(self) -> FqElem:
        """Inverse of the absolute Frobenius (square root when p = 2)."""
        return self ** (self.field.p ** (self.field.m - 1))

    def in_subfield(self, degree: int) -> bool:
        return self.frobenius(degree) == self

    def __repr__(self):
        if self.field.m == 1:
            return f"{self.n}"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                mono = "" if k == 0 else ("w" if k == 1 else f"w^{k}")
                terms.append(f"{c}" if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(reversed(terms)) or "0"


@functools.cache
def fq_field(p: int, m: int) -> FqField:
    """The canonical F_{p^m} used throughout (lexicographically minimal modulus)."""
    return FqField(p, m)


def fq_trace(x: FqElem, degree: int | None = None) -> FqElem:
    """Absolute trace to F_p of x, viewed as an element of F_{p^degree}.

    ``degree`` defaults to the degree of x's field; x must lie in the subfield.
    """
    f = x.field
    if degree is None:
        degree = f.m
    if f.m % degree or not x.in_subfield(degree):
        raise ValueError(f"{x!r} does not lie in a subfield of degree {degree}")
    total, y = f.zero, x
    for _ in range(degree):
        total = total + y
        y = y ** f.p
    assert total.n < f.p
    return fq_field(f.p, 1)(total.n)


def fq_frobenius_orbit(x: FqElem, q: int) -> list:
    """[x, x^q, x^(q^2), ...] up to the first repetition."""
    orbit = [x]
    y = x ** q
    while y != x:
        orbit.append(y)
        y = y ** q
    return orbit


# ---------------------------------------------------------------------------
# truncated unramified rings

@dataclass(frozen=True)
class UnramRing:
    """W(F_{p^M}) / p^N: the unramified extension of Z_p of degree M, truncated."""

    p: int
    M: int
    N: int

    def __post_init__(self):
        if self.M < 1 or self.N < 1:
            raise ValueError("degree and precision must be >= 1")

    @property
    def residue_field(self) -> FqField:
        return fq_field(self.p, self.M)

    @property
    def lift_poly(self) -> tuple:
        return self.residue_field.modulus

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    @property
    def zero(self) -> UnramElem:
        return UnramElem(self, (0,) * self.M)

    @property
    def one(self) -> UnramElem:
        return UnramElem(self, (1,) + (0,) * (self.M - 1))

    @property
    def gen(self) -> UnramElem:
        if self.M == 1:
            raise ValueError("Z_p has no power-basis generator")
        return UnramElem(self, (0, 1) + (0,) * (self.M - 2))

    def with_precision(self, N: int) -> UnramRing:
        return UnramRing(self.p, self.M, N)

    def __call__(self, x) -> UnramElem:
        if isinstance(x, UnramElem):
            if x.ring != self:
                raise PrecisionMismatch(f"element of {x.ring} used in {self}")
            return x
        if isinstance(x, FqElem):
            return self.lift(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise NotAUnit(f"{x} is not p-integral")
            x = x.numerator * pow(x.denominator, -1, self.modulus)
        return UnramElem(self, (int(x),) + (0,) * (self.M - 1))

    def element(self, coeffs) -> UnramElem:
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) > self.M:
            raise ValueError("too many coefficients")
        return UnramElem(self, tuple(coeffs) + (0,) * (self.M - len(coeffs)))

    def lift(self, a: FqElem) -> UnramElem:
        """Digit-wise lift of a residue element (not the Teichmueller lift)."""
        if a.field != self.residue_field:
            raise PrecisionMismatch(f"{a.field} is not the residue field of {self}")
        return UnramElem(self, a.coeffs)

    def is_zero(self, x) -> bool:
        return x.is_zero()


class UnramElem:
    __slots__ = ("ring", "c")

    def __init__(self, ring: UnramRing, coeffs):
        mod = ring.modulus
        self.ring = ring
        self.c = tuple(int(x) % mod for x in coeffs)

    @classmethod
    def _raw(cls, ring, coeffs):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.c = coeffs
        return obj

    def _other(self, other):
        if isinstance(other, UnramElem):
            if other.ring != self.ring:
                raise PrecisionMismatch(f"cannot combine {self.ring} and {other.ring}")
            return other.c
        if isinstance(other, int):
            return (other % self.ring.modulus,) + (0,) * (self.ring.M - 1)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        mod = self.ring.modulus
        return UnramElem._raw(self.ring, tuple((a + b) % mod for a, b in zip(self.c, o)))

    __radd__ = __add__

    def __neg__(self):
        mod = self.ring.modulus
        return UnramElem._raw(self.ring, tuple((-a) % mod for a in self.c))

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        mod = self.ring.modulus
        return UnramElem._raw(self.ring, tuple((a - b) % mod for a, b in zip(self.c, o)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return UnramElem._raw(self.ring, _ring_mul(self.ring, self.c, o))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.invert() ** (-e)
        result = self.ring.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring(other)
        if not isinstance(other, UnramElem):
            return NotImplemented
        return self.ring == other.ring and self.c == other.c

    def __hash__(self):
        return hash((self.ring, self.c))

    def __repr__(self):
        if self.ring.M == 1:
            return f"{self.c[0]} (mod {self.ring.p}^{self.ring.N})"
        return f"{list(self.c)} (mod {self.ring.p}^{self.ring.N})"

    def is_zero(self) -> bool:
        return not any(self.c)

    def valuation(self):
        """Exact valuation (a Val) if below the precision, else SATURATED."""
        if self.is_zero():
            return SATURATED
        p = self.ring.p
        return Val(min(int_valuation(a, p) for a in self.c if a))

    def is_unit(self) -> bool:
        return any(a % self.ring.p for a in self.c)

    def residue(self) -> FqElem:
        return self.ring.residue_field.from_coeffs([a % self.ring.p for a in self.c])

    def invert(self) -> UnramElem:
        if not self.is_unit():
            raise NotAUnit(f"{self!r} is not a unit")
        y = self.ring.lift(self.residue().inverse())
        # Newton iteration y <- y(2 - xy) doubles the correct digits
        k = 1
        while k < self.ring.N:
            y = y * (2 - self * y)
            k *= 2
        return y

    def frobenius(self, k: int = 1) -> UnramElem:
        """Apply the lift of the absolute p-power Frobenius k times."""
        x = self
        for _ in range(k % self.ring.M):
            x = _frobenius_once(x)
        return x

    def truncate(self, N: int) -> UnramElem:
        if N > self.ring.N:
            raise PrecisionMismatch("cannot raise precision by truncation")
        return UnramElem(self.ring.with_precision(N), self.c)

    def reduce_mod_power(self, j: int) -> UnramElem:
        """Same ring, coefficients reduced mod p^j."""
        if j >= self.ring.N:
            return self
        mod = self.ring.p ** j
        return UnramElem._raw(self.ring, tuple(a % mod for a in self.c))

    def div_p_power(self, k: int) -> UnramElem:
        """Exact division by p^k; the quotient is known to precision N - k."""
        if k == 0:
            return self
        if k >= self.ring.N:
            raise PrecisionExhausted(f"dividing by p^{k} at precision {self.ring.N}")
        pk = self.ring.p ** k
        if any(a % pk for a in self.c):
            raise ArithmeticError(f"{self!r} is not divisible by {self.ring.p}^{k}")
        return UnramElem(self.ring.with_precision(self.ring.N - k), (a // pk for a in self.c))

    def mul_p_power(self, k: int) -> UnramElem:
        """Multiplication by p^k, which raises the known precision by k."""
        pk = self.ring.p ** k
        return UnramElem(self.ring.with_precision(self.ring.N + k), (a * pk for a in self.c))

    def to_ints(self) -> list:
        return list(self.c)


def _ring_mul(ring: UnramRing, a, b):
    M, mod = ring.M, ring.modulus
    if M == 1:
        return ((a[0] * b[0]) % mod,)
    prod = [0] * (2 * M - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    L = ring.lift_poly
    for k in range(2 * M - 2, M - 1, -1):
        t = prod[k]
        if t:
            base = k - M
            for s in range(M):
                if L[s]:
                    prod[base + s] -= t * L[s]
    return tuple(x % mod for x in prod[:M])


@functools.lru_cache(maxsize=None)
def _frobenius_basis_images(ring: UnramRing) -> tuple:
    """Images under sigma of the power basis 1, t, ..., t^(M-1)."""
    L = ring.lift_poly
    dL = [k * L[k] for k in range(1, len(L))]

    def ev(poly, s):
        acc = ring.zero
        for coeff in reversed(poly):
            acc = acc * s + coeff
        return acc

    s = ring.lift(ring.residue_field.gen ** ring.p)
    for _ in range(2 * ring.N.bit_length() + 4):
        val = ev(L, s)
        if val.is_zero():
            break
        s = s - val * ev(dL, s).invert()
    else:  # pragma: no cover
        raise AssertionError("Newton iteration for the Frobenius did not converge")
    images, power = [], ring.one
    for _ in range(ring.M):
        images.append(power)
        power = power * s
    return tuple(images)


def _frobenius_once(x: UnramElem) -> UnramElem:
    ring = x.ring
    if ring.M == 1:
        return x
    acc = ring.zero
    for coeff, img in zip(x.c, _frobenius_basis_images(ring)):
        if coeff:
            acc = acc + img * coeff
    return acc


def unram_valuation(x: UnramElem):
    return x.valuation()


def unram_frobenius(x: UnramElem, k: int = 1) -> UnramElem:
    return x.frobenius(k)


def unram_invert(x: UnramElem) -> UnramElem:
    return x.invert()
