"""Certification of 2-adic Weierstrass equations y^2 = c f(x) of shape (*) / (**).

The pipeline reduces f mod 2, extracts Qbar with fbar = Qbar^2, checks Qbar is
separable, lifts the coprime factorization fbar = prod (x - r_i)^2 to quadratic
factors over the unramified extension containing the r_i, and reads off the
centres gamma_i and the scaled half-discriminants eta_i of each quadratic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import reduce
from math import lcm

from .errors import ConsistencyError, CurveFormatError, NotASquare, NotCertified, PrecisionExhausted
from .polys import (DEFAULT_SEED, ZZ, Poly, char2_poly_sqrt, fq_factor, hensel_lift_factors,
                    poly_discriminant, poly_gcd, roots_in_field)
from .rings import SATURATED, FqElem, UnramElem, UnramRing, Val, fq_field, fq_frobenius_orbit, int_valuation

__all__ = [
    "Verdict", "FailReason", "CurveInput", "PairData", "StarCertificate",
    "certify", "default_precision", "pairing_report", "format_pairing",
]


class Verdict(str, enum.Enum):
    STAR = "Star"
    STAR_STAR = "StarStar"
    FAIL = "Fail"


class FailReason(str, enum.Enum):
    C_NOT_ONE_MOD_4 = "CNotOneMod4"
    FBAR_NOT_A_SQUARE = "FBarNotASquare"
    QBAR_NOT_SEPARABLE = "QBarNotSeparable"
    DISC_CONDITION = "DiscCondition"
    PRECISION_EXHAUSTED = "PrecisionExhausted"


@dataclass(frozen=True)
class CurveInput:
    """y^2 = c f(x) over the unramified extension of Q_2 of degree d.

    ``f`` lists integer coefficients, low degree first; f must be monic of even
    degree 2g + 2 >= 6 and squarefree.
    """

    c: int
    f: tuple
    base_residue_degree: int = 1
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(int(a) for a in self.f))
        if self.c == 0:
            raise CurveFormatError("c must be nonzero")
        if self.base_residue_degree < 1:
            raise CurveFormatError("base_residue_degree must be >= 1")
        n = len(self.f) - 1
        if n < 6 or n % 2:
            raise CurveFormatError(f"f must have even degree >= 6, got degree {n}")
        if self.f[-1] != 1:
            raise CurveFormatError("f must be monic")
        if self.discriminant() == 0:
            raise CurveFormatError("f is not squarefree")

    @property
    def degree(self) -> int:
        return len(self.f) - 1

    @property
    def genus(self) -> int:
        return self.degree // 2 - 1

    @property
    def q(self) -> int:
        return 2 ** self.base_residue_degree

    def poly(self) -> Poly:
        return Poly(ZZ, self.f)

    def discriminant(self) -> int:
        return poly_discriminant(Poly(ZZ, self.f))

    def translate(self, u: int) -> CurveInput:
        """The equation y^2 = c f(x + u)."""
        return CurveInput(self.c, self.poly().shift(u).coeffs, self.base_residue_degree, self.label)


@dataclass(frozen=True)
class PairData:
    index: int
    gamma: UnramElem
    eta: UnramElem
    quadratic: Poly
    residue_degree: int
    r: FqElem
    eta_valuation: int
    depth: Val

    @property
    def is_node(self) -> bool:
        return self.eta_valuation >= 1


@dataclass(frozen=True)
class StarCertificate:
    curve: CurveInput
    verdict: Verdict
    reason: FailReason | None = None
    fail_pair: int | None = None
    a: int | None = None
    pairs: tuple = ()
    frobenius_perm: tuple = ()
    M: int | None = None
    N: int | None = None
    seed: int = DEFAULT_SEED
    notes: tuple = field(default=())

    @property
    def certified(self) -> bool:
        return self.verdict in (Verdict.STAR, Verdict.STAR_STAR)

    @property
    def genus(self) -> int:
        return self.curve.genus

    @property
    def d(self) -> int:
        return self.curve.base_residue_degree

    @property
    def q(self) -> int:
        return self.curve.q

    @property
    def small_residue_field(self) -> bool:
        """|k| < g + 1: the converse direction of the classification does not apply."""
        return self.q < self.genus + 1

    @property
    def residue_field(self):
        return fq_field(2, self.M)

    def require_certified(self):
        if not self.certified:
            raise NotCertified(f"equation not of form (**): {self.reason.value if self.reason else ''}")

    def orbits(self) -> list:
        """Cycles of frobenius_perm, each starting at its least index."""
        seen, out = set(), []
        for i in range(len(self.frobenius_perm)):
            if i in seen:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self.frobenius_perm[j]
            out.append(tuple(cyc))
        return out

    def depths(self) -> list:
        return [p.depth for p in self.pairs]

    def eta_valuations(self) -> list:
        return [p.eta_valuation for p in self.pairs]

    def abar(self) -> FqElem:
        return self.residue_field(self.a % 2)


def default_precision(curve: CurveInput) -> int:
    return max(64, 2 * int_valuation(curve.discriminant(), 2) + 16)


def _fail(curve, reason, N=None, seed=DEFAULT_SEED, pair=None, a=None):
    return StarCertificate(curve=curve, verdict=Verdict.FAIL, reason=reason, fail_pair=pair,
                           a=a, N=N, seed=seed)


def _ordered_residue_points(Qbar: Poly, d: int, seed: int):
    """Roots of Qbar in the common residue field, grouped into q-power Frobenius orbits."""
    q = 2 ** d
    factors = fq_factor(Qbar, seed)
    M = reduce(lcm, [g.degree for g, _ in factors], d)
    FM = fq_field(2, M)
    points = []
    for g, _ in factors:
        remaining = roots_in_field(Poly(FM, [c.n for c in g.coeffs]), seed)
        while remaining:
            orbit = fq_frobenius_orbit(remaining[0], q)
            points.extend(orbit)
            remaining = [r for r in remaining if r not in orbit]
    assert len(points) == Qbar.degree
    perm = tuple(points.index(r ** q) for r in points)
    return M, points, perm


def _certify_at(curve: CurveInput, N: int, seed: int) -> StarCertificate:
    c, d = curve.c, curve.base_residue_degree
    if c % 4 != 1:
        return _fail(curve, FailReason.C_NOT_ONE_MOD_4, N, seed)
    a = (c - 1) // 4
    F2 = fq_field(2, 1)
    fbar = Poly(F2, curve.f)
    try:
        Qbar = char2_poly_sqrt(fbar)
    except NotASquare:
        return _fail(curve, FailReason.FBAR_NOT_A_SQUARE, N, seed, a=a)
    if poly_gcd(Qbar, Qbar.derivative()).degree > 0:
        return _fail(curve, FailReason.QBAR_NOT_SEPARABLE, N, seed, a=a)

    M, points, perm = _ordered_residue_points(Qbar, d, seed)
    FM = fq_field(2, M)
    R = UnramRing(2, M, N)
    x = Poly.x(FM)
    lifts = hensel_lift_factors(Poly(R, curve.f), [(x - r) ** 2 for r in points])

    pairs = []
    for i, (quad, r) in enumerate(zip(lifts, points)):
        if quad.degree != 2:
            raise ConsistencyError(f"lifted factor {i} is not quadratic")
        c0, b = quad[0], quad[1]
        if any(v % 2 for v in b.c):
            raise ConsistencyError(f"linear coefficient of pair {i} is odd")
        gamma = (-b).div_p_power(1)
        centred = gamma * gamma - c0.truncate(N - 1)
        if any(v % 4 for v in centred.c):
            return _fail(curve, FailReason.DISC_CONDITION, N, seed, pair=i, a=a)
        eta = centred.div_p_power(2)
        v = eta.valuation()
        if v is SATURATED:
            raise PrecisionExhausted(f"eta_{i} vanishes to precision {eta.ring.N}")
        if gamma.residue() != r:
            raise ConsistencyError(f"centre of pair {i} does not reduce to its residue point")
        orbit_len = len(fq_frobenius_orbit(r, curve.q))
        pairs.append(PairData(index=i, gamma=gamma, eta=eta, quadratic=quad, residue_degree=orbit_len,
                              r=r, eta_valuation=v.num, depth=Val(2) + Val(v.num, 2)))

    for i, j in enumerate(perm):
        if pairs[i].gamma.frobenius(d) != pairs[j].gamma or pairs[i].eta.frobenius(d) != pairs[j].eta:
            raise ConsistencyError(f"Frobenius does not carry pair {i} to pair {j}")

    verdict = Verdict.STAR if all(p.eta_valuation == 0 for p in pairs) else Verdict.STAR_STAR
    notes = ()
    if curve.q < curve.genus + 1:
        notes = (f"|k| = {curve.q} < g + 1 = {curve.genus + 1}",)
    return StarCertificate(curve=curve, verdict=verdict, a=a, pairs=tuple(pairs),
                           frobenius_perm=perm, M=M, N=N, seed=seed, notes=notes)


def certify(curve: CurveInput, precision: int | None = None, seed: int = DEFAULT_SEED) -> StarCertificate:
    """Decide whether y^2 = c f(x) satisfies (**) (and (*)), returning a certificate.

    On PrecisionExhausted the computation is retried once at doubled precision.
    """
    N = precision or default_precision(curve)
    try:
        return _certify_at(curve, N, seed)
    except PrecisionExhausted:
        pass
    try:
        return _certify_at(curve, 2 * N, seed)
    except PrecisionExhausted:
        return _fail(curve, FailReason.PRECISION_EXHAUSTED, 2 * N, seed)


def pairing_report(cert: StarCertificate) -> list:
    """Per pair: the lifted quadratic factor, its centre, eta and residue point."""
    cert.require_certified()
    out = []
    for p in cert.pairs:
        out.append({
            "index": p.index,
            "quadratic": [c.to_ints() for c in p.quadratic.coeffs],
            "gamma": p.gamma.to_ints(),
            "eta": p.eta.to_ints(),
            "r": p.r.n,
            "residue_degree": p.residue_degree,
            "eta_valuation": p.eta_valuation,
            "depth": p.depth,
        })
    return out


def format_pairing(cert: StarCertificate) -> str:
    cert.require_certified()
    F = cert.residue_field
    lines = [f"residue field F_2[w]/({Poly(fq_field(2, 1), F.modulus)!r}), precision 2^{cert.N}"]
    for p in cert.pairs:
        lines.append(f"pair {p.index + 1}: (x - gamma)^2 - 4*eta with r = {p.r!r}, "
                     f"v(eta) = {p.eta_valuation}, depth = {p.depth}")
        lines.append(f"    quadratic = {p.quadratic!r}")
    return "\n".join(lines)
