"""Cluster pictures: from a (**) certificate at p = 2, and from explicit roots at odd p.

Odd-p roots of degree <= 2 factors are written as x + y*sqrt(delta) with x, y
rational and delta one of 1, eps, p, p*eps (eps the least quadratic non-residue
mod p), so pairwise valuations are computed exactly from rationals, with only
the p-adic square roots approximated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .certify import StarCertificate
from .errors import ConsistencyError, PrecisionExhausted, UnsupportedExtension
from .polys import ZZ, Poly, poly_discriminant, poly_resultant
from .rings import Val, int_valuation

__all__ = [
    "Cluster", "ClusterPicture", "picture_from_valuations", "picture_from_certificate",
    "shifted_picture", "odd_p_picture", "odd_p_roots", "valuation_oracle", "OracleCheck",
]


@dataclass(frozen=True)
class Cluster:
    depth: Val
    leaves: tuple  # labels of roots directly in this cluster
    children: tuple  # proper subclusters

    def all_leaves(self) -> tuple:
        out = list(self.leaves)
        for ch in self.children:
            out.extend(ch.all_leaves())
        return tuple(sorted(out))

    @property
    def size(self) -> int:
        return len(self.all_leaves())

    def canonical(self) -> dict:
        kids = sorted((ch.canonical() for ch in self.children), key=lambda d: json.dumps(d, sort_keys=True))
        return {"depth": self.depth.to_json(), "leaves": len(self.leaves), "children": kids}

    def to_json(self) -> dict:
        return {"depth": self.depth.to_json(), "leaves": list(self.leaves),
                "children": [ch.to_json() for ch in self.children]}

    @classmethod
    def from_json(cls, d: dict) -> Cluster:
        return cls(Val.from_json(d["depth"]), tuple(d["leaves"]),
                   tuple(cls.from_json(ch) for ch in d["children"]))

    def ascii(self) -> str:
        parts = ["*"] * len(self.leaves) + [ch.ascii() for ch in self.children]
        return "(" + " ".join(parts) + f")_{self.depth}"


@dataclass(frozen=True)
class ClusterPicture:
    top: Cluster
    prime: int
    frobenius: dict | None = None  # leaf label -> leaf label, when known

    def canonical(self) -> dict:
        return self.top.canonical()

    def canonical_json(self) -> str:
        return json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))

    def same_shape(self, other: ClusterPicture) -> bool:
        return self.canonical_json() == other.canonical_json()

    def ascii(self) -> str:
        return self.top.ascii()

    def leaves(self) -> tuple:
        return self.top.all_leaves()

    def proper_clusters(self) -> list:
        out, stack = [], [self.top]
        while stack:
            cl = stack.pop()
            out.append(cl)
            stack.extend(cl.children)
        return out

    def twin_depths(self) -> list:
        return sorted((cl.depth for cl in self.proper_clusters() if cl.size == 2), key=Val.as_fraction)

    def valuation_matrix(self) -> dict:
        """v(r - r') for leaves r != r': depth of the smallest cluster containing both."""
        out = {}

        def walk(cl):
            for child in cl.children:
                walk(child)
            groups = [(leaf,) for leaf in cl.leaves] + [ch.all_leaves() for ch in cl.children]
            for a in range(len(groups)):
                for b in range(a + 1, len(groups)):
                    for x in groups[a]:
                        for y in groups[b]:
                            out[(x, y)] = out[(y, x)] = cl.depth

        walk(self.top)
        return out

    def to_json(self) -> dict:
        return {"prime": self.prime, "top": self.top.to_json(), "frobenius": self.frobenius,
                "canonical": self.canonical(), "ascii": self.ascii()}

    @classmethod
    def from_json(cls, d: dict) -> ClusterPicture:
        return cls(Cluster.from_json(d["top"]), d["prime"], d.get("frobenius"))


def picture_from_valuations(labels, val, prime: int, frobenius=None) -> ClusterPicture:
    """Cluster tree of an ultrametric valuation matrix val[(a, b)] on the labels."""
    labels = sorted(labels)

    def build(members):
        depth = min(val[(a, b)] for a in members for b in members if a != b)
        groups = []
        for a in members:
            for grp in groups:
                if val[(a, grp[0])] > depth:
                    grp.append(a)
                    break
            else:
                groups.append([a])
        for grp in groups:
            for a in grp:
                for b in members:
                    if a == b:
                        continue
                    # inside a group strictly deeper, across groups exactly at depth
                    if (b in grp) != (val[(a, b)] > depth):
                        raise ConsistencyError("valuations are not ultrametric")
        leaves = tuple(sorted(grp[0] for grp in groups if len(grp) == 1))
        children = tuple(sorted((build(grp) for grp in groups if len(grp) > 1),
                                key=lambda c: c.all_leaves()))
        return Cluster(depth, leaves, children)

    return ClusterPicture(build(labels), prime, frobenius)


# ---------------------------------------------------------------------------
# p = 2

def picture_from_certificate(cert: StarCertificate) -> ClusterPicture:
    """Top cluster of depth 0 holding one twin {a_i, b_i} of depth n_i per pair."""
    cert.require_certified()
    for p in cert.pairs:
        # gamma_i, eta_i live in an unramified ring by construction, so inertia is trivial
        assert p.gamma.ring.p == 2 and p.eta.ring.p == 2
    labels, val = [], {}
    for p in cert.pairs:
        a, b = f"a{p.index + 1}", f"b{p.index + 1}"
        labels += [a, b]
        val[(a, b)] = val[(b, a)] = p.depth
    for x in labels:
        for y in labels:
            if x != y and (x, y) not in val:
                val[(x, y)] = Val(0)
    frob = {}
    for i, j in enumerate(cert.frobenius_perm):
        frob[f"a{i + 1}"] = f"a{j + 1}"
        frob[f"b{i + 1}"] = f"b{j + 1}"
    return picture_from_valuations(labels, val, 2, frob)


def shifted_picture(pic: ClusterPicture, shift=2) -> ClusterPicture:
    """Subtract ``shift`` (= v(4)) from every twin depth; twins reaching depth 0 dissolve."""
    shift = Val.of(shift)
    top = pic.top
    if any(ch.size != 2 or ch.children for ch in top.children):
        raise ValueError("shifted_picture expects a top cluster of twins and single roots")
    leaves = list(top.leaves)
    children = []
    for ch in top.children:
        depth = ch.depth - shift
        if depth < top.depth:
            raise ValueError(f"twin depth {ch.depth} is below the shift {shift}")
        if depth == top.depth:
            leaves.extend(ch.leaves)
        else:
            children.append(Cluster(depth, ch.leaves, ()))
    new_top = Cluster(top.depth, tuple(sorted(leaves)), tuple(children))
    return ClusterPicture(new_top, pic.prime, pic.frobenius)


# ---------------------------------------------------------------------------
# odd p

def _vq(x: Fraction, p: int):
    """p-adic valuation of a rational; None for zero."""
    if x == 0:
        return None
    return int_valuation(x.numerator, p) - int_valuation(x.denominator, p)


def _sqrt_mod(u: int, p: int, N: int) -> int:
    """A square root of the p-adic unit u mod p^N (u a square mod p)."""
    r = next(s for s in range(1, p) if (s * s - u) % p == 0)
    mod = p
    while mod < p ** N:
        mod = min(mod * mod, p ** N)
        r = (r - (r * r - u) * pow(2 * r, -1, mod)) % mod
    return r


def _is_square_unit(u: int, p: int) -> bool:
    return pow(u % p, (p - 1) // 2, p) == 1


@dataclass(frozen=True)
class _Root:
    label: str
    x: Fraction
    y: Fraction
    delta: int  # 1 (rational), eps, p or p*eps


def _least_nonresidue(p: int) -> int:
    return next(e for e in range(2, p) if not _is_square_unit(e, p))


def odd_p_roots(factors, p: int, precision: int = 64) -> list:
    """Roots of integer factors of degree <= 2 in the form x + y*sqrt(delta)."""
    if p % 2 == 0:
        raise ValueError("odd_p_roots needs an odd prime")
    eps = _least_nonresidue(p)
    roots = []
    for k, coeffs in enumerate(factors):
        f = Poly(ZZ, coeffs)
        if f.degree == 1:
            roots.append(_Root(f"r{k + 1}", Fraction(-f[0], f[1]), Fraction(0), 1))
        elif f.degree == 2:
            a, b, c = f[2], f[1], f[0]
            D = b * b - 4 * a * c
            if D == 0:
                raise ValueError(f"factor {coeffs} has a repeated root")
            e = int_valuation(D, p)
            s = p ** (e // 2)
            u = D // p ** e  # D = s^2 * p^(e mod 2) * u
            base = 1 if e % 2 == 0 else p
            if _is_square_unit(u, p):
                t, delta = Fraction(_sqrt_mod(u, p, precision)), base
            else:
                t, delta = Fraction(_sqrt_mod(u * pow(eps, -1, p ** precision) % p ** precision, p, precision)), base * eps
            # sqrt(D) = s * t * sqrt(delta') with t a unit
            if delta == 1:
                x0, y0 = Fraction(-b, 2 * a), Fraction(s, 2 * a) * t
                roots.append(_Root(f"r{k + 1}+", x0 + y0, Fraction(0), 1))
                roots.append(_Root(f"r{k + 1}-", x0 - y0, Fraction(0), 1))
            else:
                x0, y0 = Fraction(-b, 2 * a), Fraction(s, 2 * a) * t
                roots.append(_Root(f"r{k + 1}+", x0, y0, delta))
                roots.append(_Root(f"r{k + 1}-", x0, -y0, delta))
        else:
            raise UnsupportedExtension(f"factor of degree {f.degree} is outside the supported range")
    return roots


def _field_val(x: Fraction, y: Fraction, delta: int, p: int):
    """Valuation of x + y*sqrt(delta) in Q_p(sqrt(delta)); None for zero."""
    vx = _vq(x, p)
    vy = _vq(y, p) if delta != 1 else None
    if vy is not None and delta % p == 0:
        vy = Fraction(vy) + Fraction(1, 2)
    cands = [Fraction(v) for v in (vx, vy) if v is not None]
    return min(cands) if cands else None


def _pair_val(r: _Root, s: _Root, p: int, precision: int) -> Val:
    if r.delta == s.delta:
        v = _field_val(r.x - s.x, r.y - s.y, r.delta, p)
    else:
        if s.delta == 1:
            r, s = s, r
        # r lies in Q_p(sqrt(r.delta)); s and its conjugate are equidistant from r
        dx = r.x - s.x
        x = dx * dx + r.y * r.y * r.delta - s.y * s.y * s.delta
        y = 2 * dx * r.y
        v2 = _field_val(x, y, r.delta, p)
        v = None if v2 is None else v2 / 2
    if v is None or v >= precision // 2:
        raise PrecisionExhausted(f"cannot resolve v({r.label} - {s.label}) at precision {precision}")
    return Val.of(v)


def odd_p_picture(factors, p: int, precision: int = 64) -> ClusterPicture:
    """Cluster picture at an odd prime of the product of integer factors of degree <= 2."""
    roots = odd_p_roots(factors, p, precision)
    val = {}
    for i, r in enumerate(roots):
        for s in roots[i + 1:]:
            val[(r.label, s.label)] = val[(s.label, r.label)] = _pair_val(r, s, p, precision)
    return picture_from_valuations([r.label for r in roots], val, p)


@dataclass(frozen=True)
class OracleCheck:
    name: str
    lhs: Val
    rhs: Val

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


def valuation_oracle(factors, p: int, precision: int = 64) -> list:
    """Compare v_p of resultants / discriminants with sums of pairwise root valuations."""
    roots = odd_p_roots(factors, p, precision)
    by_factor = {}
    for r in roots:
        by_factor.setdefault(r.label.rstrip("+-"), []).append(r)
    polys = [Poly(ZZ, cs) for cs in factors]
    keys = [f"r{k + 1}" for k in range(len(factors))]
    checks = []
    for k, g in enumerate(polys):
        if g.degree == 2:
            r, s = by_factor[keys[k]]
            disc = poly_discriminant(g)
            lhs = Val(int_valuation(disc, p) - 2 * _vq(Fraction(g.lc), p))
            twin = _pair_val(r, s, p, precision)
            checks.append(OracleCheck(f"disc {keys[k]}", lhs, twin + twin))
        for m in range(k + 1, len(polys)):
            h = polys[m]
            res = poly_resultant(g, h)
            lhs = Val(int_valuation(res, p) - h.degree * _vq(Fraction(g.lc), p)
                      - g.degree * _vq(Fraction(h.lc), p))
            rhs = Val(0)
            for r in by_factor[keys[k]]:
                for s in by_factor[keys[m]]:
                    rhs = rhs + _pair_val(r, s, p, precision)
            checks.append(OracleCheck(f"res {keys[k]},{keys[m]}", lhs, rhs))
    return checks
