"""Random instances: integer curves f = Q^2 + 4P, raw pair data and node configurations."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .certify import CurveInput
from .errors import CurveFormatError
from .polys import ZZ, Poly, poly_gcd
from .rings import UnramRing, fq_field

__all__ = ["SyntheticConfig", "curve_from_QP", "random_separable_qbar", "has_good_reduction", "random_curve",
           "random_pair_data", "random_node_configuration"]


@dataclass
class SyntheticConfig:
    genus: int = 2
    coeff_bound: int = 8  # integer coefficients are drawn from [-bound, bound]
    star: bool | None = None  # True: force Star, False: force a node, None: either
    max_tries: int = 200


def curve_from_QP(Q, P, c: int = 1, label: str = "") -> CurveInput:
    f = Poly(ZZ, Q) ** 2 + Poly(ZZ, P) * 4
    return CurveInput(c, f.coeffs, 1, label)


def random_separable_qbar(degree: int, rng: random.Random) -> Poly:
    F2 = fq_field(2, 1)
    while True:
        Qbar = Poly(F2, [rng.randrange(2) for _ in range(degree)] + [1])
        if poly_gcd(Qbar, Qbar.derivative()).degree == 0:
            return Qbar


def has_good_reduction(Qbar: Poly, Pbar: Poly) -> bool:
    dQ, dP = Qbar.derivative(), Pbar.derivative()
    return poly_gcd(Pbar * dQ * dQ + dP * dP, Qbar).degree == 0


def random_curve(cfg: SyntheticConfig, rng: random.Random, label: str = "") -> CurveInput:
    """y^2 = c (Q^2 + 4P) with Qbar separable of degree g + 1 and c = 1 mod 4.

    Such an equation satisfies (**).  A root r of Qbar is a singular point of
    y^2 + Qbar y = Pbar iff Pbar(r) Qbar'(r)^2 = Pbar'(r)^2, so (*) holds exactly
    when Pbar Qbar'^2 + Pbar'^2 is coprime to Qbar; ``cfg.star`` can force
    either outcome.
    """
    g, B = cfg.genus, cfg.coeff_bound
    for _ in range(cfg.max_tries):
        Qbar = random_separable_qbar(g + 1, rng)
        Q = [a.n + 2 * rng.randint(-B, B) for a in Qbar.coeffs[:-1]] + [1]
        P = [rng.randint(-B, B) for _ in range(2 * g + 2)]
        if cfg.star is not None and has_good_reduction(Qbar, Poly(Qbar.ring, P)) != cfg.star:
            continue
        c = 1 + 4 * rng.randint(-B, B)
        if c == 0:
            continue
        try:
            return curve_from_QP(Q, P, c, label)
        except CurveFormatError:
            continue
    raise RuntimeError("no suitable random curve found")


def random_pair_data(genus: int, M: int, N: int, rng: random.Random, node_bias: float = 0.5):
    """g+1 centres in UnramRing(2, M, N) with distinct residues, and arbitrary eta to precision N - 2."""
    R = UnramRing(2, M, N)
    E = R.with_precision(N - 2)  # eta is known to two digits less than the centres
    F = R.residue_field
    if genus + 1 > F.order:
        raise ValueError("residue field too small for distinct centres")
    residues = rng.sample(range(F.order), genus + 1)
    gammas, etas = [], []
    for r in residues:
        digits = [(r >> k) & 1 for k in range(M)]
        gammas.append(R.element([d + 2 * rng.randrange(2 ** (N - 2)) for d in digits]))
        eta = E.element([rng.randrange(2 ** N) for _ in range(M)])
        if rng.random() < node_bias:
            eta = eta.mul_p_power(rng.randint(1, 3)).truncate(N - 2)
        etas.append(eta)
    return R, gammas, etas


def random_node_configuration(m: int, n_points: int, rng: random.Random):
    """(abar, rs, etabars, i) over F_{2^m} with etabar_i = 0, i.e. pair i gives a node."""
    F = fq_field(2, m)
    n_points = min(n_points, F.order)
    rs = [F.from_int(k) for k in rng.sample(range(F.order), n_points)]
    etabars = [F.from_int(rng.randrange(F.order)) if rng.random() < 0.7 else F.zero for _ in rs]
    i = rng.randrange(n_points)
    etabars[i] = F.zero
    abar = F.from_int(rng.randrange(2))
    return abar, rs, etabars, i
