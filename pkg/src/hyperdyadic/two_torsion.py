"""2-torsion of the Jacobian as even subsets of roots modulo complement.

Roots are ordered a1, b1, a2, b2, ... following the pair order of a
certificate; a subset is a bitmask with bit 2i for a_{i+1} and bit 2i+1 for
b_{i+1}.  Subsets S and R \\ S represent the same point, and the canonical
representative is the one not containing a1 (bit 0 clear).
"""

from __future__ import annotations

from dataclasses import dataclass

from .certify import StarCertificate, Verdict
from .errors import NotStar

__all__ = [
    "TwoTorsionElt", "Subgroup", "root_labels", "twin_mask", "reduction_kernel",
    "membership", "dims", "span", "kernel_report",
]


@dataclass(frozen=True)
class TwoTorsionElt:
    mask: int
    n_roots: int

    def __post_init__(self):
        full = (1 << self.n_roots) - 1
        if self.mask & ~full:
            raise ValueError("mask has bits beyond the root set")
        if bin(self.mask).count("1") % 2:
            raise ValueError("2-torsion points correspond to even-sized subsets")
        if self.mask & 1:
            object.__setattr__(self, "mask", self.mask ^ full)

    @classmethod
    def from_roots(cls, indices, n_roots: int) -> TwoTorsionElt:
        mask = 0
        for k in indices:
            mask ^= 1 << k
        return cls(mask, n_roots)

    def __add__(self, other: TwoTorsionElt) -> TwoTorsionElt:
        if other.n_roots != self.n_roots:
            raise ValueError("different root sets")
        return TwoTorsionElt(self.mask ^ other.mask, self.n_roots)

    def is_zero(self) -> bool:
        return self.mask == 0

    def complement(self) -> TwoTorsionElt:
        return TwoTorsionElt(self.mask ^ ((1 << self.n_roots) - 1), self.n_roots)

    def indices(self) -> list:
        return [k for k in range(self.n_roots) if self.mask >> k & 1]


@dataclass(frozen=True)
class Subgroup:
    """F_2-subspace given by a basis in reduced row-echelon form (pivot = highest bit)."""

    basis: tuple
    n_roots: int

    @classmethod
    def generated_by(cls, elts, n_roots: int) -> Subgroup:
        rows = []
        for e in elts:
            v = e.mask
            for r in rows:
                if v ^ r < v:
                    v ^= r
            if v:
                rows = [r ^ v if r ^ v < r else r for r in rows]
                rows.append(v)
                rows.sort(reverse=True)
        # full reduction: clear each pivot from every other row
        for i, r in enumerate(rows):
            top = r.bit_length() - 1
            for j in range(len(rows)):
                if j != i and rows[j] >> top & 1:
                    rows[j] ^= r
        rows.sort(reverse=True)
        return cls(tuple(TwoTorsionElt(r, n_roots) for r in rows), n_roots)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def reduce(self, e: TwoTorsionElt) -> int:
        v = e.mask
        for b in self.basis:
            if v >> (b.mask.bit_length() - 1) & 1:
                v ^= b.mask
        return v

    def __contains__(self, e: TwoTorsionElt) -> bool:
        return self.reduce(e) == 0


def root_labels(g: int) -> list:
    return [f"{ab}{i + 1}" for i in range(g + 1) for ab in "ab"]


def twin_mask(i: int, g: int) -> TwoTorsionElt:
    return TwoTorsionElt.from_roots([2 * i, 2 * i + 1], 2 * g + 2)


def _require_star(cert: StarCertificate):
    if cert.verdict != Verdict.STAR:
        raise NotStar("the reduction map on J[2] is only described for good ordinary (*) equations")


def reduction_kernel(cert: StarCertificate) -> Subgroup:
    """Kernel of J[2] -> Jbar[2]: generated by the twins {a_i, b_i}."""
    _require_star(cert)
    g = cert.genus
    return Subgroup.generated_by([twin_mask(i, g) for i in range(g + 1)], 2 * g + 2)


def membership(S: TwoTorsionElt, H: Subgroup) -> bool:
    return S in H


def dims(cert: StarCertificate) -> tuple:
    """(dim J[2], dim kernel, dim image) of the reduction map."""
    kernel = reduction_kernel(cert)
    total = 2 * cert.genus
    return total, kernel.dimension, total - kernel.dimension


def span(elts, n_roots: int) -> set:
    """All sums of subsets of elts, by enumeration."""
    out = {0}
    for e in elts:
        out |= {m ^ e.mask for m in out}
    return {TwoTorsionElt(m, n_roots).mask for m in out}


def kernel_report(cert: StarCertificate) -> dict:
    kernel = reduction_kernel(cert)
    labels = root_labels(cert.genus)
    total, k, im = dims(cert)
    return {
        "dims": {"total": total, "kernel": k, "image": im},
        "basis": [{"mask": b.mask, "roots": [labels[j] for j in b.indices()]} for b in kernel.basis],
    }
