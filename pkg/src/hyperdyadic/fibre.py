"""Stable model, special fibre, nodes and dual graphs of a (**)-certified curve."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from .certify import StarCertificate, Verdict
from .errors import ConsistencyError
from .polys import Poly, fq_embedding, roots_in_field, split_over_extension
from .rings import FqElem, UnramElem, Val, fq_field, fq_trace

__all__ = [
    "StableModelData", "NodeData", "PointClass", "Vertex", "Edge", "DualGraph",
    "reduced_P_closed_form", "stable_model_from_pairs", "stable_model",
    "smoothness_scan", "is_geometrically_reducible", "nodes", "split_flag",
    "split_trace_argument", "split_by_trace", "split_by_enumeration",
    "stable_graph", "minimal_regular_graph", "contract_chains", "orbit_report",
]

# exhaustive oracles are run when the residue field has at most 2^16 elements
_ENUMERATION_LIMIT = 16


def _prod(polys, one):
    return reduce(lambda a, b: a * b, polys, one)


@dataclass(frozen=True)
class StableModelData:
    """y^2 + Q(x) y = P(x) over the base ring and its reduction over k."""

    Q: Poly
    P: Poly
    Qbar: Poly
    Pbar: Poly
    c: int

    @property
    def genus(self) -> int:
        return self.Qbar.degree - 1

    def base_coefficients(self, poly: Poly) -> list:
        """Integer coefficients (mod 2^precision) of a polynomial descending to Z_2."""
        out = []
        for coeff in poly.coeffs:
            if any(coeff.c[1:]):
                raise ValueError("coefficient does not lie in Z_2")
            out.append(coeff.c[0])
        return out


def reduced_P_closed_form(abar: FqElem, rs, etabars) -> Poly:
    """abar Qbar^2 + sum_i etabar_i prod_{j != i} (x - r_j)^2."""
    F = abar.field
    one = Poly(F, [1])
    linears = [Poly(F, [-r, 1]) for r in rs]
    Qbar = _prod(linears, one)
    out = Qbar * Qbar * abar
    for i, eb in enumerate(etabars):
        if eb.is_zero():
            continue
        others = _prod((lin for j, lin in enumerate(linears) if j != i), one)
        out = out + others * others * eb
    return out


def stable_model_from_pairs(c: int, gammas, etas, f: Poly | None = None,
                            descent_power: int | None = None) -> StableModelData:
    """Build Q = prod (x - gamma_i) and P = (c f - Q^2) / 4 from pair data.

    ``f`` defaults to prod ((x - gamma_i)^2 - 4 eta_i); when given it is checked
    against that product.  ``descent_power`` d asserts that Q and P are fixed by
    the q = 2^d power Frobenius, i.e. are defined over the base ring.
    """
    if c % 4 != 1:
        raise ValueError("c must be 1 mod 4")
    ring = gammas[0].ring
    one = Poly(ring, [1])
    x = Poly.x(ring)
    Q = _prod([x - gm for gm in gammas], one)
    f_pairs = _prod([(x - gm) ** 2 - eta.mul_p_power(2) for gm, eta in zip(gammas, etas)], one)
    if f is not None and f.map(lambda a: a.truncate(ring.N), ring) != f_pairs:
        raise ConsistencyError("f differs from the product of the pair quadratics")
    cf_minus_Q2 = f_pairs * c - Q * Q
    P = Poly(ring.with_precision(ring.N - 2), [a.div_p_power(2) for a in cf_minus_Q2.coeffs])
    if Poly(ring, [a.mul_p_power(2) for a in P.coeffs]) != cf_minus_Q2:
        raise ConsistencyError("4P != cf - Q^2")
    if descent_power is not None:
        for coeff in Q.coeffs + P.coeffs:
            if coeff.frobenius(descent_power) != coeff:
                raise ConsistencyError("stable model is not defined over the base")
    Qbar, Pbar = Q.residue(), P.residue()
    F = Qbar.ring
    closed = reduced_P_closed_form(F(((c - 1) // 4) % 2), [gm.residue() for gm in gammas],
                                   [eta.residue() for eta in etas])
    if closed != Pbar:
        raise ConsistencyError("reduced P differs from its closed form")
    return StableModelData(Q=Q, P=P, Qbar=Qbar, Pbar=Pbar, c=c)


def stable_model(cert: StarCertificate) -> StableModelData:
    cert.require_certified()
    gammas = [p.gamma for p in cert.pairs]
    etas = [p.eta for p in cert.pairs]
    ring = gammas[0].ring
    f = Poly(ring, cert.curve.f)
    return stable_model_from_pairs(cert.curve.c, gammas, etas, f=f, descent_power=cert.d)


# ---------------------------------------------------------------------------
# singularities of y^2 + Qbar y = Pbar

@dataclass(frozen=True)
class PointClass:
    """Classification of the point above x (x = None means the points at infinity)."""

    x: FqElem | None
    kind: str  # "smooth" | "node" | "worse"


def _classify(Q: Poly, P: Poly, r, multiplicity: int) -> str:
    dQ, dP = Q.derivative(), P.derivative()
    if dP(r) ** 2 + P(r) * dQ(r) ** 2 != 0:
        return "smooth"
    return "node" if multiplicity == 1 else "worse"


def smoothness_scan(Qbar: Poly, Pbar: Poly) -> list:
    """Classify the points P_r above the roots r of Qbar, and the points at infinity.

    Roots are taken in the splitting field of Qbar; returned x-coordinates live
    there (which is Qbar's own field when Qbar splits already).
    """
    g1 = Qbar.degree
    big, emb, roots = split_over_extension(Qbar)
    Qb, Pb = Qbar.map(emb, big), Pbar.map(emb, big)
    out = [PointClass(r, _classify(Qb, Pb, r, mult)) for r, mult in roots]
    Qt, Pt = Qb.reverse(g1), Pb.reverse(2 * g1)
    if Qt(big.zero) != 0:
        out.append(PointClass(None, "smooth"))
    else:
        mult = next(k for k, coeff in enumerate(Qt.coeffs) if coeff != 0)
        out.append(PointClass(None, _classify(Qt, Pt, big.zero, mult)))
    return out


def is_geometrically_reducible(Qbar: Poly, Pbar: Poly) -> bool:
    """Whether y^2 + Qbar y = Pbar factors over the algebraic closure (Qbar separable).

    A factorization means Y^2 + Qbar Y = Pbar for a polynomial Y of degree at most
    deg Qbar.  Writing Y = Y0 + lam Qbar with Y0 interpolating sqrt(Pbar) at the
    roots of Qbar, this holds iff Pbar - Y0^2 - Qbar Y0 is a constant multiple of
    Qbar^2 (the constant lam^2 + lam is then always attainable).
    """
    big, emb, roots = split_over_extension(Qbar)
    if any(m > 1 for _, m in roots):
        raise ValueError("Qbar must be separable")
    Qb, Pb = Qbar.map(emb, big), Pbar.map(emb, big)
    rs = [r for r, _ in roots]
    one = Poly(big, [1])
    Y0 = Poly(big, [])
    for i, r in enumerate(rs):
        basis = _prod([Poly(big, [-s, 1]) for j, s in enumerate(rs) if j != i], one)
        Y0 = Y0 + basis * (Pb(r).pth_root() / basis(r))
    rem_poly = Pb - Y0 * Y0 - Qb * Y0
    quo, rem = divmod(rem_poly, Qb * Qb)
    return rem.is_zero() and quo.degree <= 0


# ---------------------------------------------------------------------------
# nodes and the split criterion

@dataclass(frozen=True)
class NodeData:
    pair_index: int
    r: FqElem
    residue_degree: int
    thickness: int
    split: bool
    orbit_id: int


def split_trace_argument(abar: FqElem, rs, etabars, i: int) -> FqElem:
    """abar + sum_{j != i} etabar_j (r_i - r_j)^(-2)."""
    total = abar
    for j, (r, eb) in enumerate(zip(rs, etabars)):
        if j != i and not eb.is_zero():
            total = total + eb / (rs[i] - r) ** 2
    return total


def split_by_trace(abar: FqElem, rs, etabars, i: int, degree: int | None = None) -> bool:
    """Split criterion: the absolute trace of the argument over F_{2^degree} vanishes."""
    return fq_trace(split_trace_argument(abar, rs, etabars, i), degree).n == 0


def split_by_enumeration(abar: FqElem, rs, etabars, i: int, degree: int | None = None) -> bool:
    """Search F_{2^degree} for w with w^2 + Qbar'(r_i) w = abar Qbar'(r_i)^2 + sum_j ... ."""
    F = abar.field
    degree = F.m if degree is None else degree
    ri = rs[i]
    dQ = _prod([ri - s for j, s in enumerate(rs) if j != i], F.one)
    rhs = abar * dQ * dQ
    for j, eb in enumerate(etabars):
        if j == i or eb.is_zero():
            continue
        term = _prod([ri - s for k, s in enumerate(rs) if k not in (i, j)], F.one)
        rhs = rhs + eb * term * term
    for w in F.elements():
        if degree != F.m and not w.in_subfield(degree):
            continue
        if w * w + dQ * w == rhs:
            return True
    return False


def _split_data(cert: StarCertificate):
    return cert.abar(), [p.r for p in cert.pairs], [p.eta.residue() for p in cert.pairs]


def split_flag(cert: StarCertificate, i: int) -> bool:
    """Whether the node attached to pair i is split over k(r_i)."""
    cert.require_certified()
    pair = cert.pairs[i]
    if not pair.is_node:
        raise ValueError(f"pair {i} does not give a node")
    abar, rs, etabars = _split_data(cert)
    degree = cert.d * pair.residue_degree
    by_trace = split_by_trace(abar, rs, etabars, i, degree)
    if cert.M <= _ENUMERATION_LIMIT and by_trace != split_by_enumeration(abar, rs, etabars, i, degree):
        raise ConsistencyError(f"trace criterion and exhaustive search disagree at node {i}")
    return by_trace


def nodes(cert: StarCertificate) -> list:
    """Ordinary double points of the special fibre, one per pair with v(eta_i) >= 1."""
    cert.require_certified()
    model = stable_model(cert)
    scan = smoothness_scan(model.Qbar, model.Pbar)
    if any(pt.kind == "worse" for pt in scan):
        raise ConsistencyError("special fibre has a non-nodal singularity")
    from_scan = {pt.x for pt in scan if pt.kind == "node"}
    from_vals = {p.r for p in cert.pairs if p.is_node}
    if from_scan != from_vals:
        raise ConsistencyError("node locations from valuations and from the Jacobian criterion differ")
    orbit_of = {i: k for k, orb in enumerate(cert.orbits()) for i in orb}
    out = []
    for p in cert.pairs:
        if not p.is_node:
            continue
        if Val(p.eta_valuation) != (p.depth - 2) + (p.depth - 2):
            raise ConsistencyError("thickness differs from 2(depth - v(4))")
        out.append(NodeData(pair_index=p.index, r=p.r, residue_degree=p.residue_degree,
                            thickness=p.eta_valuation, split=split_flag(cert, p.index),
                            orbit_id=orbit_of[p.index]))
    return out


# ---------------------------------------------------------------------------
# dual graphs

@dataclass(frozen=True)
class Vertex:
    genus: int
    kind: str  # "stable-component" | "chain-link"
    label: str


@dataclass(frozen=True)
class Edge:
    """Edge u -> v; the orientation labels the two branches of the node."""

    u: int
    v: int
    thickness: int
    node: int | None
    label: str


@dataclass(frozen=True)
class DualGraph:
    model: str
    vertices: tuple
    edges: tuple
    vertex_perm: tuple
    edge_perm: tuple
    edge_flip: tuple

    def components(self) -> int:
        parent = list(range(len(self.vertices)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for e in self.edges:
            parent[find(e.u)] = find(e.v)
        return len({find(a) for a in range(len(self.vertices))})

    def cycle_rank(self) -> int:
        return len(self.edges) - len(self.vertices) + self.components()

    def genus_sum(self) -> int:
        return sum(v.genus for v in self.vertices)

    def arithmetic_genus(self) -> int:
        return self.genus_sum() + self.cycle_rank()

    def is_automorphism(self) -> bool:
        nv, ne = len(self.vertices), len(self.edges)
        if sorted(self.vertex_perm) != list(range(nv)) or sorted(self.edge_perm) != list(range(ne)):
            return False
        for a, b in enumerate(self.vertex_perm):
            if self.vertices[a].genus != self.vertices[b].genus or self.vertices[a].kind != self.vertices[b].kind:
                return False
        for k, e in enumerate(self.edges):
            img = self.edges[self.edge_perm[k]]
            if img.thickness != e.thickness:
                return False
            src, dst = self.vertex_perm[e.u], self.vertex_perm[e.v]
            if (src, dst) != ((img.v, img.u) if self.edge_flip[k] else (img.u, img.v)):
                return False
        return True

    @staticmethod
    def _orbits(perm) -> list:
        seen, sizes = set(), []
        for a in range(len(perm)):
            if a in seen:
                continue
            n, b = 0, a
            while b not in seen:
                seen.add(b)
                b = perm[b]
                n += 1
            sizes.append(n)
        return sorted(sizes)

    def vertex_orbits(self) -> list:
        return self._orbits(self.vertex_perm)

    def edge_orbits(self) -> list:
        return self._orbits(self.edge_perm)

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "vertices": [{"id": k, "genus": v.genus, "kind": v.kind, "label": v.label}
                         for k, v in enumerate(self.vertices)],
            "edges": [{"id": k, "u": e.u, "v": e.v, "thickness": e.thickness, "node": e.node,
                       "label": e.label} for k, e in enumerate(self.edges)],
            "frobenius": {"vertex_perm": list(self.vertex_perm), "edge_perm": list(self.edge_perm),
                          "edge_flip": list(self.edge_flip)},
            "cycle_rank": self.cycle_rank(),
            "genus_sum": self.genus_sum(),
        }

    @classmethod
    def from_json(cls, d: dict) -> DualGraph:
        return cls(
            model=d["model"],
            vertices=tuple(Vertex(v["genus"], v["kind"], v["label"]) for v in d["vertices"]),
            edges=tuple(Edge(e["u"], e["v"], e["thickness"], e["node"], e["label"]) for e in d["edges"]),
            vertex_perm=tuple(d["frobenius"]["vertex_perm"]),
            edge_perm=tuple(d["frobenius"]["edge_perm"]),
            edge_flip=tuple(d["frobenius"]["edge_flip"]),
        )

    def to_dot(self, name: str = "G") -> str:
        lines = [f'graph "{name}" {{', f'  label="{self.model} model";']
        for k, v in enumerate(self.vertices):
            shape = "ellipse" if v.kind == "stable-component" else "box"
            lines.append(f'  v{k} [label="{v.label} (g={v.genus})", shape={shape}, '
                         f'genus={v.genus}, kind="{v.kind}", frobenius="v{self.vertex_perm[k]}"];')
        for k, e in enumerate(self.edges):
            lines.append(f'  v{e.u} -- v{e.v} [label="{e.label}", thickness={e.thickness}, '
                         f'frobenius="e{self.edge_perm[k]}", flip={str(self.edge_flip[k]).lower()}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _as_branch_roots(cert: StarCertificate, node_list):
    """Per node, the smaller root u0 of u^2 + u = (split argument), in a quadratic extension."""
    FM = cert.residue_field
    big = fq_field(2, 2 * cert.M)
    emb = fq_embedding(FM, big)
    abar, rs, etabars = _split_data(cert)
    out = {}
    for nd in node_list:
        tau = emb(split_trace_argument(abar, rs, etabars, nd.pair_index))
        roots = roots_in_field(Poly(big, [tau, big.one, big.one]))
        assert len(roots) == 2
        out[nd.pair_index] = roots[0]
    return big, emb, out


def _orbit_flip_parity(edge_perm, flips, k):
    parity, j = False, k
    while True:
        parity ^= flips[j]
        j = edge_perm[j]
        if j == k:
            return parity


def stable_graph(cert: StarCertificate) -> DualGraph:
    """Dual graph of the geometric special fibre of the stable model, with Frobenius."""
    cert.require_certified()
    g = cert.genus
    node_list = nodes(cert)
    t = len(node_list)
    model = stable_model(cert)
    if is_geometrically_reducible(model.Qbar, model.Pbar) != (t == g + 1):
        raise ConsistencyError("component count disagrees with the number of nodes")

    pos = {nd.pair_index: k for k, nd in enumerate(node_list)}
    edge_perm = tuple(pos[cert.frobenius_perm[nd.pair_index]] for nd in node_list)
    big, _, u0 = _as_branch_roots(cert, node_list)
    q = cert.q
    flips = tuple(u0[nd.pair_index] ** q != u0[cert.frobenius_perm[nd.pair_index]] for nd in node_list)

    if t <= g:
        vertices = (Vertex(g - t, "stable-component", "C"),)
        edges = tuple(Edge(0, 0, nd.thickness, nd.pair_index, f"P{nd.pair_index + 1}") for nd in node_list)
        vertex_perm = (0,)
    else:
        lam = roots_in_field(Poly(big, [big(cert.a % 2), big.one, big.one]))
        swap = lam[0] ** q != lam[0]
        # branch u0 at each node lies on the component y = u0 * Qbar
        if any(u0[nd.pair_index] != lam[0] for nd in node_list):
            raise ConsistencyError("branch labels do not match component labels")
        if any(f != swap for f in flips):
            raise ConsistencyError("edge orientation flips disagree with the component swap")
        for nd in node_list:
            if (not nd.split) != (swap and nd.residue_degree % 2 == 1):
                raise ConsistencyError("split flag disagrees with the component swap")
        vertices = (Vertex(0, "stable-component", "C+"), Vertex(0, "stable-component", "C-"))
        edges = tuple(Edge(0, 1, nd.thickness, nd.pair_index, f"P{nd.pair_index + 1}") for nd in node_list)
        vertex_perm = (1, 0) if swap else (0, 1)

    for k, nd in enumerate(node_list):
        if _orbit_flip_parity(edge_perm, flips, k) != (not nd.split):
            raise ConsistencyError(f"Frobenius-power action on node {nd.pair_index} contradicts its split flag")
    graph = DualGraph("stable", vertices, edges, vertex_perm, edge_perm, flips)
    if not graph.is_automorphism() or graph.arithmetic_genus() != g:
        raise ConsistencyError("stable graph fails the automorphism or genus check")
    return graph


def _expand(stable: DualGraph) -> DualGraph:
    vertices = list(stable.vertices)
    paths = []  # per stable edge: vertex path and sub-edge indices
    edges = []
    for k, e in enumerate(stable.edges):
        path = [e.u]
        for j in range(1, e.thickness):
            vertices.append(Vertex(0, "chain-link", f"{e.label}.{j}"))
            path.append(len(vertices) - 1)
        path.append(e.v)
        sub = []
        for j in range(e.thickness):
            edges.append(Edge(path[j], path[j + 1], 1, e.node, f"{e.label}:{j}"))
            sub.append(len(edges) - 1)
        paths.append((path, sub))
    vertex_perm = list(stable.vertex_perm) + [None] * (len(vertices) - len(stable.vertices))
    edge_perm = [None] * len(edges)
    edge_flip = [False] * len(edges)
    for k, e in enumerate(stable.edges):
        n = e.thickness
        path, sub = paths[k]
        tpath, tsub = paths[stable.edge_perm[k]]
        flip = stable.edge_flip[k]
        for j in range(1, n):
            vertex_perm[path[j]] = tpath[n - j] if flip else tpath[j]
        for j in range(n):
            edge_perm[sub[j]] = tsub[n - 1 - j] if flip else tsub[j]
            edge_flip[sub[j]] = flip
    return DualGraph("minimal-regular", tuple(vertices), tuple(edges), tuple(vertex_perm),
                     tuple(edge_perm), tuple(edge_flip))


def minimal_regular_graph(cert: StarCertificate) -> DualGraph:
    """Replace each node of thickness n by a chain of n - 1 rational curves."""
    graph = _expand(stable_graph(cert))
    if not graph.is_automorphism() or graph.arithmetic_genus() != cert.genus:
        raise ConsistencyError("minimal regular graph fails the automorphism or genus check")
    return graph


def contract_chains(graph: DualGraph) -> tuple:
    """Suppress chain-link vertices; returns (vertex genera, sorted endpoint pairs, thicknesses)."""
    keep = [k for k, v in enumerate(graph.vertices) if v.kind != "chain-link"]
    by_node = {}
    for e in graph.edges:
        by_node.setdefault(e.node, []).append(e)
    result = []
    for node, es in sorted(by_node.items(), key=lambda kv: (kv[0] is None, kv[0])):
        ends = [v for e in es for v in (e.u, e.v) if v in keep]
        result.append((tuple(sorted(ends)), len(es)))
    return tuple(graph.vertices[k].genus for k in keep), tuple(result)


def orbit_report(graph: DualGraph) -> dict:
    """Frobenius orbit sizes on vertices and on edges."""
    return {"vertex_orbits": graph.vertex_orbits(), "edge_orbits": graph.edge_orbits()}
