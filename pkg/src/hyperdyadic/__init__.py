"""Hyperelliptic curves over unramified extensions of Q_2 with (*)/(**) equations.

Certification of the equations, the stable model and its special fibre, dual
graphs with Frobenius action, cluster pictures and the reduction map on J[2].
"""

from .certify import CurveInput, FailReason, StarCertificate, Verdict, certify
from .clusters import ClusterPicture, odd_p_picture, picture_from_certificate, shifted_picture
from .fibre import DualGraph, minimal_regular_graph, nodes, split_flag, stable_graph, stable_model
from .two_torsion import Subgroup, TwoTorsionElt, dims, membership, reduction_kernel

__all__ = [
    "CurveInput", "FailReason", "StarCertificate", "Verdict", "certify",
    "ClusterPicture", "odd_p_picture", "picture_from_certificate", "shifted_picture",
    "DualGraph", "minimal_regular_graph", "nodes", "split_flag", "stable_graph", "stable_model",
    "Subgroup", "TwoTorsionElt", "dims", "membership", "reduction_kernel",
]
