"""Randomized sweeps: stable-model identities, the split criterion oracle and random curves."""

import argparse
import random
import time
from collections import Counter
from dataclasses import dataclass

from hyperdyadic.certify import certify
from hyperdyadic.errors import ConsistencyError
from hyperdyadic.fibre import minimal_regular_graph, nodes, split_by_enumeration, split_by_trace, stable_model_from_pairs
from hyperdyadic.synthetic import SyntheticConfig, random_curve, random_node_configuration, random_pair_data


@dataclass
class SweepConfig:
    identities: int = 1000
    splits: int = 1000
    curves: int = 60
    precision: int = 24
    max_m: int = 8
    seed: int = 1


def sweep_identities(cfg, rng):
    bad = 0
    for _ in range(cfg.identities):
        g = rng.choice([2, 3, 4])
        M = rng.randint(3 if g == 4 else 2, 4)
        _, gammas, etas = random_pair_data(g, M, cfg.precision, rng)
        try:
            stable_model_from_pairs(1 + 4 * rng.randint(-99, 99), gammas, etas)
        except ConsistencyError:
            bad += 1
    return bad


def sweep_splits(cfg, rng):
    bad = 0
    for _ in range(cfg.splits):
        args = random_node_configuration(rng.randint(1, cfg.max_m), rng.randint(2, 6), rng)
        bad += split_by_trace(*args) != split_by_enumeration(*args)
    return bad


def sweep_curves(cfg, rng):
    stats = Counter()
    for _ in range(cfg.curves):
        g = rng.choice([2, 3, 4])
        cert = certify(random_curve(SyntheticConfig(genus=g), rng))
        ns = nodes(cert)
        mr = minimal_regular_graph(cert)
        stats[(cert.verdict.value, len(ns), len(mr.vertices))] += 1
    return stats


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(SweepConfig()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    cfg = SweepConfig(**vars(ap.parse_args()))
    rng = random.Random(cfg.seed)
    t = time.time()
    print(f"identity failures: {sweep_identities(cfg, rng)} / {cfg.identities}")
    print(f"split disagreements: {sweep_splits(cfg, rng)} / {cfg.splits}")
    for key, n in sorted(sweep_curves(cfg, rng).items()):
        print(f"verdict {key[0]}, {key[1]} nodes, {key[2]} components in the minimal regular model: {n}")
    print(f"elapsed {time.time() - t:.1f}s")


if __name__ == "__main__":
    main()
