#!/usr/bin/env python3
"""
Write small datasets in the portable format

Produces the five-node two-clique graph and a seeded random graph, handy
for trying the gcn-lab commands without downloading a citation network.
"""

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from gcn_lab.graphio import compute_stats, random_dataset, toy_dataset, write_dataset  # noqa: E402

logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    parser.add_argument("out", type=Path, help="directory that receives one folder per dataset")
    parser.add_argument("--nodes", type=int, default=200, help="random graph size")
    parser.add_argument("--features", type=int, default=50)
    parser.add_argument("--classes", type=int, default=4)
    parser.add_argument("--edge-probability", type=float, default=0.03)
    parser.add_argument("--seed", type=int, default=0)
    return parser.parse_args()


def main():
    """Write toy/ and random/ under the output directory"""
    args = parse_args()
    rng = np.random.default_rng(args.seed)
    datasets = [
        toy_dataset(),
        random_dataset(args.nodes, args.features, args.classes, rng,
                       edge_probability=args.edge_probability),
    ]
    for dataset in datasets:
        directory = write_dataset(dataset, args.out / dataset.name)
        stats = compute_stats(dataset)
        logger.info(f"{directory}: {stats.nodes} nodes, {stats.edges} edges, "
                    f"{stats.classes} classes")


if __name__ == "__main__":
    main()
