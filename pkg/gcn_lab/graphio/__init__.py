from .dataset import SPLITS, UNLABELED, Dataset, DatasetMeta
from .loader import load_dataset, write_dataset
from .stats import REFERENCE_STATS, DatasetStats, compare_with_reference, compute_stats
from .synthetic import edges_to_adjacency, random_dataset, standard_split, toy_dataset

__all__ = [
    "Dataset",
    "DatasetMeta",
    "DatasetStats",
    "REFERENCE_STATS",
    "SPLITS",
    "UNLABELED",
    "compare_with_reference",
    "compute_stats",
    "edges_to_adjacency",
    "load_dataset",
    "random_dataset",
    "standard_split",
    "toy_dataset",
    "write_dataset",
]
