"""
Portable dataset format

A dataset directory holds plain UTF-8 text files, one record per line,
`#` starting a comment:

    meta.json        {"name", "num_nodes", "num_features", "num_classes"}
    graph.edges      u v                    (undirected, 0-based)
    features.sparse  node feature_index value
    labels.txt       node class_index       (labeled nodes only)
    train.idx, val.idx, test.idx            one node id per line

Malformed lines are hard errors carrying file and line number.
"""

import json
import logging
from pathlib import Path
from typing import Callable, Iterator, List, Optional, Tuple, Union

import numpy as np
from pydantic import ValidationError

from ..errors import ContractViolation, DatasetFormatError
from ..tensorcore import SparseMatrix
from .dataset import SPLITS, UNLABELED, Dataset, DatasetMeta

logger = logging.getLogger(__name__)

META_FILE = "meta.json"
EDGES_FILE = "graph.edges"
FEATURES_FILE = "features.sparse"
LABELS_FILE = "labels.txt"
SPLIT_FILES = {split: f"{split}.idx" for split in SPLITS}

PathLike = Union[str, Path]


def _require(directory: Path, filename: str) -> Path:
    path = directory / filename
    if not path.is_file():
        raise FileNotFoundError(f"Dataset file not found: {path}")
    return path


def _records(path: Path, arity: int) -> Iterator[Tuple[int, List[str]]]:
    """Yield (line number, fields) for every non-empty, non-comment line"""
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            fields = text.split()
            if len(fields) != arity:
                raise DatasetFormatError(
                    path, line_no, f"expected {arity} field(s), found {len(fields)}"
                )
            yield line_no, fields


def _parse(path: Path, line_no: int, token: str, kind: Callable, what: str):
    try:
        return kind(token)
    except ValueError:
        raise DatasetFormatError(path, line_no, f"invalid {what} {token!r}") from None


def _node(path: Path, line_no: int, token: str, num_nodes: int) -> int:
    node = _parse(path, line_no, token, int, "node id")
    if not 0 <= node < num_nodes:
        raise DatasetFormatError(path, line_no, f"node {node} outside 0..{num_nodes - 1}")
    return node


def _read_meta(directory: Path) -> DatasetMeta:
    path = _require(directory, META_FILE)
    try:
        return DatasetMeta.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as e:
        raise DatasetFormatError(path, None, f"invalid metadata: {e}") from None


def _read_edges(directory: Path, num_nodes: int) -> SparseMatrix:
    path = _require(directory, EDGES_FILE)
    pairs = []
    self_loops = 0
    for line_no, (u, v) in _records(path, 2):
        a, b = _node(path, line_no, u, num_nodes), _node(path, line_no, v, num_nodes)
        if a == b:
            self_loops += 1
            continue
        pairs.append((min(a, b), max(a, b)))
    if self_loops:
        logger.info(f"{path.name}: stripped {self_loops} self-loop(s)")

    edges = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    if len(edges):
        edges = np.unique(edges, axis=0)
    if len(edges) < len(pairs):
        logger.info(f"{path.name}: collapsed {len(pairs) - len(edges)} duplicate edge(s)")
    rows = np.concatenate((edges[:, 0], edges[:, 1]))
    cols = np.concatenate((edges[:, 1], edges[:, 0]))
    return SparseMatrix.from_coo(rows, cols, None, (num_nodes, num_nodes))


def _read_features(directory: Path, meta: DatasetMeta) -> SparseMatrix:
    path = _require(directory, FEATURES_FILE)
    rows, cols, values = [], [], []
    for line_no, (node, feature, value) in _records(path, 3):
        rows.append(_node(path, line_no, node, meta.num_nodes))
        index = _parse(path, line_no, feature, int, "feature index")
        if not 0 <= index < meta.num_features:
            raise DatasetFormatError(
                path, line_no, f"feature {index} outside 0..{meta.num_features - 1}"
            )
        cols.append(index)
        number = _parse(path, line_no, value, float, "feature value")
        if not np.isfinite(number):
            raise DatasetFormatError(path, line_no, f"non-finite feature value {value!r}")
        values.append(number)
    return SparseMatrix.from_coo(
        np.array(rows, dtype=np.int64),
        np.array(cols, dtype=np.int64),
        np.array(values, dtype=np.float64),
        (meta.num_nodes, meta.num_features),
    )


def _read_labels(directory: Path, meta: DatasetMeta) -> np.ndarray:
    path = _require(directory, LABELS_FILE)
    labels = np.full(meta.num_nodes, UNLABELED, dtype=np.int64)
    for line_no, (node, label) in _records(path, 2):
        index = _node(path, line_no, node, meta.num_nodes)
        cls = _parse(path, line_no, label, int, "class index")
        if not 0 <= cls < meta.num_classes:
            raise DatasetFormatError(
                path, line_no, f"class {cls} outside 0..{meta.num_classes - 1}"
            )
        if labels[index] not in (UNLABELED, cls):
            raise DatasetFormatError(path, line_no, f"conflicting labels for node {index}")
        labels[index] = cls
    return labels


def _read_split(directory: Path, split: str, num_nodes: int, labels: np.ndarray) -> np.ndarray:
    path = _require(directory, SPLIT_FILES[split])
    nodes = []
    for line_no, (node,) in _records(path, 1):
        index = _node(path, line_no, node, num_nodes)
        if split == "train" and labels[index] == UNLABELED:
            raise DatasetFormatError(path, line_no, f"train node {index} has no label")
        nodes.append(index)
    return np.array(nodes, dtype=np.int64)


def load_dataset(
    path: PathLike, name: Optional[str] = None, normalize_features: bool = True
) -> Dataset:
    """
    Load and validate a dataset directory

    Args:
        path: dataset directory
        name: dataset name; defaults to the name in meta.json
        normalize_features: divide every feature row by its sum

    Returns:
        Validated Dataset with a symmetric, loop-free adjacency
    """
    directory = Path(path)
    if not directory.is_dir():
        raise FileNotFoundError(f"Dataset directory not found: {directory}")

    meta = _read_meta(directory)
    if name and name.lower() != meta.name.lower():
        logger.warning(f"Requested dataset {name!r} but {META_FILE} names {meta.name!r}")

    adjacency = _read_edges(directory, meta.num_nodes)
    features = _read_features(directory, meta)
    if normalize_features:
        features = features.row_normalize()
    labels = _read_labels(directory, meta)
    splits = {split: _read_split(directory, split, meta.num_nodes, labels) for split in SPLITS}

    try:
        dataset = Dataset(
            name=name or meta.name,
            adjacency=adjacency,
            features=features,
            labels=labels,
            num_classes=meta.num_classes,
            train_index=splits["train"],
            val_index=splits["val"],
            test_index=splits["test"],
            metadata={"source": str(directory)},
        )
    except ContractViolation as e:
        raise DatasetFormatError(directory, None, str(e)) from None

    logger.info(
        f"Loaded {dataset.name}: {dataset.num_nodes} nodes, {dataset.num_edges} edges, "
        f"{dataset.num_features} features, {dataset.num_classes} classes"
    )
    return dataset


def write_dataset(dataset: Dataset, path: PathLike) -> Path:
    """Write a dataset in the portable format (features written as stored)"""
    directory = Path(path)
    directory.mkdir(parents=True, exist_ok=True)

    meta = DatasetMeta(
        name=dataset.name,
        num_nodes=dataset.num_nodes,
        num_features=dataset.num_features,
        num_classes=dataset.num_classes,
    )
    (directory / META_FILE).write_text(json.dumps(meta.model_dump(), indent=2), encoding="utf-8")

    adjacency = dataset.adjacency
    upper = adjacency.row_ids < adjacency.col_indices
    with open(directory / EDGES_FILE, "w", encoding="utf-8") as handle:
        handle.write("# u v\n")
        for u, v in zip(adjacency.row_ids[upper], adjacency.col_indices[upper]):
            handle.write(f"{u} {v}\n")

    features = dataset.features
    with open(directory / FEATURES_FILE, "w", encoding="utf-8") as handle:
        for node, feature, value in zip(features.row_ids, features.col_indices, features.values):
            handle.write(f"{node} {feature} {float(value)!r}\n")

    with open(directory / LABELS_FILE, "w", encoding="utf-8") as handle:
        for node in np.flatnonzero(dataset.labels != UNLABELED):
            handle.write(f"{node} {dataset.labels[node]}\n")

    for split in SPLITS:
        with open(directory / SPLIT_FILES[split], "w", encoding="utf-8") as handle:
            for node in dataset.split_index(split):
                handle.write(f"{node}\n")

    logger.info(f"Wrote dataset {dataset.name} to {directory}")
    return directory
