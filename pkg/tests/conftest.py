"""
Shared fixtures
"""

import os
from pathlib import Path

import numpy as np
import pytest

from gcn_lab.graphio import load_dataset, random_dataset, toy_dataset, write_dataset
from gcn_lab.layers import LayerSpec, ModelConfig
from gcn_lab.training import TrainConfig


@pytest.fixture
def toy():
    """Two cliques bridged by one edge, identity features"""
    return toy_dataset()


@pytest.fixture
def toy_dir(tmp_path, toy):
    return write_dataset(toy, tmp_path / "toy")


@pytest.fixture
def small_random():
    return random_dataset(24, 6, 3, np.random.default_rng(7), edge_probability=0.2)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def plain_two_layer():
    """Two graph layers without dropout"""
    return ModelConfig(
        layers=[
            LayerSpec(kind="graph", out_dim=4, activation="relu", dropout=0.0),
            LayerSpec(kind="graph", in_dim=4, activation="none", dropout=0.0),
        ]
    )


@pytest.fixture
def quick_train():
    return TrainConfig(learning_rate=0.05, weight_decay=0.0, max_epochs=30,
                       early_stop_patience=30)


def _real_dataset(name: str):
    root = os.environ.get("GCN_LAB_DATA")
    if not root:
        pytest.skip("GCN_LAB_DATA not set")
    directory = Path(root) / name
    if not directory.is_dir():
        pytest.skip(f"{directory} not present")
    return load_dataset(directory)


@pytest.fixture
def cora():
    return _real_dataset("cora")


@pytest.fixture
def citeseer():
    return _real_dataset("citeseer")


@pytest.fixture
def pubmed():
    return _real_dataset("pubmed")
