"""Pytest configuration and fixtures for rimc-dora-calibration tests"""

import numpy as np
import pytest

from rimc_calibration.linalg import RngStream
from rimc_calibration.nn import (
    Dense,
    Network,
    ReLU,
    TrainHyper,
    build_preset,
    deploy_to_rimc,
    make_blobs,
    split_dataset,
    train_teacher,
)
from rimc_calibration.rram import DriftSpec


@pytest.fixture
def rng():
    """Seeded random stream"""
    return RngStream(1234)


@pytest.fixture
def small_mlp():
    """Untrained 5 -> 4 -> 3 MLP with seeded weights"""
    gen = np.random.default_rng(7)
    return Network(
        layers=[
            Dense(weight=gen.normal(size=(5, 4)), bias=gen.normal(size=4), in_features=5, out_features=4),
            ReLU(),
            Dense(weight=gen.normal(size=(4, 3)), bias=gen.normal(size=3), in_features=4, out_features=3),
        ],
        input_shape=(5,),
        num_classes=3,
    )


@pytest.fixture(scope="session")
def blob_splits():
    """4-class, 16-dim Gaussian blobs split into (train, test)"""
    data = make_blobs(num_classes=4, dims=16, n=800, seed=3, separation=3.0)
    return split_dataset(data, test_fraction=0.25, seed=3)


@pytest.fixture(scope="session")
def trained_teacher(blob_splits):
    """Preset MLP trained on the blob fixture"""
    train, _ = blob_splits
    net = build_preset("mlp", (16,), 4, RngStream(0))
    return train_teacher(net, train, TrainHyper(lr=0.05, momentum=0.9, epochs=8, batch=32, seed=0))


@pytest.fixture
def drifted_student(trained_teacher):
    """Teacher deployed at rho = 0.2"""
    return deploy_to_rimc(trained_teacher, DriftSpec(rho=0.2, seed=5))


@pytest.fixture
def tiny_document(tmp_path):
    """Small experiment document: 3-class blobs, short teacher and calibration runs"""
    return {
        "version": 1,
        "preset": "mlp",
        "seed": 0,
        "dataset": {"kind": "blobs", "classes": 3, "dims": 8, "n": 240, "seed": 1},
        "teacher": {"epochs": 3, "batch": 32, "lr": 0.05},
        "drift": {"rho": [0.1, 0.2], "seeds": [0, 1]},
        "calibration": {"methods": ["dora"], "ranks": [1, 2], "n_samples": [5], "epochs": 2},
        "output": {"dir": str(tmp_path / "run"), "format": "csv"},
    }


@pytest.fixture
def tiny_config(tiny_document):
    """ExperimentConfig parsed from tiny_document"""
    from rimc_calibration.services import parse_config

    return parse_config(tiny_document)
