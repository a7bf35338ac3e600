import pytest

from handoffsim.decision import canonical_dataset
from handoffsim.neuralnet import TrainConfig, train


@pytest.fixture(scope="session")
def trained_net():
    """One converged network shared across tests (default config)."""
    return train(canonical_dataset(), TrainConfig()).weights
