# 2026/09/08
"""
ensemble.py - Bagged OCSVM ensemble.

Defines OcsvmEnsemble and the functions 'train_bagged_ensemble' and
'ensemble_vote'. Each member trains on its own bootstrap resample, and the
ensemble answers with the majority of member verdicts. The member count is
odd, so votes never tie.

"""

from __future__ import annotations

import logging
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from uwids.anomaly.ocsvm import DEFAULT_GAMMA, DEFAULT_NU, OcsvmModel, train_ocsvm
from uwids.errors import ConfigurationError, TrainingError

logger = logging.getLogger(__name__)

DEFAULT_MEMBERS = 11


class OcsvmEnsemble:
    """Majority vote over an odd number of OcsvmModel members."""

    def __init__(self, members: list[OcsvmModel]) -> None:
        if not members or len(members) % 2 == 0:
            raise ConfigurationError(
                f"Ensemble size must be odd, not '{len(members)}'."
            )
        self.members = list(members)

    def votes(self, data: ArrayLike) -> np.ndarray:
        """Member verdicts, one row per member."""
        return np.vstack([m.predict(data) for m in self.members])

    def predict(self, data: ArrayLike) -> np.ndarray:
        return np.where(self.votes(data).sum(axis=0) > 0, 1, -1)

    def to_dict(self) -> dict[str, Any]:
        return {"members": [m.to_dict() for m in self.members]}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> OcsvmEnsemble:
        return cls([OcsvmModel.from_dict(m) for m in d["members"]])

    def __len__(self) -> int:
        return len(self.members)

    def __repr__(self) -> str:
        return f"<OcsvmEnsemble members={len(self.members)}>"


def train_bagged_ensemble(
    data: ArrayLike,
    k: int = DEFAULT_MEMBERS,
    nu: float = DEFAULT_NU,
    gamma: float = DEFAULT_GAMMA,
    seed: int = 0,
) -> OcsvmEnsemble:
    """Trains `k` members, each on an n-sized bootstrap resample of `data`."""
    if k < 1 or k % 2 == 0:
        raise ConfigurationError(f"Ensemble size must be odd, not '{k}'.")
    data = np.atleast_2d(np.asarray(data, dtype=float))
    if len(data) == 0:
        raise TrainingError("Cannot train an ensemble on empty data.")

    rng = np.random.default_rng(seed)
    members = []
    for member in range(k):
        sample = data[rng.integers(0, len(data), size=len(data))]
        members.append(train_ocsvm(sample, nu, gamma))
        logger.debug("Ensemble member %d/%d trained", member + 1, k)
    return OcsvmEnsemble(members)


def ensemble_vote(ensemble: OcsvmEnsemble, x: ArrayLike) -> int:
    """Majority verdict of the members for one vector."""
    x = np.asarray(x, dtype=float).ravel()
    return int(ensemble.predict(x[None, :])[0])
