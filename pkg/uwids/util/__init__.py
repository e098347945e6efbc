# 2026/09/03
"""Utility functions for uwids package"""

from itertools import product
from typing import Any

from .find import find, find_first


def dict_product(d: dict[str, list[Any]]) -> list[dict[str, Any]]:
    """Expands a dictionary of candidate values into every combination.

    Used to lay out parameter grids, e.g.:
        {'n_trees': [20, 40], 'detector': ['adwin', 'ddm']}
    gives four dictionaries, varying the last key fastest.

    """
    names = list(d)
    return [dict(zip(names, combo)) for combo in product(*(d[n] for n in names))]
