# 2026/09/06
"""
frames.py - uwids to pandas DataFrame utilities
"""

import pandas as pd

from uwids.etl.common import FEATURE_COLUMNS, LABEL_COLUMN
from uwids.model import FeatureVector


def features_to_frame(vectors: list[FeatureVector]) -> pd.DataFrame:
    """Converts feature vectors to a DataFrame with dataset column names.

    Categorical columns keep their raw category values, as strings.

    """
    columns = {attr: name for name, attr in FEATURE_COLUMNS.items()}
    columns["attack_cat"] = LABEL_COLUMN
    df = pd.DataFrame([v.to_dict() for v in vectors], columns=list(columns))
    return df.rename(columns=columns)
