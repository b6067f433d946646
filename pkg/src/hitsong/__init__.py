"""Billboard top-10 hit prediction toolkit.

Data cleaning and hit labeling, metadata feature engineering (chart
continuity bins, genre codes, title/lyrics topics from collapsed-Gibbs
LDA), SMOTE class balancing, forward feature selection, five classifiers
behind one score contract, and accuracy/AUC ablation reports.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    ConsistencyError,
    DataError,
    HitSongError,
    ParameterError,
    SchemaError,
    TrainingError,
)

__all__ = [
    "__version__",
    "HitSongError",
    "ConfigError",
    "SchemaError",
    "DataError",
    "ParameterError",
    "ConsistencyError",
    "TrainingError",
]
