"""Fast feature selection ranked by the sum of squared canonical correlations."""

from .correlation import CcaResult, cca, multiple_correlation_sq, pearson, principal_angles, ssc
from .dataset import EncodedDataset, dummy_encode, from_arrays, load_csv, synthetic_uniform, zscore
from .exceptions import (
    CcffsError,
    DataError,
    DegenerateDatasetError,
    DegenerateInputError,
    NoInformativeCandidateError,
)
from .kernels import DataMatrix
from .selector import Mode, SelectionReport, run, select

__version__ = "0.1.0"

__all__ = [
    "CcaResult",
    "CcffsError",
    "DataError",
    "DataMatrix",
    "DegenerateDatasetError",
    "DegenerateInputError",
    "EncodedDataset",
    "Mode",
    "NoInformativeCandidateError",
    "SelectionReport",
    "cca",
    "dummy_encode",
    "from_arrays",
    "load_csv",
    "multiple_correlation_sq",
    "pearson",
    "principal_angles",
    "run",
    "select",
    "ssc",
    "synthetic_uniform",
    "zscore",
]
