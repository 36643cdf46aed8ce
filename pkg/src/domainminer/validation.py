"""Input coercion shared by the estimators."""
from __future__ import annotations

import numpy as np

from .core import ONE, STAR, ZERO, Digraph, PartialMatrix
from .errors import ArityError


def check_matrix(X, allow_stars=True) -> PartialMatrix:
    """Coerce ``X`` to a :class:`PartialMatrix`.

    Accepts a PartialMatrix, a Digraph, or an ``n x n`` / ``n x k x n`` array
    of 0/1 with unspecified cells given as -1 or NaN.
    """
    if isinstance(X, PartialMatrix):
        psm = X
    elif isinstance(X, Digraph):
        psm = PartialMatrix.from_digraph(X)
    else:
        arr = np.asarray(X)
        if arr.ndim not in (2, 3):
            raise ArityError(f"expected a 2-D or 3-D matrix, got {arr.ndim} dimensions")
        if arr.dtype == bool:
            cells = arr.astype(np.int8)
        else:
            arr = arr.astype(float)
            stars = np.isnan(arr) | (arr == STAR)
            if not np.isin(arr[~stars], (ZERO, ONE)).all():
                raise ValueError("matrix cells must be 0, 1, -1 or NaN")
            cells = np.where(stars, STAR, arr).astype(np.int8)
        psm = PartialMatrix(cells)
    if not allow_stars and not psm.is_complete:
        raise ValueError(f"matrix has {psm.n_stars} unspecified cells but must be complete")
    return psm


def check_triples(T, n, k) -> np.ndarray:
    """Validate an array of ``(u, a, v)`` queries against ``n`` entities and ``k`` rights."""
    arr = np.asarray(T)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ArityError("queries must be an array of (u, a, v) triples")
    if not np.issubdtype(arr.dtype, np.integer):
        raise ValueError("query indices must be integers")
    bounds = np.array([n, k, n])
    if ((arr < 0) | (arr >= bounds)).any():
        raise IndexError("query index out of range")
    return arr
