"""Evaluation metrics and fold splitting for the benchmark harness."""

from __future__ import annotations

from typing import List, Tuple

import numpy as np

from .context import BitVec


def f1_score(y_true, y_pred) -> float:
    """2TP / (2TP + FP + FN); defined as 0 when the denominator vanishes."""
    t = np.asarray(y_true, dtype=float)
    p = np.asarray(y_pred, dtype=float)
    if t.shape != p.shape:
        raise ValueError(f"length mismatch: {t.shape} vs {p.shape}")
    if not np.all((t == 0) | (t == 1)) or not np.all((p == 0) | (p == 1)):
        raise ValueError("f1_score expects binary 0/1 values")
    tp = float(np.sum((t == 1) & (p == 1)))
    fp = float(np.sum((t == 0) & (p == 1)))
    fn = float(np.sum((t == 1) & (p == 0)))
    denom = 2 * tp + fp + fn
    return 0.0 if denom == 0 else 2 * tp / denom


def wape(y_true, y_pred) -> float:
    """Sum of absolute errors over sum of absolute true values."""
    t = np.asarray(y_true, dtype=float)
    p = np.asarray(y_pred, dtype=float)
    if t.shape != p.shape:
        raise ValueError(f"length mismatch: {t.shape} vs {p.shape}")
    scale = float(np.sum(np.abs(t)))
    if scale == 0:
        raise ValueError("wape undefined for all-zero true values")
    return float(np.sum(np.abs(t - p)) / scale)


def kfold_split(n: int, k: int, seed: int) -> List[Tuple[BitVec, BitVec]]:
    """Shuffled disjoint folds covering range(n); sizes differ by at most one."""
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}, n={n}")
    perm = np.random.default_rng(seed).permutation(n)
    out = []
    for chunk in np.array_split(perm, k):
        test = BitVec.from_indices(n, chunk)
        out.append((test.complement(), test))
    return out
