"""Alignment-stable contractions for the streaming math.

BLAS dot/gemv kernels choose vectorization strategies from pointer
alignment, so the same values in a differently allocated array can give
answers that differ in the last ulp. Snapshots promise bit-identical
predictions after a round-trip, and structure changes reallocate weight
storage, so every hot-path contraction goes through elementwise multiply
plus numpy's pairwise sum, whose result depends only on operand values
and lengths.
"""

from __future__ import annotations

import math

import numpy as np

# Guard for data-dependent divisors (squared norms, scalar gains,
# step-size denominators).
EPS_REG = 1e-12


def vdot(a, b) -> float:
    """Bit-reproducible inner product of two 1-d float arrays."""
    return float(np.multiply(a, b).sum())


def matvec(M, v) -> np.ndarray:
    """Bit-reproducible matrix-vector product (row-wise reductions)."""
    return np.multiply(M, v).sum(axis=1)


def exact_sum(values) -> float:
    """Correctly rounded sum; invariant to appending zero terms.

    Aggregations over the node pool must not move by an ulp when a
    zero-weight node joins, which pairwise summation does not guarantee
    (its association depends on the length).
    """
    return math.fsum(values)


def exact_dot(a, b) -> float:
    """Correctly rounded inner product; used where the operand length
    tracks the (mutable) node pool size."""
    return math.fsum(np.multiply(a, b).tolist())
