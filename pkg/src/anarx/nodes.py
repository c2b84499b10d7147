"""Per-lag fuzzy nodes, each reduced to a linear-in-weights regressor.

Both node kinds expose the same two calls: ``regressor(y_lag, x_lag)``
builds the fuzzified feature vector and ``forward(y_lag, x_lag)`` returns
the dot product with the node's weights. Evaluation is pure given the
weights; updating the weights of one node never touches another.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateActivation, DimensionMismatch
from .membership import GaussianGrid, KnotGrid, eval_bspline, eval_gaussian
from .numerics import vdot


class NeoFuzzyNode:
    """Two nonlinear synapses on B-spline grids, summed.

    The regressor is the concatenation of the two degree vectors and the
    weights follow the same ordering (all y-synapse weights first). The
    output is piecewise polynomial in each input and exactly linear in the
    weights.
    """

    kind = "neo_fuzzy"

    def __init__(self, grid_y: KnotGrid, grid_x: KnotGrid, weights=None) -> None:
        self.grid_y = grid_y
        self.grid_x = grid_x
        dim = grid_y.h + grid_x.h
        if weights is None:
            weights = np.zeros(dim)
        else:
            weights = np.ascontiguousarray(weights, dtype=float)
        if weights.shape != (dim,):
            raise DimensionMismatch(
                f"weights must have length {dim}, got {weights.shape}"
            )
        self.weights = weights

    @property
    def dim(self) -> int:
        return self.grid_y.h + self.grid_x.h

    def regressor(self, y_lag: float, x_lag: float) -> np.ndarray:
        return np.concatenate(
            [eval_bspline(self.grid_y, y_lag), eval_bspline(self.grid_x, x_lag)]
        )

    def forward(self, y_lag: float, x_lag: float) -> float:
        return vdot(self.weights, self.regressor(y_lag, x_lag))


class WangMendelNode:
    """Two-input rule table with Gaussian antecedents and normalized firing.

    Rule i pairs the i-th membership function of each input; its firing
    strength is the product of the two degrees, normalized over all rules.
    The output is therefore a convex combination of the rule weights.
    """

    kind = "wang_mendel"

    def __init__(self, grid_y: GaussianGrid, grid_x: GaussianGrid, weights=None) -> None:
        if grid_y.h != grid_x.h:
            raise DimensionMismatch(
                f"rule pairing needs equal grid sizes, got {grid_y.h} and {grid_x.h}"
            )
        self.grid_y = grid_y
        self.grid_x = grid_x
        if weights is None:
            weights = np.zeros(grid_y.h)
        else:
            weights = np.ascontiguousarray(weights, dtype=float)
        if weights.shape != (grid_y.h,):
            raise DimensionMismatch(
                f"weights must have length {grid_y.h}, got {weights.shape}"
            )
        self.weights = weights

    @property
    def dim(self) -> int:
        return self.grid_y.h

    def regressor(self, y_lag: float, x_lag: float) -> np.ndarray:
        z = eval_gaussian(self.grid_y, y_lag) * eval_gaussian(self.grid_x, x_lag)
        total = float(z.sum())
        if total <= 0.0:
            raise DegenerateActivation(
                f"all rule activations underflowed at ({y_lag}, {x_lag})"
            )
        return z / total

    def forward(self, y_lag: float, x_lag: float) -> float:
        return vdot(self.weights, self.regressor(y_lag, x_lag))
