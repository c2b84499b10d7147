"""Additive per-lag model: delay lines, a node pool, and online training.

The model output is the sum of the node outputs, node ``l`` fed with the
values observed ``l`` steps ago. Nodes are tuned while the stream runs,
and the pool itself can grow or shrink without disturbing the surviving
nodes.

Two training wirings exist:

* ``stacked`` - one learner over the concatenated regressor, so all node
  weights are fit jointly against the stream value (the additive output
  is linear in every weight, making this a single linear regression).
* ``independent`` - each node's learner fits that node alone against the
  stream value, turning every node into a standalone one-step predictor;
  this is the wiring the weighted ensemble builds on.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import AnarxError
from .learning import learner_from_state, make_learner
from .numerics import exact_sum, vdot
from .membership import GaussianGrid, KnotGrid, build_gaussian_grid, build_uniform_grid
from .nodes import NeoFuzzyNode, WangMendelNode

# Upper bound on retained per-node contribution history for evolution stats.
_CONTRIB_CAP = 4096


class DelayLine:
    """Most-recent-first buffer of past observations."""

    def __init__(self, capacity: int) -> None:
        if capacity < 1:
            raise ValueError(f"capacity must be positive, got {capacity}")
        self.capacity = int(capacity)
        self._buf: list[float] = []

    def push(self, value: float) -> None:
        self._buf.insert(0, float(value))
        del self._buf[self.capacity :]

    def lag(self, l: int):
        """Value observed ``l`` steps ago, or None before it exists."""
        if 1 <= l <= len(self._buf):
            return self._buf[l - 1]
        return None

    def ensure_capacity(self, capacity: int) -> None:
        if capacity > self.capacity:
            self.capacity = int(capacity)

    def __len__(self) -> int:
        return len(self._buf)

    def snapshot(self) -> list[float]:
        return list(self._buf)

    def restore(self, values) -> None:
        self._buf = [float(v) for v in values]
        self.ensure_capacity(len(self._buf))
        del self._buf[self.capacity :]


@dataclass
class EvolutionPolicy:
    """Thresholds steering structural growth and pruning."""

    window: int = 100
    add_threshold: float = 0.15
    remove_threshold: float = 0.05
    n_min: int = 1
    n_max: int = 10

    def __post_init__(self) -> None:
        if self.window < 1:
            raise ValueError("window must be positive")
        if self.n_min > self.n_max or self.n_min < 1:
            raise ValueError("need 1 <= n_min <= n_max")
        if not self.add_threshold > self.remove_threshold >= 0.0:
            raise ValueError("need add_threshold > remove_threshold >= 0")


class StructureChange(enum.Enum):
    NONE = "none"
    ADDED = "added"
    REMOVED = "removed"


@dataclass
class StepReport:
    """Per-step result of :meth:`AnarxModel.train_step`.

    ``prediction`` is the additive model output from pre-update weights;
    ``node_predictions`` holds the individual node outputs that summed to
    it (zeros for nodes whose lag is not observed yet). ``skipped`` lists
    (node index, reason) for nodes whose update failed or was deferred.
    """

    prediction: float
    error: float
    node_predictions: np.ndarray
    skipped: list = field(default_factory=list)


class AnarxModel:
    """Ordered pool of per-lag nodes with online learning."""

    def __init__(
        self,
        nodes,
        *,
        mode: str = "nar",
        training: str = "stacked",
        learner: str = "rls",
        alpha: float = 1.0,
        p0: float = 1e4,
    ) -> None:
        nodes = list(nodes)
        if not nodes:
            raise ValueError("need at least one node")
        kinds = {type(node) for node in nodes}
        if len(kinds) != 1:
            raise ValueError("node pool must be homogeneous")
        if mode not in ("nar", "narx"):
            raise ValueError(f"mode must be 'nar' or 'narx', got {mode!r}")
        if training not in ("stacked", "independent"):
            raise ValueError(
                f"training must be 'stacked' or 'independent', got {training!r}"
            )
        self.nodes = nodes
        self.mode = mode
        self.training = training
        self.learner_kind = learner
        self.alpha = float(alpha)
        self.p0 = float(p0)
        self.delay_y = DelayLine(len(nodes))
        self.delay_x = DelayLine(len(nodes))
        self._contrib: deque = deque(maxlen=_CONTRIB_CAP)
        if training == "stacked":
            self._init_stacked(preserve=True)
        else:
            self.learners = [
                make_learner(learner, node.weights, alpha=alpha, p0=p0)
                for node in nodes
            ]
            self.stacked_learner = None

    # -- structure ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.nodes)

    def _init_stacked(self, preserve: bool) -> None:
        dims = [node.dim for node in self.nodes]
        total = int(sum(dims))
        w = np.zeros(total)
        if preserve:
            offset = 0
            for node, dim in zip(self.nodes, dims):
                w[offset : offset + dim] = node.weights
                offset += dim
        self.stacked_learner = make_learner(
            self.learner_kind, w, alpha=self.alpha, p0=self.p0
        )
        self.learners = None
        self._rebind_views()

    def _rebind_views(self) -> None:
        """Point node weight arrays at slices of the stacked weight vector."""
        w = self.stacked_learner.w
        offset = 0
        for node in self.nodes:
            node.weights = w[offset : offset + node.dim]
            offset += node.dim

    def _fresh_node(self):
        template = self.nodes[-1]
        if isinstance(template, NeoFuzzyNode):
            return NeoFuzzyNode(template.grid_y, template.grid_x)
        return WangMendelNode(template.grid_y, template.grid_x)

    def add_node(self) -> None:
        """Append node n+1 with zero weights and fresh learner state."""
        node = self._fresh_node()
        self.nodes.append(node)
        if self.training == "stacked":
            self.stacked_learner.extend(node.dim)
            self._rebind_views()
        else:
            self.learners.append(
                make_learner(self.learner_kind, node.weights, alpha=self.alpha, p0=self.p0)
            )
        self.delay_y.ensure_capacity(self.n)
        self.delay_x.ensure_capacity(self.n)
        self._contrib.clear()

    def remove_last_node(self) -> None:
        if self.n <= 1:
            raise ValueError("cannot remove the only node")
        node = self.nodes.pop()
        if self.training == "stacked":
            self.stacked_learner.truncate(self.stacked_learner.dim - node.dim)
            self._rebind_views()
        else:
            self.learners.pop()
        self._contrib.clear()

    def evolve(self, policy: EvolutionPolicy, window_rmse: float) -> StructureChange:
        """Apply at most one structural change based on recent error level.

        Growth needs only the error signal; pruning additionally requires
        the last node's recent mean |contribution| to be the smallest in
        the pool, measured over the policy window since the last change.
        """
        if window_rmse > policy.add_threshold and self.n < policy.n_max:
            self.add_node()
            return StructureChange.ADDED
        if window_rmse < policy.remove_threshold and self.n > policy.n_min:
            if len(self._contrib) >= policy.window:
                recent = np.abs(
                    np.asarray(list(self._contrib)[-policy.window :], dtype=float)
                )
                means = recent.mean(axis=0)
                if int(np.argmin(means)) == self.n - 1:
                    self.remove_last_node()
                    return StructureChange.REMOVED
        return StructureChange.NONE

    # -- evaluation ----------------------------------------------------

    def _lag_pair(self, l: int):
        y_lag = self.delay_y.lag(l)
        if y_lag is None:
            return None
        if self.mode == "nar":
            return y_lag, y_lag
        x_lag = self.delay_x.lag(l)
        if x_lag is None:
            return None
        return y_lag, x_lag

    def node_forecasts(self) -> np.ndarray:
        """Every node's output at its lag; zero where the lag is unseen."""
        out = np.zeros(self.n)
        for i, node in enumerate(self.nodes):
            pair = self._lag_pair(i + 1)
            if pair is not None:
                out[i] = node.forward(*pair)
        return out

    def forward(self) -> float:
        """Additive model output at the current position in the stream."""
        return exact_sum(self.node_forecasts().tolist())

    def observe(self, y_new: float, x_new=None) -> None:
        """Shift the delay lines without touching any weights."""
        if self.mode == "narx":
            if x_new is None:
                raise ValueError("narx mode needs the exogenous value")
            self.delay_x.push(x_new)
        self.delay_y.push(y_new)

    # -- training --------------------------------------------------------

    def train_step(self, y_new: float, x_new=None) -> StepReport:
        """One online step: predict y_new, update weights, shift delays."""
        regressors = []
        node_preds = np.zeros(self.n)
        for i, node in enumerate(self.nodes):
            pair = self._lag_pair(i + 1)
            if pair is None:
                regressors.append(None)
                continue
            phi = node.regressor(*pair)
            regressors.append(phi)
            node_preds[i] = vdot(node.weights, phi)
        prediction = exact_sum(node_preds.tolist())
        error = float(y_new) - prediction

        skipped = [(i, "lag not observed yet") for i, r in enumerate(regressors) if r is None]
        if self.training == "stacked":
            if any(phi is not None for phi in regressors):
                stacked = np.concatenate(
                    [
                        phi if phi is not None else np.zeros(node.dim)
                        for node, phi in zip(self.nodes, regressors)
                    ]
                )
                try:
                    self.stacked_learner.step(stacked, y_new)
                except AnarxError as exc:
                    skipped.extend(
                        (i, str(exc)) for i, phi in enumerate(regressors) if phi is not None
                    )
        else:
            for i, (learner, phi) in enumerate(zip(self.learners, regressors)):
                if phi is None:
                    continue
                try:
                    learner.step(phi, y_new)
                except AnarxError as exc:
                    skipped.append((i, str(exc)))

        self.observe(y_new, x_new)
        self._contrib.append(node_preds.copy())
        return StepReport(prediction, error, node_preds, skipped)

    # -- bookkeeping -----------------------------------------------------

    def parameter_count(self) -> int:
        return int(sum(node.dim for node in self.nodes))

    def state_dict(self) -> dict:
        state = {
            "mode": self.mode,
            "training": self.training,
            "learner": self.learner_kind,
            "alpha": self.alpha,
            "p0": self.p0,
            "node_kind": self.nodes[0].kind,
            "nodes": [
                {
                    "grid_y": node.grid_y.to_dict(),
                    "grid_x": node.grid_x.to_dict(),
                    "weights": node.weights.tolist(),
                }
                for node in self.nodes
            ],
            "delay_y": self.delay_y.snapshot(),
            "delay_x": self.delay_x.snapshot(),
        }
        if self.training == "stacked":
            state["stacked_state"] = self.stacked_learner.state_dict()
        else:
            state["learner_states"] = [ln.state_dict() for ln in self.learners]
        return state

    @classmethod
    def from_state(cls, state: dict) -> "AnarxModel":
        node_kind = state["node_kind"]
        nodes = []
        for nd in state["nodes"]:
            if node_kind == "neo_fuzzy":
                gy = KnotGrid.from_dict(nd["grid_y"])
                gx = KnotGrid.from_dict(nd["grid_x"])
                nodes.append(NeoFuzzyNode(gy, gx, nd["weights"]))
            else:
                gy = GaussianGrid.from_dict(nd["grid_y"])
                gx = GaussianGrid.from_dict(nd["grid_x"])
                nodes.append(WangMendelNode(gy, gx, nd["weights"]))
        model = cls(
            nodes,
            mode=state["mode"],
            training=state["training"],
            learner=state["learner"],
            alpha=state["alpha"],
            p0=state["p0"],
        )
        if model.training == "stacked":
            restored = learner_from_state(state["stacked_state"])
            model.stacked_learner = restored
            model._rebind_views()
        else:
            model.learners = []
            for node, ls in zip(model.nodes, state["learner_states"]):
                node.weights[:] = np.asarray(ls["w"], dtype=float)
                model.learners.append(learner_from_state(ls, node.weights))
        model.delay_y.restore(state["delay_y"])
        model.delay_x.restore(state["delay_x"])
        return model


def build_anarx(
    n_nodes: int,
    h: int,
    lo: float,
    hi: float,
    *,
    q: int = 2,
    node_kind: str = "neo_fuzzy",
    mode: str = "nar",
    training: str = "stacked",
    learner: str = "rls",
    alpha: float = 1.0,
    p0: float = 1e4,
) -> AnarxModel:
    """Build a homogeneous pool of ``n_nodes`` zero-weight nodes on [lo, hi]."""
    if n_nodes < 1:
        raise ValueError(f"n_nodes must be positive, got {n_nodes}")
    if node_kind == "neo_fuzzy":
        grid = build_uniform_grid(lo, hi, h, q)
        nodes = [NeoFuzzyNode(grid, grid) for _ in range(n_nodes)]
    elif node_kind == "wang_mendel":
        grid = build_gaussian_grid(lo, hi, h)
        nodes = [WangMendelNode(grid, grid) for _ in range(n_nodes)]
    else:
        raise ValueError(f"unknown node kind {node_kind!r}")
    return AnarxModel(
        nodes, mode=mode, training=training, learner=learner, alpha=alpha, p0=p0
    )
