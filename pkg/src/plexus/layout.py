"""Deterministic incremental spring-embedder layout.

Classic force-directed scheme: repulsion k^2/d between every node pair,
attraction d^2/k along every edge, k = C*sqrt(L^2/n). Displacements are
capped by a temperature that decays geometrically, which also bounds the
convergence horizon: once temperature < eps the sweep is quiescent by
construction.

Determinism contract: fixed seed + identical call order => bit-identical
positions. The sweep is synchronous (forces read sweep-start positions) and
all force sums accumulate in ascending node-id / edge-id order, so there is
no dependence on dict insertion history.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional

from .graph import GraphSnapshot

MIN_DISTANCE = 0.01


class LayoutError(Exception):
    pass


class PlacementError(LayoutError):
    """Duplicate placement, unknown neighbor, or sweep over an unplaced node."""


@dataclass(frozen=True)
class LayoutParams:
    L: float = 1000.0
    C: float = 1.0
    t0: Optional[float] = None        # defaults to L/10
    cooling: float = 0.95
    eps: Optional[float] = None       # defaults to 0.001*L
    max_iters: int = 2000
    seed: int = 0

    def __post_init__(self):
        if self.t0 is None:
            object.__setattr__(self, "t0", self.L / 10.0)
        if self.eps is None:
            object.__setattr__(self, "eps", 0.001 * self.L)
        if self.L <= 0:
            raise ValueError("L must be positive")
        if self.C <= 0:
            raise ValueError("C must be positive")
        if not 0 < self.cooling < 1:
            raise ValueError("cooling must be in (0, 1)")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.t0 <= 0:
            raise ValueError("t0 must be positive")
        if self.max_iters < 0:
            raise ValueError("max_iters must be non-negative")


class LayoutState:
    """Positions + temperature + seeded RNG; confined to one writer."""

    __slots__ = ("params", "positions", "temperature", "rng")

    def __init__(self, params: LayoutParams):
        self.params = params
        self.positions: dict[str, tuple[float, float]] = {}
        self.temperature = params.t0
        self.rng = random.Random(params.seed)


def spring_length(params: LayoutParams, n: int) -> float:
    return params.C * math.sqrt(params.L * params.L / n)


def place_new_node(state: LayoutState, node_id: str, neighbor_id: Optional[str] = None) -> tuple[float, float]:
    """Jitter within k/4 of the neighbor, else uniform in the L x L frame."""
    if node_id in state.positions:
        raise PlacementError(f"node {node_id!r} already placed")
    if neighbor_id is not None:
        if neighbor_id not in state.positions:
            raise PlacementError(f"neighbor {neighbor_id!r} not placed")
        radius = spring_length(state.params, len(state.positions) + 1) / 4.0
        # sqrt keeps the sample uniform over the disk, not clumped at center
        r = radius * math.sqrt(state.rng.random())
        theta = state.rng.random() * 2.0 * math.pi
        nx, ny = state.positions[neighbor_id]
        position = (nx + r * math.cos(theta), ny + r * math.sin(theta))
    else:
        position = (
            state.rng.uniform(0.0, state.params.L),
            state.rng.uniform(0.0, state.params.L),
        )
    state.positions[node_id] = position
    return position


def remove_node(state: LayoutState, node_id: str) -> None:
    if node_id not in state.positions:
        raise PlacementError(f"node {node_id!r} not placed")
    del state.positions[node_id]


def step(state: LayoutState, snapshot: GraphSnapshot, params: LayoutParams) -> tuple[LayoutState, float]:
    """One synchronous sweep; returns (state, max applied displacement)."""
    ids = sorted(snapshot.nodes)
    for node_id in ids:
        if node_id not in state.positions:
            raise PlacementError(f"node {node_id!r} has no position")
    n = len(ids)
    if n == 0:
        state.temperature *= params.cooling
        return state, 0.0
    k = spring_length(params, n)
    pos = state.positions
    disp = {node_id: (0.0, 0.0) for node_id in ids}

    for v in ids:
        xv, yv = pos[v]
        dx, dy = disp[v]
        for u in ids:
            if u == v:
                continue
            delta_x = xv - pos[u][0]
            delta_y = yv - pos[u][1]
            dist = math.hypot(delta_x, delta_y)
            d = dist if dist > MIN_DISTANCE else MIN_DISTANCE
            force = k * k / d
            dx += delta_x / d * force
            dy += delta_y / d * force
        disp[v] = (dx, dy)

    for edge_key in sorted(snapshot.edges):
        edge = snapshot.edges[edge_key]
        sx, sy = pos[edge.source]
        tx, ty = pos[edge.target]
        delta_x = sx - tx
        delta_y = sy - ty
        dist = math.hypot(delta_x, delta_y)
        d = dist if dist > MIN_DISTANCE else MIN_DISTANCE
        force = d * d / k
        pull_x = delta_x / d * force
        pull_y = delta_y / d * force
        dxs, dys = disp[edge.source]
        disp[edge.source] = (dxs - pull_x, dys - pull_y)
        dxt, dyt = disp[edge.target]
        disp[edge.target] = (dxt + pull_x, dyt + pull_y)

    max_disp = 0.0
    t = state.temperature
    for v in ids:
        dx, dy = disp[v]
        length = math.hypot(dx, dy)
        if length > t:
            scale = t / length
            dx *= scale
            dy *= scale
            length = math.hypot(dx, dy)
        if not (math.isfinite(dx) and math.isfinite(dy)):
            raise LayoutError(f"non-finite displacement for {v!r}")
        x, y = pos[v]
        pos[v] = (x + dx, y + dy)
        if length > max_disp:
            max_disp = length

    state.temperature = t * params.cooling
    return state, max_disp


def run_until_stable(state: LayoutState, snapshot: GraphSnapshot, params: LayoutParams) -> tuple[LayoutState, int]:
    """Sweep until max displacement < eps or max_iters; returns sweeps used."""
    iterations = 0
    for _ in range(params.max_iters):
        state, max_disp = step(state, snapshot, params)
        iterations += 1
        if max_disp < params.eps:
            break
    return state, iterations
