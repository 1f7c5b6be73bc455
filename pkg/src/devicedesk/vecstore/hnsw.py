"""Hierarchical navigable small-world graph over L2-normalized vectors.

The inner loops (layer search, neighbor selection) run in the compiled
kernel when available; this module owns graph state, level assignment, and
incremental linking. Construction is deterministic for a fixed level seed
and insertion order, and the graph serializes exactly (adjacency is stored,
never rebuilt on load).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .. import _kernel

_LEVEL_CAP = 48


@dataclass(frozen=True)
class HnswParams:
    """Graph construction/search knobs.

    ef_search defaults to 512: on the shipped recall benchmark (uniform
    random 256-d unit vectors, the least navigable regime) beam widths near
    64 cap out around 0.5 recall@10 regardless of construction quality, so
    the default is sized for the >= 0.95 recall contract instead.
    """

    M: int = 16
    ef_construction: int = 200
    ef_search: int = 512
    level_seed: int = 0

    def __post_init__(self):
        if self.M < 2:
            raise ValueError("M must be >= 2")

    def to_dict(self) -> dict:
        return {
            "M": self.M,
            "ef_construction": self.ef_construction,
            "ef_search": self.ef_search,
            "level_seed": self.level_seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HnswParams":
        return cls(
            M=int(d["M"]),
            ef_construction=int(d["ef_construction"]),
            ef_search=int(d["ef_search"]),
            level_seed=int(d["level_seed"]),
        )


class _Level:
    """Fixed-degree adjacency for one layer; rows indexed by global node id."""

    __slots__ = ("deg_cap", "adj", "cnt")

    def __init__(self, deg_cap: int, capacity: int):
        self.deg_cap = deg_cap
        self.adj = np.full((capacity, deg_cap), -1, dtype=np.int32)
        self.cnt = np.zeros(capacity, dtype=np.int32)

    def grow(self, capacity: int):
        if capacity <= self.adj.shape[0]:
            return
        adj = np.full((capacity, self.deg_cap), -1, dtype=np.int32)
        adj[: self.adj.shape[0]] = self.adj
        cnt = np.zeros(capacity, dtype=np.int32)
        cnt[: self.cnt.shape[0]] = self.cnt
        self.adj, self.cnt = adj, cnt


class HnswIndex:
    def __init__(self, dimension: int, params: HnswParams | None = None):
        self.dimension = dimension
        self.params = params or HnswParams()
        self.m0 = 2 * self.params.M
        self.ml = 1.0 / math.log(self.params.M)
        self.count = 0
        self.entry_point = -1
        self.max_level = -1
        self.levels: list[_Level] = []
        self._capacity = 256
        self._vectors = np.zeros((self._capacity, dimension), dtype=np.float32)
        self._node_levels: list[int] = []
        self._visited = np.zeros(self._capacity, dtype=np.int32)
        self._stamp = 0
        self._rng = random.Random(self.params.level_seed)
        self._draws = 0

    # -- state ---------------------------------------------------------------

    @property
    def vectors(self) -> np.ndarray:
        return self._vectors[: self.count]

    def _draw_level(self) -> int:
        u = 1.0 - self._rng.random()  # (0, 1], avoids log(0)
        self._draws += 1
        return min(int(-math.log(u) * self.ml), _LEVEL_CAP)

    def _ensure_capacity(self, n: int):
        if n <= self._capacity:
            return
        cap = max(int(self._capacity * 1.5), n)
        vecs = np.zeros((cap, self.dimension), dtype=np.float32)
        vecs[: self.count] = self._vectors[: self.count]
        self._vectors = vecs
        visited = np.zeros(cap, dtype=np.int32)
        visited[: self._visited.shape[0]] = self._visited
        self._visited = visited
        self._capacity = cap
        for level in self.levels:
            level.grow(cap)

    def _ensure_levels(self, level: int):
        while len(self.levels) <= level:
            deg_cap = self.m0 if len(self.levels) == 0 else self.params.M
            self.levels.append(_Level(deg_cap, self._capacity))

    # -- construction ----------------------------------------------------------

    def add(self, vector: np.ndarray) -> int:
        if vector.shape[0] != self.dimension:
            raise ValueError(f"vector dimension {vector.shape[0]} != {self.dimension}")
        node = self.count
        self._ensure_capacity(node + 1)
        self._vectors[node] = vector.astype(np.float32, copy=False)
        level = self._draw_level()
        self._node_levels.append(level)
        self._ensure_levels(level)
        self.count += 1

        if node == 0:
            self.entry_point = 0
            self.max_level = level
            return node

        query = np.ascontiguousarray(self._vectors[node])
        mat = self._vectors[: self.count]
        ep = np.array([self.entry_point], dtype=np.int32)
        for lc in range(self.max_level, level, -1):
            ep, _ = self._search_layer(mat, lc, ep, query, 1)

        for lc in range(min(level, self.max_level), -1, -1):
            cand_ids, cand_dists = self._search_layer(
                mat, lc, ep, query, self.params.ef_construction
            )
            selected = _kernel.select_heuristic(mat, cand_ids, cand_dists, self.params.M)
            self._link(lc, node, selected, mat)
            ep = cand_ids

        if level > self.max_level:
            self.entry_point = node
            self.max_level = level
        return node

    def _link(self, lc: int, node: int, neighbors: np.ndarray, mat: np.ndarray):
        level = self.levels[lc]
        n_sel = len(neighbors)
        level.adj[node, :n_sel] = neighbors
        level.cnt[node] = n_sel
        _kernel.link_backlinks(mat, level.adj, level.cnt, node, neighbors, level.deg_cap)

    def _search_layer(self, mat, lc, entry_ids, query, ef):
        self._stamp += 1
        if self._stamp >= 2**31 - 1:
            self._visited[:] = 0
            self._stamp = 1
        level = self.levels[lc]
        return _kernel.search_layer(
            mat, level.adj, level.cnt, entry_ids, query, ef, self._visited, self._stamp
        )

    # -- query -----------------------------------------------------------------

    def search(self, query: np.ndarray, k: int, ef_search: int | None = None):
        """Approximate top-k: returns (node_ids, dists) ascending by (dist, id).
        Distances are float32-precision; exact scores are the caller's concern."""
        if self.count == 0:
            raise ValueError("index is empty")
        ef = max(ef_search or self.params.ef_search, k)
        query = np.ascontiguousarray(query, dtype=np.float32)
        mat = self._vectors[: self.count]
        ep = np.array([self.entry_point], dtype=np.int32)
        for lc in range(self.max_level, 0, -1):
            ep, _ = self._search_layer(mat, lc, ep, query, 1)
        ids, dists = self._search_layer(mat, 0, ep, query, ef)
        return ids[:k], dists[:k]

    # -- serialization -----------------------------------------------------------

    def state_dict(self) -> dict:
        n = self.count
        return {
            "params": self.params.to_dict(),
            "dimension": self.dimension,
            "count": n,
            "entry_point": self.entry_point,
            "max_level": self.max_level,
            "draws": self._draws,
            "node_levels": np.asarray(self._node_levels, dtype=np.int32),
            "levels": [
                {"deg_cap": lv.deg_cap, "cnt": lv.cnt[:n].copy(), "adj": lv.adj[:n].copy()}
                for lv in self.levels
            ],
        }

    @classmethod
    def from_state(cls, state: dict, vectors: np.ndarray) -> "HnswIndex":
        idx = cls(int(state["dimension"]), HnswParams.from_dict(state["params"]))
        n = int(state["count"])
        idx._ensure_capacity(max(n, 1))
        idx._vectors[:n] = vectors[:n]
        idx.count = n
        idx.entry_point = int(state["entry_point"])
        idx.max_level = int(state["max_level"])
        idx._node_levels = [int(x) for x in state["node_levels"]]
        idx.levels = []
        for lv in state["levels"]:
            level = _Level(int(lv["deg_cap"]), idx._capacity)
            level.cnt[:n] = lv["cnt"]
            level.adj[:n] = lv["adj"]
            idx.levels.append(level)
        # replay the level RNG so post-load inserts continue the sequence
        draws = int(state["draws"])
        idx._rng = random.Random(idx.params.level_seed)
        for _ in range(draws):
            idx._rng.random()
        idx._draws = draws
        return idx
