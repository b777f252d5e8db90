"""Uniform strategies and their executions over the quotient graph.

Executions are never materialized as sequences.  From a start class the
strategy induces a finite graph on classes; every complete execution is a
maximal path in it, so "all complete executions are finite" is the same as
"the reachable part has no cycle".
"""
from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass

from .errors import InvalidStrategy, ParseError
from .model import ClassId, Model, equiv_class, quotient


class Strategy(Mapping):
    """Immutable partial map from class representatives to actions."""

    __slots__ = ("_map",)

    def __init__(self, assignment: Mapping[ClassId, str] | None = None):
        self._map = dict(sorted((assignment or {}).items()))

    def __getitem__(self, c):
        return self._map[c]

    def __iter__(self):
        return iter(self._map)

    def __len__(self):
        return len(self._map)

    def __hash__(self):
        return hash(tuple(self._map.items()))

    def __repr__(self):
        return f"Strategy({self._map})"

    @property
    def domain(self) -> frozenset:
        return frozenset(self._map)

    def to_json(self) -> str:
        return json.dumps(self._map, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str, model: Model | None = None) -> "Strategy":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"strategy is not valid JSON: {exc}") from None
        if not isinstance(data, dict) or not all(
                isinstance(k, str) and isinstance(v, str) for k, v in data.items()):
            raise ParseError("strategy must map class names to action names")
        if model is not None:
            data = {equiv_class(model, k): v for k, v in data.items()}
        return cls(data)


def validate_strategy(m: Model, sigma: Mapping[ClassId, str]) -> None:
    q = quotient(m)
    for c, a in sigma.items():
        if c not in q.members:
            raise InvalidStrategy(f"{c!r} does not name an equivalence class")
        if a not in q.uniform_actions[c]:
            raise InvalidStrategy(f"{a!r} is not executable at every state of class {c!r}")


def restrict(sigma: Mapping[ClassId, str], domain) -> Strategy:
    domain = set(domain)
    return Strategy({c: a for c, a in sigma.items() if c in domain})


@dataclass(frozen=True)
class ExecutionGraph:
    root: ClassId
    nodes: frozenset
    edges: frozenset
    leaves: frozenset
    has_cycle: bool
    cycle: tuple = ()

    @property
    def inner(self) -> frozenset:
        return self.nodes - self.leaves


def _explore(succ, root):
    """DFS over class indices.  ``succ[i]`` is a successor bitmask or None when
    class ``i`` is outside the strategy's domain.

    Returns (reachable mask, leaf mask, first cycle as an index list or None).
    """
    reach = 1 << root
    leaves = 0
    cycle = None
    on_path = {}
    path = []
    stack = [(root, _bits(succ[root]))]
    on_path[root] = 0
    path.append(root)
    if succ[root] is None:
        return reach, reach, None
    while stack:
        node, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            stack.pop()
            path.pop()
            del on_path[node]
            continue
        if nxt in on_path:
            if cycle is None:
                cycle = path[on_path[nxt]:] + [nxt]
            continue
        bit = 1 << nxt
        if reach & bit:
            continue
        reach |= bit
        if succ[nxt] is None:
            leaves |= bit
            continue
        on_path[nxt] = len(path)
        path.append(nxt)
        stack.append((nxt, _bits(succ[nxt])))
    return reach, leaves, cycle


def _bits(mask):
    if mask is None:
        return iter(())
    return (i for i in range(mask.bit_length()) if mask >> i & 1)


def _succ_table(m: Model, sigma: Mapping[ClassId, str]):
    q = quotient(m)
    cidx = {c: i for i, c in enumerate(q.classes)}
    table = []
    for i, c in enumerate(q.classes):
        a = sigma.get(c)
        if a is None:
            table.append(None)
            continue
        mask = 0
        for d in q.class_succ.get((c, a), ()):
            mask |= 1 << cidx[d]
        table.append(mask)
    return q, table


def execution_graph(m: Model, sigma: Mapping[ClassId, str], s: str) -> ExecutionGraph:
    root = equiv_class(m, s)
    validate_strategy(m, sigma)
    q, table = _succ_table(m, sigma)
    r = q.classes.index(root)
    reach, leaves, cycle = _explore(table, r)
    names = q.classes
    nodes = frozenset(names[i] for i in _bits(reach))
    edges = frozenset(
        (names[i], names[j]) for i in _bits(reach) if table[i] is not None
        for j in _bits(table[i]))
    return ExecutionGraph(
        root=root,
        nodes=nodes,
        edges=edges,
        leaves=frozenset(names[i] for i in _bits(leaves)),
        has_cycle=cycle is not None,
        cycle=tuple(names[i] for i in cycle) if cycle else (),
    )


def ce_leaf(m: Model, sigma: Mapping[ClassId, str], s: str) -> frozenset:
    return execution_graph(m, sigma, s).leaves


def ce_inner(m: Model, sigma: Mapping[ClassId, str], s: str) -> frozenset:
    return execution_graph(m, sigma, s).inner


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str | None = None  # "cycle" or "leaf-outside-goal"
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def verify_strategy(m: Model, sigma: Mapping[ClassId, str], s: str, goal) -> Verdict:
    """Check both conditions for ``sigma`` to witness knowing how to reach ``goal`` from ``s``.

    A failing cycle check reports the cycle as a class path; a failing leaf
    check reports the first leaf class and its least state outside the goal.
    """
    g = execution_graph(m, sigma, s)
    if g.has_cycle:
        return Verdict(False, "cycle", g.cycle)
    goal = set(goal)
    q = quotient(m)
    for c in sorted(g.leaves):
        outside = [t for t in q.members[c] if t not in goal]
        if outside:
            return Verdict(False, "leaf-outside-goal", (c, outside[0]))
    return Verdict(True)
