"""Exhaustive search for small models, used to cross-check the canonical model.

Truth at a state depends only on its own valuation and on class-level
structure, and ``Kh`` only looks at the uniform actions of each class and
the classes they can lead to.  So a model up to the given bounds is
enumerated as:

* a partition into classes, each class a set of distinct valuations (two
  states of one class with the same valuation satisfy the same formulas);
* for each class, the successor-class sets of its uniform actions.

Two reductions keep this exhaustive without listing every model.  An
action whose successors include its own class never helps a terminating
strategy, and an action whose successor set contains another's is never
needed, so only antichains of successor sets over the other classes are
listed.  Each candidate is realized as a concrete model, and a hit is
re-checked with the state-level model checker.

All transition structures for one partition are evaluated at once with
numpy.
"""
from __future__ import annotations

import itertools

import numpy as np

from .. import checker
from ..formula import And, Formula, K, Kh, Not, Prop, props, size, sort_key, subformulas
from ..model import Model

MAX_STATES = 4
MAX_PROPS = 2
MAX_ACTIONS = 2
ACTION_NAMES = ("a", "b")


def _class_options(k, c, max_actions):
    others = [A for A in range(1, 1 << k) if not A >> c & 1]
    opts = [()]
    opts.extend((A,) for A in others)
    if max_actions >= 2:
        for A, B in itertools.combinations(others, 2):
            if A & B != A and A & B != B:
                opts.append((A, B))
    return opts


def _ok_table(opts, k):
    table = np.zeros((len(opts), 1 << k), dtype=bool)
    for o, sets in enumerate(opts):
        for X in range(1 << k):
            table[o, X] = any(A & ~X == 0 for A in sets)
    return table


def _partitions(n_vals, max_states):
    """Nondecreasing tuples of nonempty valuation-index subsets, total size bounded."""
    subsets = list(range(1, 1 << n_vals))
    for k in range(1, max_states + 1):
        for combo in itertools.combinations_with_replacement(subsets, k):
            if sum(bin(v).count("1") for v in combo) <= max_states:
                yield combo


def _evaluate(order, states, k, prop_cols, opt_idx, ok):
    """Truth of every subformula; arrays of shape (configs, states)."""
    n_cfg = 1 if opt_idx is None else opt_idx.shape[0]
    class_cols = [[j for j, (c, _) in enumerate(states) if c == ci] for ci in range(k)]
    state_class = np.array([c for c, _ in states])
    val = {}
    for g in order:
        if isinstance(g, Prop):
            r = np.broadcast_to(prop_cols[g.name], (n_cfg, len(states)))
        elif isinstance(g, Not):
            r = ~val[g.arg]
        elif isinstance(g, And):
            r = val[g.left] & val[g.right]
        elif isinstance(g, K):
            x = val[g.arg]
            r = np.empty((n_cfg, len(states)), dtype=bool)
            for cols in class_cols:
                r[:, cols] = x[:, cols].all(axis=1, keepdims=True)
        else:
            x = val[g.arg]
            won = np.zeros(n_cfg, dtype=np.int64)
            for ci, cols in enumerate(class_cols):
                won |= x[:, cols].all(axis=1).astype(np.int64) << ci
            if opt_idx is not None:
                for _ in range(k):
                    for ci in range(k):
                        won |= ok[ci][opt_idx[:, ci], won].astype(np.int64) << ci
            r = ((won[:, None] >> state_class[None, :]) & 1).astype(bool)
        val[g] = r
    return val


def _realize(states, k, vals, opts_per_class, picks):
    names = [f"s{j}" for j in range(len(states))]
    first = {}
    for j, (c, _) in enumerate(states):
        first.setdefault(c, names[j])
    blocks = [[names[j] for j, (c, _) in enumerate(states) if c == ci] for ci in range(k)]
    transitions = []
    used = set()
    if picks is not None:
        for ci in range(k):
            for label, A in zip(ACTION_NAMES, opts_per_class[ci][picks[ci]]):
                used.add(label)
                for s in blocks[ci]:
                    transitions.extend((s, label, first[d]) for d in range(k) if A >> d & 1)
    valuation = {names[j]: sorted(vals[v]) for j, (_, v) in enumerate(states)}
    return Model(names, sorted(used), transitions, blocks, valuation)


def bounded_model_search(f: Formula, max_states: int = MAX_STATES,
                         max_actions: int = MAX_ACTIONS):
    """First ``(model, state)`` with ``f`` true, over models within the bounds, else None."""
    ps = props(f)
    if max_states > MAX_STATES or len(ps) > MAX_PROPS or max_actions > MAX_ACTIONS:
        raise ValueError(
            f"bounded search supports at most {MAX_STATES} states, "
            f"{MAX_PROPS} propositions and {MAX_ACTIONS} actions")
    vals = [frozenset(c) for r in range(len(ps) + 1) for c in itertools.combinations(ps, r)]
    order = sorted(subformulas(f), key=lambda g: (size(g), sort_key(g)))
    use_actions = max_actions > 0 and any(isinstance(g, Kh) for g in order)

    cache = {}
    for combo in _partitions(len(vals), max_states):
        k = len(combo)
        states = [(ci, v) for ci, vmask in enumerate(combo)
                  for v in range(len(vals)) if vmask >> v & 1]
        prop_cols = {p: np.array([p in vals[v] for _, v in states]) for p in ps}
        if use_actions:
            if k not in cache:
                opts = [_class_options(k, c, max_actions) for c in range(k)]
                ok = [_ok_table(o, k) for o in opts]
                shape = tuple(len(o) for o in opts)
                idx = np.indices(shape).reshape(k, -1).T
                cache[k] = (opts, ok, idx)
            opts, ok, idx = cache[k]
        else:
            opts, ok, idx = None, None, None
        truth = _evaluate(order, states, k, prop_cols, idx, ok)[f]
        hits = np.argwhere(truth)
        if hits.size:
            cfg, j = (int(x) for x in hits[0])
            picks = None if idx is None else tuple(int(x) for x in idx[cfg])
            m = _realize(states, k, vals, opts, picks)
            state = f"s{j}"
            if not checker.eval(m, state, f):
                raise AssertionError("bounded search realized a model the checker rejects")
            return m, state
    return None
