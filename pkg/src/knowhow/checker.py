"""Model checking: truth sets, the Kh forcing fixpoint, witness synthesis.

``Kh phi`` is decided on the quotient graph.  Starting from the classes
that lie inside the goal, a class joins the winning set once one of its
uniform actions leads only to classes already winning.  The round at which
a class joins is its stage; every witness edge goes to a strictly smaller
stage, which certifies that all executions terminate.

``brute_force_kh`` is the independent route: it enumerates every uniform
strategy and verifies it directly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod

from .errors import SpaceTooLarge
from .formula import And, Formula, K, Kh, Not, Prop
from .model import Model, equiv_class, quotient
from .strategy import Strategy, _bits, _explore, restrict

DEFAULT_STRATEGY_CAP = 10**6


@dataclass(frozen=True)
class ForcingResult:
    winning: frozenset
    witness: Strategy
    stage: dict


def force(options, goal: int):
    """Least fixpoint over class indices.

    ``options[i]`` lists ``(action, successor_mask)`` for the uniform actions
    of class ``i`` in structural order; ``goal`` is the mask of classes
    contained in the goal.  Returns ``(winning_mask, stage, choice)``.
    """
    n = len(options)
    won = goal
    stage = [0 if goal >> i & 1 else None for i in range(n)]
    choice = [None] * n
    rnd = 0
    while True:
        rnd += 1
        added = 0
        for i in range(n):
            if won >> i & 1:
                continue
            for a, succ in options[i]:
                if succ & ~won == 0:
                    choice[i] = a
                    stage[i] = rnd
                    added |= 1 << i
                    break
        if not added:
            return won, stage, choice
        won |= added


def _goal_classes(q, mask: int) -> int:
    goal = 0
    for i, cm in enumerate(q.class_masks):
        if cm & ~mask == 0:
            goal |= 1 << i
    return goal


def _ext(m: Model, f: Formula, memo: dict) -> int:
    hit = memo.get(f)
    if hit is not None:
        return hit
    if isinstance(f, Prop):
        r = 0
        for i, s in enumerate(m.states):
            if f.name in m.valuation[s]:
                r |= 1 << i
    elif isinstance(f, Not):
        r = ((1 << len(m.states)) - 1) & ~_ext(m, f.arg, memo)
    elif isinstance(f, And):
        r = _ext(m, f.left, memo) & _ext(m, f.right, memo)
    elif isinstance(f, K):
        x = _ext(m, f.arg, memo)
        r = 0
        for cm in quotient(m).class_masks:
            if cm & ~x == 0:
                r |= cm
    elif isinstance(f, Kh):
        q = quotient(m)
        won, _, _ = force(q.options, _goal_classes(q, _ext(m, f.arg, memo)))
        r = 0
        for i in _bits(won):
            r |= q.class_masks[i]
    else:
        raise TypeError(f"not a formula: {f!r}")
    memo[f] = r
    return r


def extension_mask(m: Model, f: Formula) -> int:
    return _ext(m, f, {})


def extension(m: Model, f: Formula) -> frozenset:
    mask = _ext(m, f, {})
    return frozenset(s for i, s in enumerate(m.states) if mask >> i & 1)


def eval(m: Model, s: str, f: Formula) -> bool:  # noqa: A001 - mirrors the semantics' name
    i = m.index(s)
    return bool(_ext(m, f, {}) >> i & 1)


def kh_forcing(m: Model, goal) -> ForcingResult:
    q = quotient(m)
    mask = 0
    for s in goal:
        mask |= 1 << m.index(s)
    won, stage, choice = force(q.options, _goal_classes(q, mask))
    names = q.classes
    return ForcingResult(
        winning=frozenset(names[i] for i in _bits(won)),
        witness=Strategy({names[i]: a for i, a in enumerate(choice) if a is not None}),
        stage={names[i]: k for i, k in enumerate(stage) if k is not None},
    )


def synthesize(m: Model, s: str, f: Formula) -> Strategy | None:
    """Witness strategy for ``Kh f`` at ``s``, cut down to the classes it can reach."""
    root = equiv_class(m, s)
    res = kh_forcing(m, extension(m, f))
    if root not in res.winning:
        return None
    q = quotient(m)
    seen = {root}
    todo = [root]
    while todo:
        c = todo.pop()
        a = res.witness.get(c)
        if a is None:
            continue
        for d in q.class_succ[(c, a)]:
            if d not in seen:
                seen.add(d)
                todo.append(d)
    return restrict(res.witness, seen)


def strategy_space_size(m: Model) -> int:
    q = quotient(m)
    return prod(1 + len(q.uniform_actions[c]) for c in q.classes)


def iter_strategies(m: Model):
    """Every uniform strategy, in structural order (the empty one first)."""
    q = quotient(m)
    choices = [(None,) + q.uniform_actions[c] for c in q.classes]
    for combo in itertools.product(*choices):
        yield Strategy({c: a for c, a in zip(q.classes, combo) if a is not None})


def brute_force_witness(m: Model, s: str, goal, cap: int = DEFAULT_STRATEGY_CAP):
    """First enumerated strategy meeting both conditions, or None."""
    q = quotient(m)
    count = strategy_space_size(m)
    if count > cap:
        raise SpaceTooLarge(count, cap)
    cidx = {c: i for i, c in enumerate(q.classes)}
    root = cidx[equiv_class(m, s)]
    goal = set(goal)
    inside = [all(t in goal for t in q.members[c]) for c in q.classes]
    succ_of = []
    for c in q.classes:
        opts = [None]
        for a in q.uniform_actions[c]:
            mask = 0
            for d in q.class_succ[(c, a)]:
                mask |= 1 << cidx[d]
            opts.append(mask)
        succ_of.append(opts)
    for picks in itertools.product(*(range(len(o)) for o in succ_of)):
        table = [succ_of[i][k] for i, k in enumerate(picks)]
        _, leaves, cycle = _explore(table, root)
        if cycle is None and all(inside[i] for i in _bits(leaves)):
            return Strategy({q.classes[i]: q.uniform_actions[q.classes[i]][k - 1]
                             for i, k in enumerate(picks) if k})
    return None


def brute_force_kh(m: Model, s: str, goal, cap: int = DEFAULT_STRATEGY_CAP) -> bool:
    return brute_force_witness(m, s, goal, cap) is not None
