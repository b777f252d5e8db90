"""Random models and formulas, and the countermodel-hunting fuzz harness.

All randomness comes from numpy's PCG64 generator (O'Neill's permuted
congruential generator, 128-bit state, 64-bit output), seeded with the
64-bit ``seed`` of the parameters.  Trial ``i`` of a fuzz run uses seed
``seed + i`` (mod 2**64).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .checker import extension_mask
from .formula import And, Formula, K, Kh, Not, Prop
from .model import Model
from .proofs import PREMISE_COUNT, RULES, ProofScript, Step

SEED_MOD = 2**64


@dataclass(frozen=True)
class GenParams:
    seed: int = 0
    max_states: int = 6
    max_actions: int = 2
    props: tuple = ("p", "q")
    transition_density: Fraction | float = Fraction(3, 10)
    block_merge_prob: Fraction | float = Fraction(3, 10)

    def __post_init__(self):
        if not 0 <= self.seed < SEED_MOD:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.max_states < 1:
            raise ValueError("max_states must be at least 1")
        for p in (self.transition_density, self.block_merge_prob):
            if not 0 <= p <= 1:
                raise ValueError("probabilities must lie in [0, 1]")


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed % SEED_MOD))


def random_model(gp: GenParams) -> Model:
    rng = rng_for(gp.seed)
    n = int(rng.integers(1, gp.max_states + 1))
    width = len(str(gp.max_states - 1))
    states = [f"s{i:0{width}d}" for i in range(n)]
    actions = [f"a{j}" for j in range(gp.max_actions)]
    density = float(gp.transition_density)
    merge = float(gp.block_merge_prob)

    coins = rng.random((n, len(actions), n))
    transitions = [(states[i], actions[j], states[k])
                   for i in range(n) for j in range(len(actions)) for k in range(n)
                   if coins[i, j, k] < density]

    block_of = []
    for i in range(n):
        if i and rng.random() < merge:
            block_of.append(block_of[int(rng.integers(0, i))])
        else:
            block_of.append(i)
    blocks = {}
    for i, b in enumerate(block_of):
        blocks.setdefault(b, []).append(states[i])

    lit = rng.random((n, len(gp.props))) < 0.5
    valuation = {states[i]: [p for j, p in enumerate(gp.props) if lit[i, j]] for i in range(n)}
    return Model(states, actions, transitions, blocks.values(), valuation)


def random_formula(seed: int, depth: int, props=("p", "q")) -> Formula:
    """Each node picks one of the five constructors uniformly; depth 0 forces a proposition."""
    if depth > 6:
        raise ValueError("depth must be at most 6")
    rng = rng_for(seed)
    props = tuple(props)

    def gen(d):
        kind = 0 if d == 0 else int(rng.integers(0, 5))
        if kind == 0:
            return Prop(props[int(rng.integers(0, len(props)))])
        if kind == 2:
            left = gen(d - 1)
            return And(left, gen(d - 1))
        return (None, Not, None, K, Kh)[kind](gen(d - 1))

    return gen(depth)


def enumerate_formulas(max_size: int, props=("p", "q")):
    """Every formula with at most ``max_size`` symbols, smallest first."""
    by_size = {1: [Prop(p) for p in props]}
    for n in range(2, max_size + 1):
        out = []
        for g in by_size[n - 1]:
            out.extend((Not(g), K(g), Kh(g)))
        for i in range(1, n - 1):
            for a in by_size[i]:
                for b in by_size[n - 1 - i]:
                    out.append(And(a, b))
        by_size[n] = out
    for n in range(1, max_size + 1):
        yield from by_size[n]


@dataclass(frozen=True)
class FuzzReport:
    formula: Formula
    trials: int
    counterexample: tuple | None
    elapsed: float

    @property
    def survived(self) -> bool:
        return self.counterexample is None


def fuzz_validity(f: Formula, trials: int, gp: GenParams = GenParams()) -> FuzzReport:
    """Evaluate ``f`` at every state of ``trials`` random models; stop at the first falsifier."""
    start = time.perf_counter()
    for i in range(trials):
        m = random_model(replace(gp, seed=(gp.seed + i) % SEED_MOD))
        mask = extension_mask(m, f)
        full = (1 << len(m.states)) - 1
        if mask != full:
            bad = next(s for j, s in enumerate(m.states) if not mask >> j & 1)
            return FuzzReport(f, i + 1, (m, bad), time.perf_counter() - start)
    return FuzzReport(f, trials, None, time.perf_counter() - start)


_NO_PREMISE = tuple(r for r in RULES if r not in PREMISE_COUNT)
_ONE_PREMISE = ("NECK", "MONOKh", "SUB")


def _flip_rule(st: Step) -> Step:
    if st.rule == "MP":
        return Step(st.formula, "MP", st.premises[::-1])
    if st.rule in _ONE_PREMISE:
        nxt = _ONE_PREMISE[(_ONE_PREMISE.index(st.rule) + 1) % len(_ONE_PREMISE)]
        subst = {} if nxt == "SUB" else None
        return Step(st.formula, nxt, st.premises, subst)
    nxt = _NO_PREMISE[(_NO_PREMISE.index(st.rule) + 1) % len(_NO_PREMISE)]
    return Step(st.formula, nxt)


def proof_mutations(ps: ProofScript):
    """Yield ``(label, script)`` for each single-point change: negate a formula, or change a rule.

    A changed rule takes the next rule of the same arity; MP swaps its premises.
    """
    for i, st in enumerate(ps.steps):
        for label, new in ((f"step {i}: formula negated",
                            Step(Not(st.formula), st.rule, st.premises, st.subst)),
                           (f"step {i}: rule {st.rule} changed", _flip_rule(st))):
            steps = list(ps.steps)
            steps[i] = new
            yield label, ProofScript(tuple(steps))
