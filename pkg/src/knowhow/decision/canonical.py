"""Atoms over the closure, the canonical model, satisfiability and validity.

Atoms are the assignments over ``closure(subformulas(f))`` that respect the
Boolean connectives and a few one-step axiom constraints:

* ``K psi`` in implies ``psi`` in (T);
* ``K psi`` in implies ``Kh psi`` in, when both are in the closure (AxKtoKh);
* ``Kh psi`` in iff ``K Kh psi`` in (AxKhtoKKh together with T).

These local checks admit atoms that are not consistent.  Before the model
is used, atoms are eliminated formula by formula, smallest first: at the
first closure member whose truth set in the current model differs from its
membership set, the offending atoms are dropped and the check restarts.
Only atoms that fail a one-step existence condition (a missing
``~psi``-witness in their class, or no atom with ``K psi`` at all for an
unforced ``Kh psi``) can be dropped this way, so every consistent atom
survives, and the survivors satisfy the truth lemma.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..checker import extension, force
from ..errors import TooLarge, VerdictDisagreement
from ..formula import (And, Formula, K, Kh, Not, Prop, closure, props, render, size,
                       sort_key, subformulas)
from ..model import Model

DEFAULT_ATOM_CAP = 20


@dataclass(frozen=True)
class Atom:
    members: frozenset
    closure: tuple = field(repr=False, compare=False)

    def __contains__(self, f):
        return f in self.members

    @property
    def assignment(self) -> dict:
        return {g: g in self.members for g in self.closure}

    @property
    def k_part(self) -> frozenset:
        return frozenset(g for g in self.members if isinstance(g, K))

    @property
    def kh_part(self) -> frozenset:
        return frozenset(g for g in self.members if isinstance(g, Kh))

    def literals(self) -> tuple:
        return tuple(g if g in self.members else Not(g) for g in self.closure)


def _ordered_closure(f):
    return tuple(sorted(closure(subformulas(f)), key=lambda g: (size(g), sort_key(g))))


def free_members(f: Formula) -> tuple:
    """Closure members whose value the connectives do not determine."""
    return tuple(g for g in _ordered_closure(f) if isinstance(g, (Prop, K, Kh)))


def _enumerate(order, cap):
    free = sum(isinstance(g, (Prop, K, Kh)) for g in order)
    if free > cap:
        raise TooLarge(free, cap, "free closure members")
    pos = {g: i for i, g in enumerate(order)}
    n = len(order)
    val = [False] * n
    plan = []
    for g in order:
        if isinstance(g, Not):
            plan.append(("not", pos[g.arg], None))
        elif isinstance(g, And):
            plan.append(("and", pos[g.left], pos[g.right]))
        elif isinstance(g, K):
            inner = pos[g.arg]
            plan.append(("k", inner, inner if isinstance(g.arg, Kh) else None))
        elif isinstance(g, Kh):
            plan.append(("kh", pos.get(K(g.arg)), None))
        else:
            plan.append(("free", None, None))

    out = []

    def rec(i):
        if i == n:
            out.append(sum(1 << j for j in range(n) if val[j]))
            return
        kind, a, b = plan[i]
        if kind == "not":
            val[i] = not val[a]
            rec(i + 1)
        elif kind == "and":
            val[i] = val[a] and val[b]
            rec(i + 1)
        else:
            for v in (True, False):
                if kind == "k":
                    if v and not val[a]:
                        continue
                    if b is not None and val[b] != v:
                        continue
                elif kind == "kh" and not v and a is not None and val[a]:
                    continue
                val[i] = v
                rec(i + 1)

    rec(0)
    return out


def atoms(f: Formula, cap: int = DEFAULT_ATOM_CAP) -> tuple:
    """Locally coherent atoms over the closure of ``f``, in deterministic order."""
    order = _ordered_closure(f)
    cl = tuple(sorted(order, key=sort_key))
    return tuple(Atom(frozenset(g for j, g in enumerate(order) if bits >> j & 1), cl)
                 for bits in _enumerate(order, cap))


def _prune(order, atom_bits, actions):
    """Drop atoms until every closure member's truth set equals its membership set."""
    pos = {g: i for i, g in enumerate(order)}
    kmask = sum(1 << i for i, g in enumerate(order) if isinstance(g, K))
    alive = list(atom_bits)
    removed = []
    while True:
        n = len(alive)
        full = (1 << n) - 1
        mem = [0] * len(order)
        for a, bits in enumerate(alive):
            for j in range(len(order)):
                if bits >> j & 1:
                    mem[j] |= 1 << a
        groups = {}
        for a, bits in enumerate(alive):
            groups.setdefault(bits & kmask, []).append(a)
        class_masks = [sum(1 << a for a in g) for g in groups.values()]
        options = [[] for _ in class_masks]
        for name, chi in actions:
            src = mem[pos[Kh(chi)]] & ~mem[pos[K(chi)]]
            tgt = mem[pos[K(chi)]]
            if not tgt:
                continue
            succ = sum(1 << c for c, cm in enumerate(class_masks) if cm & tgt)
            for c, cm in enumerate(class_masks):
                if cm & ~src == 0:
                    options[c].append((name, succ))

        sem = {}
        bad = 0
        for j, g in enumerate(order):
            if isinstance(g, Prop):
                r = mem[j]
            elif isinstance(g, Not):
                r = full & ~sem[g.arg]
            elif isinstance(g, And):
                r = sem[g.left] & sem[g.right]
            elif isinstance(g, K):
                x = sem[g.arg]
                r = 0
                for cm in class_masks:
                    if cm & ~x == 0:
                        r |= cm
            else:
                x = sem[g.arg]
                goal = sum(1 << c for c, cm in enumerate(class_masks) if cm & ~x == 0)
                won, _, _ = force(options, goal)
                r = 0
                for c, cm in enumerate(class_masks):
                    if won >> c & 1:
                        r |= cm
            sem[g] = r
            bad = r ^ mem[j]
            if bad:
                break
        if not bad:
            return alive, removed
        removed.extend(alive[a] for a in range(n) if bad >> a & 1)
        alive = [alive[a] for a in range(n) if not bad >> a & 1]


@dataclass(frozen=True)
class CanonicalModel:
    formula: Formula
    closure: tuple
    atoms: tuple
    eliminated: tuple
    model: Model
    names: dict = field(repr=False)
    uniformity_violations: tuple = ()

    @property
    def bound(self) -> int:
        return 2 ** (2 * size(self.formula))

    @property
    def within_bound(self) -> bool:
        return len(self.atoms) <= self.bound

    def atom_of(self, state: str) -> Atom:
        return self.atoms[self.names[state]]


def canonical_model(f: Formula, cap: int = DEFAULT_ATOM_CAP, prune: bool = True) -> CanonicalModel:
    """Atoms as states, one action per ``Kh`` subformula, K-parts as the partition.

    ``D -chi-> E`` iff ``Kh chi`` and ``~K chi`` are in ``D`` and ``K chi`` is in ``E``.
    With ``prune=False`` every locally coherent atom is kept.
    """
    order = _ordered_closure(f)
    cl = tuple(sorted(order, key=sort_key))
    bits = _enumerate(order, cap)
    phi = subformulas(f)
    actions = sorted(((render(g.arg), g.arg) for g in phi if isinstance(g, Kh)),
                     key=lambda t: t[0])
    if prune:
        alive, removed = _prune(order, bits, actions)
    else:
        alive, removed = bits, []

    def to_atom(b):
        return Atom(frozenset(g for j, g in enumerate(order) if b >> j & 1), cl)

    atom_list = tuple(to_atom(b) for b in alive)
    width = len(str(max(len(atom_list) - 1, 0)))
    names = [f"d{i:0{width}d}" for i in range(len(atom_list))]

    blocks = {}
    for name, at in zip(names, atom_list):
        blocks.setdefault(at.k_part, []).append(name)
    violations = []
    for block in blocks.values():
        parts = {atom_list[names.index(x)].kh_part for x in block}
        if len(parts) > 1:
            violations.append(tuple(block))

    transitions = []
    for label, chi in actions:
        src = [x for x, at in zip(names, atom_list) if Kh(chi) in at and K(chi) not in at]
        tgt = [x for x, at in zip(names, atom_list) if K(chi) in at]
        transitions.extend((s, label, t) for s in src for t in tgt)
    prop_names = {g.name for g in phi if isinstance(g, Prop)}
    valuation = {x: [g.name for g in at.members if isinstance(g, Prop) and g.name in prop_names]
                 for x, at in zip(names, atom_list)}
    model = Model(names, [label for label, _ in actions], transitions, blocks.values(), valuation)
    return CanonicalModel(
        formula=f,
        closure=cl,
        atoms=atom_list,
        eliminated=tuple(to_atom(b) for b in removed),
        model=model,
        names={x: i for i, x in enumerate(names)},
        uniformity_violations=tuple(violations),
    )


@dataclass(frozen=True)
class SatResult:
    satisfiable: bool
    model: Model | None = None
    state: str | None = None
    # UNSAT rests on the elimination argument; it is also confirmed by the
    # bounded search whenever the formula fits that search's limits
    cross_checked: bool = False

    def __bool__(self):
        return self.satisfiable


def satisfiable(f: Formula, cap: int = DEFAULT_ATOM_CAP, cross_check: bool = True) -> SatResult:
    cm = canonical_model(f, cap)
    ext = extension(cm.model, f)
    if ext:
        return SatResult(True, cm.model, min(ext))
    checked = False
    if cross_check and len(props(f)) <= 2:
        from .bounded import bounded_model_search

        found = bounded_model_search(f, 4)
        if found is not None:
            raise VerdictDisagreement(
                f"canonical model says {render(f, True)} is unsatisfiable, "
                f"bounded search found state {found[1]!r}")
        checked = True
    return SatResult(False, cross_checked=checked)


def valid(f: Formula, cap: int = DEFAULT_ATOM_CAP, cross_check: bool = True) -> bool:
    return not satisfiable(Not(f), cap, cross_check).satisfiable
