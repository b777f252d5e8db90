"""Epistemic transition systems and their quotient by indistinguishability."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import ParseError, ReservedWordError, UnknownState, ValidationError
from .formula import check_prop_name

StateId = str
ActionId = str
ClassId = str  # least member of the block


class Model:
    """A finite model: states, actions, labelled transitions, a partition, a valuation.

    ``equiv`` lists blocks of the indistinguishability partition; states not
    mentioned in any block become singletons.  No condition links the
    partition to the transitions.
    """

    __slots__ = ("states", "actions", "transitions", "blocks", "valuation",
                 "_class_of", "_index", "_succ", "_quotient")

    def __init__(self, states: Iterable[StateId], actions: Iterable[ActionId] = (),
                 transitions: Iterable[tuple] = (), equiv: Iterable[Iterable[StateId]] = (),
                 valuation: Mapping[StateId, Iterable[str]] | None = None):
        states = tuple(sorted(set(states)))
        if not states:
            raise ValidationError("empty-state-set")
        known = set(states)
        actions = tuple(sorted(set(actions)))
        acts = set(actions)

        trans = set()
        for triple in transitions:
            s, a, t = triple
            for x in (s, t):
                if x not in known:
                    raise ValidationError("unknown-state", f"transition {s!r} -{a}-> {t!r}")
            if a not in acts:
                raise ValidationError("unknown-action", repr(a))
            trans.add((s, a, t))

        seen = {}
        blocks = []
        for raw in equiv:
            block = sorted(set(raw))
            if not block:
                continue
            for s in block:
                if s not in known:
                    raise ValidationError("unknown-state", f"{s!r} in equiv block")
                if s in seen:
                    raise ValidationError(
                        "overlapping-blocks", f"{s!r} is in {seen[s]} and {block}")
                seen[s] = block
            blocks.append(tuple(block))
        blocks.extend((s,) for s in states if s not in seen)
        blocks.sort()

        val = {}
        for s, ps in (valuation or {}).items():
            if s not in known:
                raise ValidationError("unknown-state", f"{s!r} in valuation")
            val[s] = frozenset(ps)
        for s in states:
            val.setdefault(s, frozenset())

        self.states = states
        self.actions = actions
        self.transitions = frozenset(trans)
        self.blocks = tuple(blocks)
        self.valuation = val
        self._class_of = {s: b[0] for b in blocks for s in b}
        self._index = {s: i for i, s in enumerate(states)}
        succ = {}
        for s, a, t in sorted(trans):
            succ.setdefault((s, a), []).append(t)
        self._succ = {k: tuple(v) for k, v in succ.items()}
        self._quotient = None

    def __repr__(self):
        return (f"Model(states={list(self.states)}, actions={list(self.actions)}, "
                f"{len(self.transitions)} transitions, blocks={[list(b) for b in self.blocks]})")

    def __eq__(self, other):
        if not isinstance(other, Model):
            return NotImplemented
        return (self.states == other.states and self.actions == other.actions
                and self.transitions == other.transitions and self.blocks == other.blocks
                and self.valuation == other.valuation)

    def __hash__(self):
        return hash((self.states, self.actions, self.transitions, self.blocks))

    def successors(self, s: StateId, a: ActionId) -> tuple:
        return self._succ.get((s, a), ())

    def index(self, s: StateId) -> int:
        try:
            return self._index[s]
        except KeyError:
            raise UnknownState(s) from None

    def true_props(self, s: StateId) -> frozenset:
        return self.valuation[s]

    def to_dict(self) -> dict:
        return {
            "states": list(self.states),
            "actions": list(self.actions),
            "transitions": [list(t) for t in sorted(self.transitions)],
            "equiv": [list(b) for b in self.blocks if len(b) > 1],
            "valuation": {s: sorted(ps) for s, ps in self.valuation.items() if ps},
        }

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def to_dot(self) -> str:
        lines = ["digraph model {"]
        for s in self.states:
            label = ",".join(sorted(self.valuation[s]))
            lines.append(f'  "{s}" [label="{s}: {label}"];')
        for s, a, t in sorted(self.transitions):
            lines.append(f'  "{s}" -> "{t}" [label="{a}"];')
        for b in self.blocks:
            for x, y in zip(b, b[1:]):
                lines.append(f'  "{x}" -> "{y}" [style=dotted, dir=none];')
        lines.append("}")
        return "\n".join(lines)


def load_model(text: str) -> Model:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"model is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError("model must be a JSON object")
    unknown = set(data) - {"states", "actions", "transitions", "equiv", "valuation"}
    if unknown:
        raise ParseError(f"unknown model keys: {sorted(unknown)}")
    if "states" not in data:
        raise ParseError("model needs a 'states' list")

    def strings(xs, what):
        if not isinstance(xs, list) or not all(isinstance(x, str) for x in xs):
            raise ParseError(f"{what} must be a list of strings")
        return xs

    states = strings(data["states"], "states")
    actions = strings(data.get("actions", []), "actions")
    transitions = data.get("transitions", [])
    if not isinstance(transitions, list):
        raise ParseError("transitions must be a list")
    for t in transitions:
        strings(t, "each transition")
        if len(t) != 3:
            raise ParseError(f"transition {t} must be [from, action, to]")
    equiv = data.get("equiv", [])
    if not isinstance(equiv, list):
        raise ParseError("equiv must be a list of blocks")
    for b in equiv:
        strings(b, "each equiv block")
    valuation = data.get("valuation", {})
    if not isinstance(valuation, dict):
        raise ParseError("valuation must be an object")
    for s, ps in valuation.items():
        for p in strings(ps, f"valuation of {s}"):
            try:
                check_prop_name(p)
            except ReservedWordError:
                raise
            except ValueError as exc:
                raise ParseError(str(exc)) from None
    return Model(states, actions, [tuple(t) for t in transitions], equiv, valuation)


def read_model(path) -> Model:
    with open(path, encoding="utf-8") as fh:
        return load_model(fh.read())


def equiv_class(m: Model, s: StateId) -> ClassId:
    try:
        return m._class_of[s]
    except KeyError:
        raise UnknownState(s) from None


def members(m: Model, c: ClassId) -> tuple:
    for b in m.blocks:
        if b[0] == c:
            return b
    raise UnknownState(c)


@dataclass(frozen=True)
class QuotientGraph:
    classes: tuple
    members: dict
    uniform_actions: dict
    class_succ: dict
    # index-based view used by the checker: per class, the state bitmask and
    # (action, successor-class bitmask) for every uniform action
    class_masks: tuple = field(repr=False, compare=False)
    options: tuple = field(repr=False, compare=False)

    def class_index(self, c: ClassId) -> int:
        return self.classes.index(c)


def quotient(m: Model) -> QuotientGraph:
    if m._quotient is not None:
        return m._quotient
    classes = tuple(b[0] for b in m.blocks)
    mem = {b[0]: b for b in m.blocks}
    cidx = {c: i for i, c in enumerate(classes)}
    uniform = {}
    csucc = {}
    for c in classes:
        acts = []
        for a in m.actions:
            targets = set()
            everyone = True
            for s in mem[c]:
                ts = m.successors(s, a)
                if not ts:
                    everyone = False
                targets.update(m._class_of[t] for t in ts)
            if targets:
                csucc[(c, a)] = frozenset(targets)
            if everyone:
                acts.append(a)
        uniform[c] = tuple(acts)

    class_masks = []
    for c in classes:
        mask = 0
        for s in mem[c]:
            mask |= 1 << m._index[s]
        class_masks.append(mask)
    options = []
    for c in classes:
        opts = []
        for a in uniform[c]:
            succ_mask = 0
            for d in csucc[(c, a)]:
                succ_mask |= 1 << cidx[d]
            opts.append((a, succ_mask))
        options.append(tuple(opts))
    q = QuotientGraph(classes, mem, uniform, csucc, tuple(class_masks), tuple(options))
    m._quotient = q
    return q


def perfect_recall_violations(m: Model) -> list:
    """Lint only: triples (s, a, u) where s -a-> t and t ~ u, yet no member of [s] reaches u by a.

    The logic imposes no condition between the partition and transitions,
    so this never makes a model invalid.
    """
    out = []
    for s, a, t in sorted(m.transitions):
        for t2 in members(m, equiv_class(m, t)):
            if not any(t2 in m.successors(s2, a) for s2 in members(m, equiv_class(m, s))):
                out.append((s, a, t2))
    return out
