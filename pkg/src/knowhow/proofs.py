"""Checking Hilbert-style derivations.

A proof file is JSON::

    {"steps": [{"formula": "K p -> Kh p", "rule": "AxKtoKh"},
               {"formula": "...", "rule": "MP", "premises": [0, 3]},
               {"formula": "...", "rule": "SUB", "premises": [1], "subst": {"p": "K q"}}]}

Premise indices are 0-based and must point at earlier steps.  Axiom steps
take any instance of their schema, so SUB is only needed to rewrite a
previously derived formula.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import Enum

from .errors import ParseError, TooManyAtoms
from .formula import (FALSUM_NAME, And, Formula, K, Kh, Not, Prop, check_prop_name, implies,
                      parse, render, substitute)

TAUT_ATOM_CAP = 20


class AxiomName(str, Enum):
    DISTK = "DISTK"
    T = "T"
    FOUR = "4"
    FIVE = "5"
    AxKtoKh = "AxKtoKh"
    AxKhtoKhK = "AxKhtoKhK"
    AxKhtoKKh = "AxKhtoKKh"
    AxKhKh = "AxKhKh"
    AxKhbot = "AxKhbot"


SCHEMA_TEXT = {
    AxiomName.DISTK: "K p & K (p -> q) -> K q",
    AxiomName.T: "K p -> p",
    AxiomName.FOUR: "K p -> K K p",
    AxiomName.FIVE: "~K p -> K ~K p",
    AxiomName.AxKtoKh: "K p -> Kh p",
    AxiomName.AxKhtoKhK: "Kh p -> Kh K p",
    AxiomName.AxKhtoKKh: "Kh p -> K Kh p",
    AxiomName.AxKhKh: "Kh Kh p -> Kh p",
    AxiomName.AxKhbot: "Kh false -> false",
}
SCHEMAS = {name: parse(text) for name, text in SCHEMA_TEXT.items()}

RULES = ("TAUT",) + tuple(a.value for a in AxiomName) + ("MP", "NECK", "MONOKh", "SUB")
PREMISE_COUNT = {"MP": 2, "NECK": 1, "MONOKh": 1, "SUB": 1}

REASONS = ("not-an-instance", "bad-premise-shape", "index-out-of-range", "substitution-mismatch")


# -- schema matching -----------------------------------------------------------

def _match(pattern, f, binding):
    if isinstance(pattern, Prop):
        if pattern.name == FALSUM_NAME:
            return f == pattern
        bound = binding.get(pattern.name)
        if bound is None:
            binding[pattern.name] = f
            return True
        return bound == f
    if type(pattern) is not type(f):
        return False
    if isinstance(pattern, And):
        return _match(pattern.left, f.left, binding) and _match(pattern.right, f.right, binding)
    return _match(pattern.arg, f.arg, binding)


def axiom_substitution(name: AxiomName | str, f: Formula) -> dict | None:
    """The substitution turning the schema into ``f``, if there is one."""
    binding = {}
    if _match(SCHEMAS[AxiomName(name)], f, binding):
        return binding
    return None


def is_axiom_instance(name: AxiomName | str, f: Formula) -> bool:
    return axiom_substitution(name, f) is not None


def schema_instances(name: AxiomName | str, terms) -> list:
    """Every instance of the schema with its letters drawn from ``terms``."""
    schema = SCHEMAS[AxiomName(name)]
    letters = sorted({p.name for p in _props(schema)} - {FALSUM_NAME})
    out = []
    for combo in itertools.product(terms, repeat=len(letters)):
        out.append(substitute(schema, dict(zip(letters, combo))))
    return out


def _props(f):
    if isinstance(f, Prop):
        yield f
    elif isinstance(f, And):
        yield from _props(f.left)
        yield from _props(f.right)
    else:
        yield from _props(f.arg)


# -- propositional tautologies ------------------------------------------------

def opaque_atoms(f: Formula) -> tuple:
    """Maximal subformulas headed by K, Kh or a proposition, in first-occurrence order."""
    seen = {}

    def walk(g):
        if isinstance(g, Not):
            walk(g.arg)
        elif isinstance(g, And):
            walk(g.left)
            walk(g.right)
        else:
            seen.setdefault(g, None)

    walk(f)
    return tuple(seen)


def is_tautology(f: Formula, cap: int = TAUT_ATOM_CAP) -> bool:
    atoms = opaque_atoms(f)
    if len(atoms) > cap:
        raise TooManyAtoms(len(atoms), cap)
    rows = 1 << len(atoms)
    full = (1 << rows) - 1
    # column i holds atom i's value on every row of the table at once
    cols = {}
    for i, a in enumerate(atoms):
        block = 1 << i
        unit = ((1 << block) - 1) << block
        cols[a] = unit * (full // ((1 << (2 * block)) - 1))

    def ev(g):
        if isinstance(g, Not):
            return full & ~ev(g.arg)
        if isinstance(g, And):
            return ev(g.left) & ev(g.right)
        return cols[g]

    return ev(f) == full


# -- proof scripts -------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    formula: Formula
    rule: str
    premises: tuple = ()
    subst: dict | None = field(default=None, hash=False)

    def to_dict(self) -> dict:
        d = {"formula": render(self.formula, sugar=True), "rule": self.rule}
        if self.premises:
            d["premises"] = list(self.premises)
        if self.subst is not None:
            d["subst"] = {k: render(v, sugar=True) for k, v in sorted(self.subst.items())}
        return d


@dataclass(frozen=True)
class ProofScript:
    steps: tuple

    @property
    def conclusion(self) -> Formula | None:
        return self.steps[-1].formula if self.steps else None

    def to_json(self, indent=2) -> str:
        return json.dumps({"steps": [s.to_dict() for s in self.steps]}, indent=indent)


def load_proof(text: str) -> ProofScript:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"proof is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or not isinstance(data.get("steps"), list):
        raise ParseError('proof must be an object with a "steps" list')
    steps = []
    for i, raw in enumerate(data["steps"]):
        if not isinstance(raw, dict):
            raise ParseError(f"step {i} is not an object")
        extra = set(raw) - {"formula", "rule", "premises", "subst"}
        if extra:
            raise ParseError(f"step {i} has unknown fields {sorted(extra)}")
        if not isinstance(raw.get("formula"), str):
            raise ParseError(f"step {i} needs a formula string")
        rule = raw.get("rule")
        if rule not in RULES:
            raise ParseError(f"step {i} has unknown rule {rule!r}")
        premises = raw.get("premises", [])
        if not isinstance(premises, list) or not all(
                isinstance(j, int) and not isinstance(j, bool) for j in premises):
            raise ParseError(f"step {i} premises must be a list of integers")
        subst = raw.get("subst")
        if subst is not None:
            if not isinstance(subst, dict) or not all(isinstance(v, str) for v in subst.values()):
                raise ParseError(f"step {i} subst must map propositions to formula strings")
            subst = {check_prop_name(k): parse(v) for k, v in subst.items()}
        steps.append(Step(parse(raw["formula"]), rule, tuple(premises), subst))
    return ProofScript(tuple(steps))


def read_proof(path) -> ProofScript:
    with open(path, encoding="utf-8") as fh:
        return load_proof(fh.read())


@dataclass(frozen=True)
class ProofResult:
    ok: bool
    step: int | None = None
    reason: str | None = None

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "ok" if self.ok else f"error at step {self.step}: {self.reason}"


def _as_implication(f):
    if isinstance(f, Not) and isinstance(f.arg, And) and isinstance(f.arg.right, Not):
        return f.arg.left, f.arg.right.arg
    return None


def _check_step(steps, i, taut_cap):
    st = steps[i]
    rule = st.rule
    need = PREMISE_COUNT.get(rule, 0)
    if len(st.premises) != need:
        return "bad-premise-shape"
    if any(not 0 <= j < i for j in st.premises):
        return "index-out-of-range"
    if (st.subst is not None) != (rule == "SUB"):
        return "bad-premise-shape"
    prem = [steps[j].formula for j in st.premises]
    cur = st.formula

    if rule == "TAUT":
        return None if is_tautology(cur, taut_cap) else "not-an-instance"
    if rule in PREMISE_COUNT:
        if rule == "MP":
            return None if prem[1] == implies(prem[0], cur) else "bad-premise-shape"
        if rule == "NECK":
            return None if cur == K(prem[0]) else "bad-premise-shape"
        if rule == "MONOKh":
            parts = _as_implication(prem[0])
            if parts is None or cur != implies(Kh(parts[0]), Kh(parts[1])):
                return "bad-premise-shape"
            return None
        return None if substitute(prem[0], st.subst) == cur else "substitution-mismatch"
    return None if is_axiom_instance(rule, cur) else "not-an-instance"


def check_proof(ps: ProofScript, taut_cap: int = TAUT_ATOM_CAP) -> ProofResult:
    """Validate every step; report the first one that fails."""
    for i in range(len(ps.steps)):
        reason = _check_step(ps.steps, i, taut_cap)
        if reason is not None:
            return ProofResult(False, i, reason)
    return ProofResult(True)
