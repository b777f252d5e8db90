"""Knowing-that and knowing-how: model checking, strategy synthesis, decision and proof checking."""
from .checker import brute_force_kh, eval, extension, kh_forcing, synthesize
from .decision import bounded_model_search, canonical_model, satisfiable, valid
from .formula import And, Formula, K, Kh, Not, Prop, parse, render
from .model import Model, load_model, quotient, read_model
from .proofs import check_proof, is_axiom_instance, is_tautology, load_proof, read_proof
from .strategy import Strategy, ce_inner, ce_leaf, execution_graph, verify_strategy

__all__ = [
    "And", "Formula", "K", "Kh", "Model", "Not", "Prop", "Strategy", "bounded_model_search",
    "brute_force_kh", "canonical_model", "ce_inner", "ce_leaf", "check_proof", "eval",
    "execution_graph", "extension", "is_axiom_instance", "is_tautology", "kh_forcing",
    "load_model", "load_proof", "parse", "quotient", "read_model", "read_proof", "render",
    "satisfiable", "synthesize", "valid", "verify_strategy",
]
