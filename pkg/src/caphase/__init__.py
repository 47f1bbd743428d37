"""Model checking for the phase space of one-dimensional cellular automata."""

from .automata import BuchiAutomaton, LassoWord, Alphabet, ResourceLimit, state_budget
from .ca import CaRule, UPConfiguration, parse_rule, parse_config, eca, step
from .cardinality import CardinalityClass, classify
from .checker import context, decide, witness, Verdict
from .logic import parse_formula, format_formula, validate

__all__ = [
    "Alphabet", "BuchiAutomaton", "CaRule", "CardinalityClass", "LassoWord", "ResourceLimit",
    "UPConfiguration", "Verdict", "classify", "context", "decide", "eca", "format_formula",
    "parse_config", "parse_formula", "parse_rule", "state_budget", "step", "validate", "witness",
]
