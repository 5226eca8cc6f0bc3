"""Classify set-builder predicates of naive set theory as pathological or not."""

import json

from ._core import ParseError, bundled_corpus, canonical, free_variables, is_stratified
from . import _core

__all__ = [
    "ParseError",
    "audit",
    "bundled_corpus",
    "canonical",
    "classify",
    "free_variables",
    "is_stratified",
    "run_corpus",
]


def classify(formula, refute_depth=3, refute_steps=50000, model_size=5):
    """Full pipeline report for one formula, as a dict."""
    return json.loads(_core.classify_json(formula, refute_depth, refute_steps, model_size))


def run_corpus(text, refute_depth=3, refute_steps=50000, model_size=5):
    """Report for every entry of a corpus given as text."""
    return json.loads(_core.run_corpus_json(text, refute_depth, refute_steps, model_size))


def audit(text, refute_depth=3, refute_steps=50000, model_size=5):
    """Check that no entry of the corpus and its negation are both pathological."""
    return json.loads(_core.audit_json(text, refute_depth, refute_steps, model_size))
