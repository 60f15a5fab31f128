"""Fuzzy appraisal rule language and the shipped decision-tree rule file."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .model import ANY, RULE_VARIABLES, Condition, Outcome, Rule, RuleSet, rule_vocabulary
from .syntax import format_rule, format_rules, parse_rules, tokenize
from .validate import ValidationReport, crisp_grid, validate

CANONICAL_RULES = "cognipleasure.far"


def canonical_rules_text() -> str:
    return resources.files(__package__).joinpath(CANONICAL_RULES).read_text(encoding="utf-8")


def load_canonical() -> RuleSet:
    return parse_rules(canonical_rules_text())


def load_rules(path: str | Path | None = None) -> RuleSet:
    """Parse a rule file, or the shipped tree when ``path`` is None."""
    if path is None:
        return load_canonical()
    return parse_rules(Path(path).read_text(encoding="utf-8"))


__all__ = [
    "ANY",
    "RULE_VARIABLES",
    "Condition",
    "Outcome",
    "Rule",
    "RuleSet",
    "ValidationReport",
    "canonical_rules_text",
    "crisp_grid",
    "format_rule",
    "format_rules",
    "load_canonical",
    "load_rules",
    "parse_rules",
    "rule_vocabulary",
    "tokenize",
    "validate",
]
