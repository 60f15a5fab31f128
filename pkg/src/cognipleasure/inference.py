"""Fuzzy decision-tree inference from appraisal vectors to emotion activations.

Rules are compiled into a tree keyed by the level order desirability,
agency, controllability, expectedness, likelihood. Traversal starts at the
desirability root and descends into every child whose term has a positive
membership, so overlapping terms fire all matching leaves rather than one
forced path. A leaf's strength is the minimum membership along its path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .appraisal import AppraisalVector, FuzzConfig, LinguisticTerm, Variable, fuzzify3, membership
from .emotions import Emotion, Intensity
from .rules.model import ANY, RULE_VARIABLES, Rule, RuleSet

DIRECT_SOURCE = "direct"


@dataclass(frozen=True)
class EmotionActivation:
    emotion: Emotion
    intensity: Intensity
    weight: int
    strength: float
    source: str = ""

    def __post_init__(self) -> None:
        if self.weight < 1:
            raise ValueError("activation weight must be >= 1")
        if not 0.0 < self.strength <= 1.0:
            raise ValueError(f"activation strength must lie in (0, 1], got {self.strength}")

    def to_dict(self) -> dict:
        return {
            "emotion": self.emotion.value,
            "intensity": self.intensity.value,
            "weight": self.weight,
            "strength": round(self.strength, 6),
            "source": self.source,
        }


@dataclass
class RuleNode:
    """Tree node testing ``RULE_VARIABLES[depth]``; leaves hold the rules ending here."""

    depth: int
    children: dict[str, RuleNode] = field(default_factory=dict)
    rules: list[Rule] = field(default_factory=list)

    @property
    def variable(self) -> Variable | None:
        return RULE_VARIABLES[self.depth] if self.depth < len(RULE_VARIABLES) else None


@lru_cache(maxsize=32)
def compile_rules(rs: RuleSet) -> RuleNode:
    root = RuleNode(0)
    for rule in rs.rules:
        node = root
        for term in rule.region():
            node = node.children.setdefault(term, RuleNode(node.depth + 1))
        node.rules.append(rule)
    return root


def _sort_key(act: EmotionActivation):
    return (-act.strength, -act.weight, act.emotion.value, -act.intensity.rank, act.source)


def infer_emotions(v: AppraisalVector, rs: RuleSet, cfg: FuzzConfig) -> list[EmotionActivation]:
    """Fire every rule whose conditions all hold with positive membership."""
    out: list[EmotionActivation] = []
    stack = [(compile_rules(rs), 1.0)]
    while stack:
        node, strength = stack.pop()
        if node.variable is None:
            for rule in node.rules:
                out.extend(
                    EmotionActivation(o.emotion, o.intensity, rule.weight, strength, rule.name)
                    for o in rule.outcomes
                )
            continue
        value = v.value(node.variable)
        for term, child in node.children.items():
            degree = 1.0 if term == ANY else membership(value, LinguisticTerm(node.variable, term), cfg)
            if degree > 0.0:
                stack.append((child, min(strength, degree)))
    out.sort(key=_sort_key)
    return out


def direct_emotions(calm: float, boredom: float, cfg: FuzzConfig) -> list[EmotionActivation]:
    """Calm and boredom activations at their strongest three-level term."""
    out = []
    for emotion, variable, value in (
        (Emotion.CALM, Variable.CALM, calm),
        (Emotion.BOREDOM, Variable.BOREDOM, boredom),
    ):
        term, degree = fuzzify3(value, variable, cfg)[0]
        out.append(EmotionActivation(emotion, Intensity(term.term), 1, degree, DIRECT_SOURCE))
    return out


def infer_all(v: AppraisalVector, rs: RuleSet, cfg: FuzzConfig) -> list[EmotionActivation]:
    out = infer_emotions(v, rs, cfg) + direct_emotions(v.calm, v.boredom, cfg)
    out.sort(key=_sort_key)
    return out
