"""Rule, condition and rule-set types."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable

from ..appraisal import AGENCY_LEVELS, DESIRABILITY_LEVELS, LEVELS, Variable
from ..emotions import Emotion, Intensity, RECOGNIZED_EMOTIONS

ANY = "any"

# Level order of the decision tree, root first.
RULE_VARIABLES: tuple[Variable, ...] = (
    Variable.DESIRABILITY,
    Variable.AGENCY,
    Variable.CONTROLLABILITY,
    Variable.EXPECTEDNESS,
    Variable.LIKELIHOOD,
)


def rule_vocabulary(variable: Variable) -> tuple[str, ...]:
    """Terms a rule may test for ``variable`` (``any`` excluded)."""
    if variable is Variable.DESIRABILITY:
        return DESIRABILITY_LEVELS
    if variable is Variable.AGENCY:
        return AGENCY_LEVELS
    return LEVELS


@dataclass(frozen=True, order=True)
class Condition:
    variable: Variable
    term: str

    def __post_init__(self) -> None:
        variable = Variable(self.variable)
        if variable not in RULE_VARIABLES:
            raise ValueError(f"{variable.value} cannot appear in a rule condition")
        if self.term != ANY and self.term not in rule_vocabulary(variable):
            raise ValueError(f"{self.term!r} is not a term of {variable.value}")
        object.__setattr__(self, "variable", variable)

    @property
    def is_any(self) -> bool:
        return self.term == ANY

    @property
    def level(self) -> int:
        return RULE_VARIABLES.index(self.variable)


@dataclass(frozen=True)
class Outcome:
    emotion: Emotion
    intensity: Intensity

    def __post_init__(self) -> None:
        emotion = Emotion(self.emotion)
        if emotion not in RECOGNIZED_EMOTIONS:
            raise ValueError(f"{emotion.value} is not an emotion the engine emits")
        object.__setattr__(self, "emotion", emotion)
        object.__setattr__(self, "intensity", Intensity(self.intensity))


@dataclass(frozen=True)
class Rule:
    """One leaf of the decision tree: conditions in tree level order plus outcomes."""

    name: str
    conditions: tuple[Condition, ...]
    outcomes: tuple[Outcome, ...]

    def __post_init__(self) -> None:
        conditions = tuple(sorted(self.conditions, key=lambda c: c.level))
        seen = [c.variable for c in conditions]
        if len(set(seen)) != len(seen):
            raise ValueError(f"rule {self.name!r} tests a variable more than once")
        if not conditions:
            raise ValueError(f"rule {self.name!r} has no conditions")
        if not any(not c.is_any for c in conditions):
            raise ValueError(f"rule {self.name!r} has only 'any' conditions")
        outcomes = tuple(self.outcomes)
        if not outcomes:
            raise ValueError(f"rule {self.name!r} has no outcomes")
        if len(set(outcomes)) != len(outcomes):
            raise ValueError(f"rule {self.name!r} repeats an outcome")
        object.__setattr__(self, "conditions", conditions)
        object.__setattr__(self, "outcomes", outcomes)

    @property
    def weight(self) -> int:
        """Number of non-``any`` conditions."""
        return sum(1 for c in self.conditions if not c.is_any)

    def term_for(self, variable: Variable) -> str:
        for cond in self.conditions:
            if cond.variable is variable:
                return cond.term
        return ANY

    def region(self) -> tuple[str, ...]:
        """Crisp region as one term (or ``any``) per tree level."""
        return tuple(self.term_for(v) for v in RULE_VARIABLES)


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[Rule, ...] = ()

    def __post_init__(self) -> None:
        rules = tuple(self.rules)
        names = [r.name for r in rules]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise ValueError(f"duplicate rule names: {dupes}")
        object.__setattr__(self, "rules", rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    @property
    def source_hash(self) -> str:
        """SHA-256 of the canonical text form."""
        from .syntax import format_rules

        return hashlib.sha256(format_rules(self).encode("utf-8")).hexdigest()

    @classmethod
    def of(cls, rules: Iterable[Rule]) -> RuleSet:
        return cls(tuple(rules))
