"""Static checks over a RuleSet: counts, overlapping regions, coverage gaps."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from .model import ANY, RULE_VARIABLES, Rule, RuleSet, rule_vocabulary


@dataclass(frozen=True)
class ValidationReport:
    leaf_count: int
    emotion_counts: dict[str, int]
    weights: dict[str, int]
    duplicates: list[tuple[str, str]] = field(default_factory=list)
    overlaps: list[tuple[str, str]] = field(default_factory=list)
    uncovered: list[dict[str, str]] = field(default_factory=list)
    grid_size: int = 0

    @property
    def ok(self) -> bool:
        return not self.duplicates

    def to_dict(self) -> dict:
        return {
            "leaf_count": self.leaf_count,
            "emotion_counts": dict(sorted(self.emotion_counts.items())),
            "weights": self.weights,
            "duplicate_regions": [list(p) for p in self.duplicates],
            "overlapping_regions": [list(p) for p in self.overlaps],
            "uncovered_count": len(self.uncovered),
            "grid_size": self.grid_size,
            "uncovered": self.uncovered,
        }


def _semantic_region(rule: Rule) -> tuple[frozenset[str], ...]:
    """Set of crisp terms admitted at each level (``any`` admits all)."""
    out = []
    for var in RULE_VARIABLES:
        term = rule.term_for(var)
        out.append(frozenset(rule_vocabulary(var)) if term == ANY else frozenset({term}))
    return tuple(out)


def crisp_grid():
    """Every combination of crisp rule terms, in tree level order."""
    return itertools.product(*(rule_vocabulary(v) for v in RULE_VARIABLES))


def validate(rs: RuleSet) -> ValidationReport:
    """Report leaf and per-emotion counts, overlapping crisp regions and uncovered term combinations."""
    regions = {r.name: _semantic_region(r) for r in rs.rules}
    emotions: Counter[str] = Counter()
    for rule in rs.rules:
        for emo in {o.emotion.value for o in rule.outcomes}:
            emotions[emo] += 1

    duplicates, overlaps = [], []
    for a, b in itertools.combinations(rs.rules, 2):
        ra, rb = regions[a.name], regions[b.name]
        if ra == rb:
            duplicates.append((a.name, b.name))
        elif all(x & y for x, y in zip(ra, rb)):
            overlaps.append((a.name, b.name))

    uncovered, size = [], 0
    for combo in crisp_grid():
        size += 1
        if not any(all(t in s for t, s in zip(combo, reg)) for reg in regions.values()):
            uncovered.append({v.value: t for v, t in zip(RULE_VARIABLES, combo)})

    return ValidationReport(
        leaf_count=len(rs.rules),
        emotion_counts=dict(emotions),
        weights={r.name: r.weight for r in rs.rules},
        duplicates=duplicates,
        overlaps=overlaps,
        uncovered=uncovered,
        grid_size=size,
    )
