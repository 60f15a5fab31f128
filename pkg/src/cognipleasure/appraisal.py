"""Appraisal domain types and the fuzzification layer.

Numeric appraisal predictions live on a 0-5 scale. Each variable is split
into ordered linguistic terms by a list of cut points; with a non-zero
overlap fraction the crisp bins become trapezoids whose ramps straddle the
cut points, so the memberships of a variable always sum to one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Mapping

from .errors import ConfigError, DataError

SCALE_MIN = 0.0
SCALE_MAX = 5.0


class Variable(str, Enum):
    EXPECTEDNESS = "expectedness"
    LIKELIHOOD = "likelihood"
    DESIRABILITY = "desirability"
    AGENCY = "agency"
    CONTROLLABILITY = "controllability"
    CALM = "calm"
    BOREDOM = "boredom"


# Column order used by files and reports.
APPRAISAL_FIELDS: tuple[Variable, ...] = (
    Variable.EXPECTEDNESS,
    Variable.LIKELIHOOD,
    Variable.DESIRABILITY,
    Variable.AGENCY,
    Variable.CONTROLLABILITY,
    Variable.CALM,
    Variable.BOREDOM,
)

THREE_LEVEL_VARIABLES = frozenset(
    {
        Variable.EXPECTEDNESS,
        Variable.LIKELIHOOD,
        Variable.CONTROLLABILITY,
        Variable.CALM,
        Variable.BOREDOM,
    }
)

LEVELS: tuple[str, ...] = ("low", "medium", "high")
DESIRABILITY_LEVELS: tuple[str, ...] = (
    "highly_undesirable",
    "undesirable",
    "low_undesirable",
    "low_desirable",
    "desirable",
    "highly_desirable",
)
AGENCY_LEVELS: tuple[str, ...] = ("none", "other")

# Cluster boundaries reported for the appraisal predictions. Desirability's
# three-cluster pair is used for ACC3 evaluation; rules use six levels.
TABLE2_BOUNDARIES: Mapping[Variable, tuple[float, float]] = MappingProxyType(
    {
        Variable.DESIRABILITY: (1.72, 3.44),
        Variable.CALM: (1.72, 3.47),
        Variable.BOREDOM: (1.69, 3.50),
        Variable.CONTROLLABILITY: (1.71, 3.34),
        Variable.LIKELIHOOD: (1.75, 3.43),
        Variable.EXPECTEDNESS: (1.75, 3.37),
    }
)

DEFAULT_DESIRABILITY_CUTS: tuple[float, ...] = tuple(SCALE_MAX * i / 6 for i in range(1, 6))
DEFAULT_OVERLAP = 0.2
DEFAULT_AGENCY_THRESHOLD = 2.5


def _check_unit_value(value: float, what: str) -> float:
    value = float(value)
    if not math.isfinite(value) or not SCALE_MIN <= value <= SCALE_MAX:
        raise ValueError(f"{what} must lie in [{SCALE_MIN:g}, {SCALE_MAX:g}], got {value!r}")
    return value


@dataclass(frozen=True)
class AppraisalVector:
    """One utterance's seven numeric predictions on the 0-5 scale."""

    utterance_id: str
    expectedness: float
    likelihood: float
    desirability: float
    agency: float
    controllability: float
    calm: float
    boredom: float

    def __post_init__(self) -> None:
        if not isinstance(self.utterance_id, str) or not self.utterance_id.strip():
            raise DataError("utterance_id must be a non-empty string")
        for var in APPRAISAL_FIELDS:
            try:
                value = _check_unit_value(getattr(self, var.value), var.value)
            except ValueError as exc:
                raise DataError(str(exc), column=var.value) from None
            object.__setattr__(self, var.value, value)

    def value(self, variable: Variable | str) -> float:
        return getattr(self, Variable(variable).value)

    @classmethod
    def from_mapping(cls, utterance_id: str, values: Mapping[str, float]) -> AppraisalVector:
        return cls(utterance_id, **{v.value: values[v.value] for v in APPRAISAL_FIELDS})


@dataclass(frozen=True)
class LinguisticTerm:
    """A named fuzzy category of one appraisal variable.

    Desirability accepts both its six-level rule vocabulary and the
    low/medium/high cluster vocabulary used for evaluation.
    """

    variable: Variable
    term: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "variable", Variable(self.variable))
        if self.term not in vocabulary(self.variable):
            raise ValueError(f"{self.term!r} is not a term of {self.variable.value}")

    def __str__(self) -> str:
        return f"{self.variable.value}={self.term}"


def vocabulary(variable: Variable | str) -> tuple[str, ...]:
    variable = Variable(variable)
    if variable is Variable.DESIRABILITY:
        return DESIRABILITY_LEVELS + LEVELS
    if variable is Variable.AGENCY:
        return AGENCY_LEVELS
    return LEVELS


def _check_cuts(cuts: tuple[float, ...], what: str) -> None:
    if any(not math.isfinite(c) for c in cuts):
        raise ConfigError(f"{what}: boundaries must be finite")
    if any(c < SCALE_MIN or c > SCALE_MAX for c in cuts):
        raise ConfigError(f"{what}: boundaries must lie within [0, 5], got {list(cuts)}")
    if any(b <= a for a, b in zip(cuts, cuts[1:])):
        raise ConfigError(f"{what}: boundaries must be strictly increasing, got {list(cuts)}")


@dataclass(frozen=True)
class FuzzConfig:
    """Cut points and overlap used to fuzzify appraisal values.

    ``overlap`` is the fraction of the narrower adjacent bin covered by the
    ramp around each cut point; 0 gives crisp, lower-inclusive bins.
    """

    boundaries: Mapping[Variable, tuple[float, float]] = field(
        default_factory=lambda: dict(TABLE2_BOUNDARIES)
    )
    overlap: float = DEFAULT_OVERLAP
    desirability_bins: tuple[float, ...] = DEFAULT_DESIRABILITY_CUTS
    agency_threshold: float = DEFAULT_AGENCY_THRESHOLD

    def __post_init__(self) -> None:
        bounds = {}
        for key, pair in dict(self.boundaries).items():
            var = Variable(key)
            if var is Variable.AGENCY:
                raise ConfigError("agency is thresholded, not binned; use agency_threshold")
            pair = tuple(float(b) for b in pair)
            if len(pair) != 2:
                raise ConfigError(f"{var.value}: expected two boundaries, got {len(pair)}")
            _check_cuts(pair, var.value)
            bounds[var] = pair
        missing = (THREE_LEVEL_VARIABLES | {Variable.DESIRABILITY}) - bounds.keys()
        for var in missing:
            bounds[var] = TABLE2_BOUNDARIES[var]
        object.__setattr__(self, "boundaries", MappingProxyType(bounds))

        overlap = float(self.overlap)
        if not (0.0 <= overlap < 0.5):
            raise ConfigError(f"overlap must lie in [0, 0.5), got {overlap}")
        object.__setattr__(self, "overlap", overlap)

        cuts = tuple(float(c) for c in self.desirability_bins)
        if len(cuts) != len(DESIRABILITY_LEVELS) - 1:
            raise ConfigError(
                f"desirability_bins needs {len(DESIRABILITY_LEVELS) - 1} interior boundaries, got {len(cuts)}"
            )
        _check_cuts(cuts, "desirability_bins")
        object.__setattr__(self, "desirability_bins", cuts)

        try:
            threshold = _check_unit_value(self.agency_threshold, "agency_threshold")
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        object.__setattr__(self, "agency_threshold", threshold)

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.boundaries.items())), self.overlap,
                     self.desirability_bins, self.agency_threshold))

    def partition(self, variable: Variable | str, term: str | None = None) -> tuple[tuple[str, ...], tuple[float, ...]]:
        """Return the ordered terms and cut points that ``term`` belongs to."""
        variable = Variable(variable)
        if variable is Variable.AGENCY:
            return AGENCY_LEVELS, (self.agency_threshold,)
        if variable is Variable.DESIRABILITY and (term is None or term in DESIRABILITY_LEVELS):
            return DESIRABILITY_LEVELS, self.desirability_bins
        return LEVELS, self.boundaries[variable]

    def to_dict(self) -> dict:
        return {
            "overlap": self.overlap,
            "boundaries": {v.value: list(self.boundaries[v]) for v in APPRAISAL_FIELDS if v in self.boundaries},
            "desirability_bins": list(self.desirability_bins),
            "agency_threshold": self.agency_threshold,
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> FuzzConfig:
        unknown = set(doc) - {"overlap", "boundaries", "desirability_bins", "agency_threshold"}
        if unknown:
            raise ConfigError(f"unknown fuzz keys: {sorted(unknown)}")
        kwargs = {}
        if "boundaries" in doc:
            try:
                kwargs["boundaries"] = {Variable(k): tuple(v) for k, v in doc["boundaries"].items()}
            except ValueError as exc:
                raise ConfigError(f"boundaries: {exc}") from None
        for key in ("overlap", "desirability_bins", "agency_threshold"):
            if key in doc:
                kwargs[key] = doc[key]
        return cls(**kwargs)


def _ramp_up(value: float, cut: float, half: float) -> float:
    """Degree to which ``value`` lies above ``cut``; 0.5 exactly at the cut."""
    if half <= 0.0:
        return 1.0 if value >= cut else 0.0
    return min(1.0, max(0.0, (value - cut + half) / (2.0 * half)))


def _half_ramps(cuts: tuple[float, ...], overlap: float) -> list[float]:
    edges = (SCALE_MIN, *cuts, SCALE_MAX)
    widths = [hi - lo for lo, hi in zip(edges, edges[1:])]
    # one shared ramp per cut keeps the partition of unity
    return [overlap * min(widths[i], widths[i + 1]) / 2.0 for i in range(len(cuts))]


def _degrees(value: float, cuts: tuple[float, ...], overlap: float) -> list[float]:
    halves = _half_ramps(cuts, overlap)
    ups = [_ramp_up(value, c, h) for c, h in zip(cuts, halves)]
    degrees = []
    for i in range(len(cuts) + 1):
        rise = ups[i - 1] if i > 0 else 1.0
        fall = 1.0 - ups[i] if i < len(cuts) else 1.0
        degrees.append(min(rise, fall))
    return degrees


def membership(value: float, term: LinguisticTerm, config: FuzzConfig) -> float:
    """Trapezoidal membership degree of ``value`` in ``term``."""
    if not isinstance(term, LinguisticTerm):
        raise TypeError(f"expected a LinguisticTerm, got {type(term).__name__}")
    value = _check_unit_value(value, term.variable.value)
    terms, cuts = config.partition(term.variable, term.term)
    overlap = 0.0 if term.variable is Variable.AGENCY else config.overlap
    return _degrees(value, cuts, overlap)[terms.index(term.term)]


def _fuzzify(value: float, variable: Variable, terms: tuple[str, ...], cuts, overlap: float):
    value = _check_unit_value(value, variable.value)
    degrees = _degrees(value, cuts, overlap)
    ranked = [(LinguisticTerm(variable, t), d) for t, d in zip(terms, degrees) if d > 0.0]
    # stable sort: ties keep term order, so the lower term wins
    ranked.sort(key=lambda pair: -pair[1])
    return ranked


def fuzzify3(value: float, variable: Variable | str, config: FuzzConfig) -> list[tuple[LinguisticTerm, float]]:
    """Low/Medium/High terms with positive degree, strongest first.

    Desirability is accepted here with its three-cluster boundaries.
    """
    variable = Variable(variable)
    if variable is Variable.AGENCY:
        raise ValueError("agency has no three-level vocabulary")
    return _fuzzify(value, variable, LEVELS, config.boundaries[variable], config.overlap)


def fuzzify_desirability(value: float, config: FuzzConfig) -> list[tuple[LinguisticTerm, float]]:
    return _fuzzify(value, Variable.DESIRABILITY, DESIRABILITY_LEVELS,
                    config.desirability_bins, config.overlap)


def fuzzify_agency(value: float, config: FuzzConfig) -> LinguisticTerm:
    value = _check_unit_value(value, "agency")
    return LinguisticTerm(Variable.AGENCY, "other" if value >= config.agency_threshold else "none")


def fuzzify(value: float, variable: Variable | str, config: FuzzConfig) -> list[tuple[LinguisticTerm, float]]:
    """Dispatch to the rule vocabulary of ``variable``."""
    variable = Variable(variable)
    if variable is Variable.DESIRABILITY:
        return fuzzify_desirability(value, config)
    if variable is Variable.AGENCY:
        return [(fuzzify_agency(value, config), 1.0)]
    return fuzzify3(value, variable, config)
