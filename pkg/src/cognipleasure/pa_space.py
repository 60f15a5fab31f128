"""Pleasure-arousal geometry, defuzzification and aggregation to a pleasure score."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Mapping

from .emotions import Emotion, Intensity
from .errors import ConfigError
from .inference import EmotionActivation


@dataclass(frozen=True)
class EmotionGeometry:
    emotion: Emotion
    mean_angle_deg: float
    sd_deg: float
    table_pleasure: float
    table_arousal: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.mean_angle_deg < 360.0:
            raise ConfigError(f"{self.emotion.value}: angle must lie in [0, 360)")

    @property
    def radians(self) -> float:
        return math.radians(self.mean_angle_deg)

    def consistency_error(self) -> tuple[float, float]:
        """Absolute gaps between the unit vector at the mean angle and the tabulated coordinates."""
        return (
            abs(math.cos(self.radians) - self.table_pleasure),
            abs(math.sin(self.radians) - self.table_arousal),
        )


def _row(emotion, pleasure, arousal, angle, sd):
    return emotion, EmotionGeometry(emotion, angle, sd, pleasure, arousal)


# Mean angles, spreads and coordinates of ten emotion labels in the plane.
DEFAULT_GEOMETRY: Mapping[Emotion, EmotionGeometry] = MappingProxyType(
    dict(
        [
            _row(Emotion.HAPPINESS, 0.90, 0.42, 25.09, 19.02),
            _row(Emotion.EXCITEMENT, 0.76, 0.64, 39.97, 10.32),
            _row(Emotion.SURPRISE, 0.31, 0.95, 71.63, 26.38),
            _row(Emotion.FEAR, -0.58, 0.81, 125.51, 15.61),
            _row(Emotion.ANGER, -0.74, 0.66, 138.55, 16.90),
            _row(Emotion.DISGUST, -0.99, -0.04, 182.58, 43.65),
            _row(Emotion.SADNESS, -0.96, -0.27, 196.02, 22.48),
            _row(Emotion.BOREDOM, -0.41, -0.91, 245.34, 21.41),
            _row(Emotion.SLEEPINESS, -0.11, -0.99, 263.59, 15.56),
            _row(Emotion.CALM, 0.74, -0.67, 318.12, 35.89),
        ]
    )
)


@dataclass(frozen=True)
class IntensityScale:
    """Vector magnitude per intensity label.

    Defaults sit at the mid-radius of the three outer rings of a unit disk
    split into four equal-width rings; the innermost (neutral) ring is never
    used.
    """

    high: float = 0.875
    medium: float = 0.625
    low: float = 0.375
    neutral_ceiling: float = 0.25

    def __post_init__(self) -> None:
        if not (1.0 >= self.high > self.medium > self.low > self.neutral_ceiling >= 0.0):
            raise ConfigError(
                "intensity magnitudes must satisfy 1 >= high > medium > low > neutral_ceiling >= 0"
            )

    def magnitude(self, intensity: Intensity | str) -> float:
        return getattr(self, Intensity(intensity).value)

    @property
    def magnitudes(self) -> dict[Intensity, float]:
        return {i: self.magnitude(i) for i in Intensity}


@dataclass(frozen=True)
class PAVector:
    angle_deg: float
    magnitude: float

    def __post_init__(self) -> None:
        if self.magnitude < 0:
            raise ValueError("magnitude must be non-negative")
        object.__setattr__(self, "angle_deg", self.angle_deg % 360.0)

    @property
    def pleasure(self) -> float:
        return self.magnitude * math.cos(math.radians(self.angle_deg))

    @property
    def arousal(self) -> float:
        return self.magnitude * math.sin(math.radians(self.angle_deg))


class Label(str, Enum):
    PLEASANT = "pleasant"
    UNPLEASANT = "unpleasant"
    NEUTRAL = "neutral"

    @classmethod
    def parse(cls, text: str) -> Label:
        return cls(text.strip().lower())


LABELS2: tuple[Label, ...] = (Label.PLEASANT, Label.UNPLEASANT)
LABELS3: tuple[Label, ...] = (Label.PLEASANT, Label.UNPLEASANT, Label.NEUTRAL)
DEFAULT_LABEL3_EPS = 0.1


@dataclass(frozen=True)
class Contribution:
    emotion: Emotion
    intensity: Intensity
    pleasure: float
    weight: float


@dataclass(frozen=True)
class PleasureResult:
    score: float
    label2: Label
    label3: Label
    contributions: tuple[Contribution, ...] = field(default_factory=tuple)
    no_activation: bool = False


def emotion_angle(emotion: Emotion | str, geometry: Mapping[Emotion, EmotionGeometry] = DEFAULT_GEOMETRY) -> float:
    try:
        return geometry[Emotion(emotion)].mean_angle_deg
    except (ValueError, KeyError):
        raise KeyError(f"no geometry for emotion {emotion!r}") from None


def to_vector(activation: EmotionActivation, scale: IntensityScale,
              geometry: Mapping[Emotion, EmotionGeometry] = DEFAULT_GEOMETRY) -> PAVector:
    return PAVector(emotion_angle(activation.emotion, geometry), scale.magnitude(activation.intensity))


def pleasure_of(activation: EmotionActivation, scale: IntensityScale,
                geometry: Mapping[Emotion, EmotionGeometry] = DEFAULT_GEOMETRY) -> float:
    """Horizontal component of the activation's vector: magnitude times cos(angle)."""
    angle = math.radians(emotion_angle(activation.emotion, geometry))
    return scale.magnitude(activation.intensity) * math.cos(angle)


def to_label2(score: float) -> Label:
    """Sign split; zero counts as unpleasant."""
    return Label.PLEASANT if score > 0 else Label.UNPLEASANT


def to_label3(score: float, eps: float = DEFAULT_LABEL3_EPS) -> Label:
    if eps < 0:
        raise ValueError("eps must be non-negative")
    if abs(score) < eps:
        return Label.NEUTRAL
    return Label.PLEASANT if score > 0 else Label.UNPLEASANT


def aggregate_pleasure(
    activations: Iterable[EmotionActivation],
    scale: IntensityScale,
    *,
    eps: float = DEFAULT_LABEL3_EPS,
    geometry: Mapping[Emotion, EmotionGeometry] = DEFAULT_GEOMETRY,
    strength_weighted: bool = False,
) -> PleasureResult:
    """Weighted mean of per-activation pleasure, weights being rule condition counts.

    With ``strength_weighted`` each weight is additionally multiplied by the
    activation's firing strength. An empty input scores 0.
    """
    contributions = []
    for act in activations:
        weight = act.weight * act.strength if strength_weighted else float(act.weight)
        contributions.append(
            Contribution(act.emotion, act.intensity, pleasure_of(act, scale, geometry), weight)
        )
    if not contributions:
        return PleasureResult(0.0, to_label2(0.0), Label.NEUTRAL, (), no_activation=True)
    total = math.fsum(c.weight for c in contributions)
    score = math.fsum(c.weight * c.pleasure for c in contributions) / total
    return PleasureResult(score, to_label2(score), to_label3(score, eps), tuple(contributions))
