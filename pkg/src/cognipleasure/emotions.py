"""Emotion and intensity vocabularies."""

from __future__ import annotations

from enum import Enum


class Emotion(str, Enum):
    HAPPINESS = "happiness"
    EXCITEMENT = "excitement"
    SURPRISE = "surprise"
    FEAR = "fear"
    ANGER = "anger"
    DISGUST = "disgust"
    SADNESS = "sadness"
    BOREDOM = "boredom"
    SLEEPINESS = "sleepiness"
    CALM = "calm"


# The eight classes the inference engine emits. Excitement and Sleepiness
# only exist in the pleasure-arousal geometry table.
RECOGNIZED_EMOTIONS = frozenset(
    {
        Emotion.HAPPINESS,
        Emotion.SADNESS,
        Emotion.ANGER,
        Emotion.FEAR,
        Emotion.DISGUST,
        Emotion.SURPRISE,
        Emotion.CALM,
        Emotion.BOREDOM,
    }
)

# Emitted from the direct calm/boredom predictions, never by rules.
DIRECT_EMOTIONS = frozenset({Emotion.CALM, Emotion.BOREDOM})


class Intensity(str, Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"

    @property
    def rank(self) -> int:
        return ("low", "medium", "high").index(self.value)
