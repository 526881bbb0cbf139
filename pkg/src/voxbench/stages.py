"""Simulated pipeline stages and the clock they share.

Each simulator blocks for a modeled duration instead of doing real work,
which makes end-to-end orchestration measurable at any speed: every delay
is multiplied by ``config.time_scale`` before sleeping and every reported
elapsed value is divided back, so the numbers are comparable across
scales. With ``jitter_frac = 0`` every modeled delay is a pure function of
config and input; with jitter enabled each delay is scaled by a uniform
factor in [1 - jitter_frac, 1 + jitter_frac] drawn from the clock's RNG.

The Protocol classes at the bottom are the extension point for real
model adapters. They share the simulator signatures; no real adapter is
bundled here.
"""

from __future__ import annotations

import random
import re
import time
from dataclasses import dataclass
from typing import Callable, Protocol, Sequence, runtime_checkable

from .config import PipelineConfig
from .errors import GenerationAbortedError
from .retrieval import VectorIndex
from .types import AudioSegment, Sentence, Transcript, UtteranceRecord, word_count

# Tail of every sleep handled by a yield-spin so a sleep's overshoot stays
# in the tens of microseconds even at small time scales, where the OS
# timer's ~0.1 ms slack would otherwise dominate the modeled delay.
_SPIN_S = 0.0008

# Words in the lead sentence of a fabricated reply. Together with the
# 12-word follow-up windows this keeps the default two-sentence reply at
# 45 words.
LEAD_SENTENCE_WORDS = 33
WINDOW_WORDS = 12

WARMUP_TEXT = "Warmup."
COLD_START_MULTIPLIER = 3.0

_LEAD_TEMPLATE = ("The most relevant document for this question is {doc_id}, and "
                  "the key points it makes are summarized next:")
_FALLBACK_LEAD = ("No matching document was found, so the following is a generic "
                  "placeholder answer assembled from fixed filler text:")
_FALLBACK_WORDS = ("the system keeps answering at its usual pace while indexing "
                   "recovers and new documents arrive for later questions").split()

_STRIP_PUNCT = re.compile(r"[.!?\"')\]]+")


@dataclass(frozen=True)
class TokenEvent:
    """One streamed token: its text (trailing whitespace included) and the
    seconds since generation start at which it was emitted."""

    text: str
    at_s: float


@dataclass(frozen=True)
class GenerationSummary:
    token_count: int
    llm_elapsed_s: float


class StageClock:
    """Scaled monotonic time source shared by the stages of one run."""

    def __init__(self, time_scale: float = 1.0, rng: random.Random | None = None) -> None:
        if time_scale <= 0.0:
            raise ValueError(f"time_scale must be > 0, got {time_scale}")
        self.time_scale = float(time_scale)
        self.rng = rng if rng is not None else random.Random()

    def now(self) -> float:
        return time.perf_counter()

    def jitter(self, jitter_frac: float) -> float:
        """Draw one multiplicative jitter factor (1.0 when jitter is off)."""
        if jitter_frac <= 0.0:
            return 1.0
        return self.rng.uniform(1.0 - jitter_frac, 1.0 + jitter_frac)

    def sleep_until(self, deadline: float) -> None:
        """Sleep until ``deadline`` on the real clock, with a spin tail."""
        while True:
            remaining = deadline - time.perf_counter()
            if remaining <= 0.0:
                return
            if remaining > _SPIN_S:
                time.sleep(remaining - _SPIN_S)
            else:
                while time.perf_counter() < deadline:
                    time.sleep(0)
                return

    def pause(self, seconds: float) -> float:
        """Block for ``seconds`` of modeled time; return the measured
        elapsed time, unscaled, which is what gets reported."""
        start = time.perf_counter()
        self.sleep_until(start + max(seconds, 0.0) * self.time_scale)
        return (time.perf_counter() - start) / self.time_scale


def stream_tokens(response: str) -> list[str]:
    """Split a response into whitespace-delimited tokens, each carrying its
    trailing whitespace, so concatenation reproduces the response exactly."""
    return [m.group(0) for m in re.finditer(r"\s*\S+\s*", response)]


class SimulatedAsr:
    """Transcription stand-in: blocks proportionally to audio length and
    returns the reference transcript verbatim."""

    def __init__(self, config: PipelineConfig, clock: StageClock) -> None:
        self._config = config
        self._clock = clock

    def transcribe(self, utterance: UtteranceRecord) -> Transcript:
        cfg = self._config
        target = utterance.audio_duration_s * cfg.asr_rtf * self._clock.jitter(cfg.jitter_frac)
        elapsed = self._clock.pause(target)
        text = utterance.reference_transcript
        return Transcript(text=text, word_count=word_count(text), asr_elapsed_s=elapsed)


class SimulatedLlm:
    """Token streamer: waits for the first-token latency, then delivers the
    prepared response one token at a time at the configured rate."""

    def __init__(self, config: PipelineConfig, clock: StageClock) -> None:
        self._config = config
        self._clock = clock

    def generate(self, prompt: str, response: str,
                 sink: Callable[[TokenEvent], None]) -> GenerationSummary:
        cfg = self._config
        clock = self._clock
        tokens = stream_tokens(response)
        start = clock.now()
        interval = 1.0 / cfg.llm_tokens_per_sec
        # Absolute deadlines, so per-token sleep overshoot cannot accumulate.
        due = cfg.llm_ttft_s * clock.jitter(cfg.jitter_frac)
        for token in tokens:
            clock.sleep_until(start + due * clock.time_scale)
            event = TokenEvent(text=token, at_s=(clock.now() - start) / clock.time_scale)
            try:
                sink(event)
            except Exception as exc:
                raise GenerationAbortedError(f"sink rejected token event: {exc}") from exc
            due += interval * clock.jitter(cfg.jitter_frac)
        # The trailing wait models the end-of-sequence step, so total
        # elapsed is ttft plus token_count intervals; an empty response
        # still pays the first-token wait before stopping.
        clock.sleep_until(start + due * clock.time_scale)
        return GenerationSummary(token_count=len(tokens),
                                 llm_elapsed_s=(clock.now() - start) / clock.time_scale)


class SimulatedTts:
    """Synthesis stand-in: audio length follows the speaking rate, and the
    blocking time follows the synthesis real-time factor.

    The first synthesis after construction pays a one-time cold-start
    penalty of COLD_START_MULTIPLIER times the normal cost unless
    ``warmup()`` absorbed it first. One instance serves one run.
    """

    def __init__(self, config: PipelineConfig, clock: StageClock) -> None:
        self._config = config
        self._clock = clock
        self._warmed = False
        self._anchor = clock.now()

    def warmup(self) -> float:
        """Synthesize a throwaway sentence; return its elapsed seconds."""
        segment = self._synthesize_text(WARMUP_TEXT, sentence_index=0)
        return segment.synth_elapsed_s

    def synthesize(self, sentence: Sentence) -> AudioSegment:
        """Block as if synthesizing ``sentence``; return its segment.

        ``completed_at_s`` is relative to this stage's construction; the
        orchestrator restamps it against the generation epoch.
        """
        if not sentence.text.strip():
            raise ValueError("cannot synthesize an empty sentence")
        return self._synthesize_text(sentence.text, sentence_index=sentence.index)

    def _synthesize_text(self, text: str, sentence_index: int) -> AudioSegment:
        cfg = self._config
        duration = word_count(text) / cfg.speaking_rate_wps
        target = duration * cfg.tts_rtf * self._clock.jitter(cfg.jitter_frac)
        if not self._warmed:
            target *= COLD_START_MULTIPLIER
            self._warmed = True
        elapsed = self._clock.pause(target)
        completed = (self._clock.now() - self._anchor) / self._clock.time_scale
        return AudioSegment(sentence_index=sentence_index,
                            synthesized_duration_s=duration,
                            synth_elapsed_s=elapsed,
                            completed_at_s=completed)


def _clean_words(text: str) -> list[str]:
    """Harvest words from document text, dropping sentence punctuation so a
    fabricated reply contains exactly the boundaries it intends to."""
    words = []
    for raw in text.split():
        cleaned = _STRIP_PUNCT.sub("", raw)
        if cleaned:
            words.append(cleaned)
    return words


def _window(words: Sequence[str], start: int, count: int) -> list[str]:
    return [words[(start + i) % len(words)] for i in range(count)]


def make_response(prompt: str, results: Sequence[tuple[str, float]],
                  index: VectorIndex, target_sentences: int) -> str:
    """Fabricate a deterministic reply grounded in the top retrieved document.

    Sentence 1 names the top doc_id and quotes the document's opening
    words, padded to LEAD_SENTENCE_WORDS words; each further sentence is a
    successive 12-word window of the document, terminated with a period.
    Exactly ``target_sentences`` sentences come back. Without results a
    fixed placeholder reply of the same shape is produced.
    """
    if target_sentences < 1:
        raise ValueError(f"target_sentences must be >= 1, got {target_sentences}")
    if results:
        top_id = results[0][0]
        lead_intro = _LEAD_TEMPLATE.format(doc_id=top_id).split()
        words = _clean_words(index.document(top_id).text) or list(_FALLBACK_WORDS)
    else:
        lead_intro = _FALLBACK_LEAD.split()
        words = list(_FALLBACK_WORDS)

    pad = max(LEAD_SENTENCE_WORDS - len(lead_intro), 0)
    lead_words = lead_intro + _window(words, 0, pad)
    sentences = [" ".join(lead_words) + "."]
    offset = pad
    for _ in range(target_sentences - 1):
        sentences.append(" ".join(_window(words, offset, WINDOW_WORDS)) + ".")
        offset += WINDOW_WORDS
    return " ".join(sentences)


@runtime_checkable
class AsrStage(Protocol):
    """Transcription adapter interface (real adapters plug in here)."""

    def transcribe(self, utterance: UtteranceRecord) -> Transcript: ...


@runtime_checkable
class LlmStage(Protocol):
    """Generation adapter interface. ``response`` is the text to stream;
    a real adapter is free to ignore it and generate from the prompt."""

    def generate(self, prompt: str, response: str,
                 sink: Callable[[TokenEvent], None]) -> GenerationSummary: ...


@runtime_checkable
class TtsStage(Protocol):
    """Synthesis adapter interface."""

    def warmup(self) -> float: ...

    def synthesize(self, sentence: Sentence) -> AudioSegment: ...


@dataclass
class StageSet:
    """The three stages plus the clock they share, owned by one run."""

    asr: AsrStage
    llm: LlmStage
    tts: TtsStage
    clock: StageClock


def build_simulated_stages(config: PipelineConfig, seed: int | None = None) -> StageSet:
    """Fresh simulators sharing one clock; ``seed`` fixes the jitter RNG."""
    rng = random.Random(config.rng_seed if seed is None else seed)
    clock = StageClock(time_scale=config.time_scale, rng=rng)
    return StageSet(asr=SimulatedAsr(config, clock),
                    llm=SimulatedLlm(config, clock),
                    tts=SimulatedTts(config, clock),
                    clock=clock)
