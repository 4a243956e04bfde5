"""Reward functions for scoring generated SVG text against references.

Two components: an integrity reward (alpha times an indicator that the
text parses and normalizes cleanly) and a path-count matching reward that
saturates at beta once the generated path count reaches the reference
count and decays exponentially below it.

The published formula ``max(beta, beta*exp(-gamma*(N - N_gt)))`` rewards
*undershooting* the reference count, contradicting its own surrounding
description of decaying on a deficit. The default ``PROSE_CONSISTENT``
semantics implements the described behavior,
``beta*exp(-gamma*max(0, N_gt - N))``; ``LITERAL_FORMULA`` evaluates the
printed expression verbatim for comparison experiments.

All functions are pure and stateless; batches may be scored from any
number of threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidReference, SvgForgeError, Unparseable, ValidationError
from .normalizer import normalize_document
from .parser import parse_document


class MatchSemantics(Enum):
    PROSE_CONSISTENT = "prose"
    LITERAL_FORMULA = "literal"


@dataclass(frozen=True, slots=True)
class RewardParams:
    """Reward coefficients; all three default to 1."""

    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0
    match_semantics: MatchSemantics = MatchSemantics.PROSE_CONSISTENT

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "gamma"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be strictly positive")


@dataclass(frozen=True, slots=True)
class RewardBreakdown:
    integrity: float
    match: float
    total: float
    n_generated: int
    n_reference: int
    integrity_flag: int


def integrity_indicator(svg_text: str) -> int:
    """1 iff the text parses as SVG and normalizes to a non-empty document.

    Well-formed XML with an svg root, every path's ``d`` valid under the
    full grammar, and at least one drawable surviving normalization.
    Total on arbitrary input: anything else maps to 0.
    """
    try:
        doc, _ = parse_document(svg_text)
        normalize_document(doc)
    except SvgForgeError:
        return 0
    except Exception:
        # arbitrary model output can break in arbitrary ways; that is a 0
        return 0
    return 1


def path_count(svg_text: str) -> int:
    """Number of path elements in the normalized document.

    Every drawable becomes exactly one path during normalization, so this
    matches the classifier's path count. Raises :class:`Unparseable` when
    the text fails the integrity check.
    """
    try:
        doc, _ = parse_document(svg_text)
        normalized, _ = normalize_document(doc)
    except SvgForgeError as exc:
        raise Unparseable(str(exc)) from None
    except Exception as exc:
        raise Unparseable(str(exc)) from None
    return len(normalized.paths)


def _match_from_counts(n_gen: int, n_ref: int, params: RewardParams) -> float:
    if params.match_semantics is MatchSemantics.LITERAL_FORMULA:
        return max(params.beta, params.beta * math.exp(-params.gamma * (n_gen - n_ref)))
    return params.beta * math.exp(-params.gamma * max(0, n_ref - n_gen))


def match_reward(
    generated: str, reference: str, params: RewardParams = RewardParams()
) -> float:
    """Path-count matching reward for one generated/reference pair.

    A generated text that fails integrity contributes a path count of 0
    rather than aborting, so every rollout receives a reward. Raises
    :class:`InvalidReference` when the reference itself fails integrity.
    """
    try:
        n_ref = path_count(reference)
    except Unparseable as exc:
        raise InvalidReference(f"reference failed integrity: {exc}") from None
    try:
        n_gen = path_count(generated)
    except Unparseable:
        n_gen = 0
    return _match_from_counts(n_gen, n_ref, params)


def total_reward(
    generated: str, reference: str, params: RewardParams = RewardParams()
) -> RewardBreakdown:
    """Integrity plus match reward with the full breakdown."""
    try:
        n_ref = path_count(reference)
    except Unparseable as exc:
        raise InvalidReference(f"reference failed integrity: {exc}") from None
    try:
        n_gen = path_count(generated)
        flag = 1
    except Unparseable:
        n_gen = 0
        flag = 0
    integrity = params.alpha * flag
    match = _match_from_counts(n_gen, n_ref, params)
    return RewardBreakdown(
        integrity=integrity,
        match=match,
        total=integrity + match,
        n_generated=n_gen,
        n_reference=n_ref,
        integrity_flag=flag,
    )
