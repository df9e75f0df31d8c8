"""Verdict computation and the per-level journals."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .config import RepresentationSet
from .domain import LEVELS, Event, SecurityPolicy, Verdict

logger = logging.getLogger(__name__)


def abstract_actions(reps: RepresentationSet, event: Event, level: int) -> frozenset:
    """All ``(user, service)`` actions a level-``level`` event stands for."""
    return reps.actions(event, level)


def stepwise_actions(reps: RepresentationSet, event: Event, level: int) -> frozenset:
    """Same as :func:`abstract_actions`, by nested images one level at a time.

    Computed without the precomputed compositions; used as a cross-check.
    """
    current = frozenset((event,))
    for i in range(level, 0, -1):
        current = reps.represents[i].image(current)
    return current


def verdict_for(actions: frozenset, sp: SecurityPolicy) -> Verdict:
    if not actions:
        return Verdict.UNSPECIFIED
    allowed = actions & sp.sp
    if not allowed:
        return Verdict.FAIL
    if allowed == actions:
        return Verdict.PASS
    return Verdict.CONFLICT


def classify(reps: RepresentationSet, sp: SecurityPolicy, event: Event, level: int) -> Verdict:
    return verdict_for(abstract_actions(reps, event, level), sp)


@dataclass(frozen=True)
class Journals:
    """Immutable copy of the twelve journal sets, indexed by level."""

    monitored: tuple[frozenset, ...]
    fail: tuple[frozenset, ...]
    conflict: tuple[frozenset, ...]


@dataclass(frozen=True)
class VerdictRecord:
    event: Event
    verdict: Verdict
    actions: frozenset
    per_level: tuple[tuple[int, int], ...] = ()


@dataclass
class MonitorState:
    """Mutable monitor: journals plus the observer's last (event, status) per level.

    Single writer; :meth:`observe` and the observer's ``get_status`` must
    be serialized by the caller.
    """

    reps: RepresentationSet
    sp: SecurityPolicy
    monitored: dict[int, set] = field(default_factory=lambda: {i: set() for i in LEVELS})
    fail: dict[int, set] = field(default_factory=lambda: {i: set() for i in LEVELS})
    conflict: dict[int, set] = field(default_factory=lambda: {i: set() for i in LEVELS})
    obs_event: dict[int, Event] = field(default_factory=dict)
    obs_status: dict[int, Verdict] = field(default_factory=dict)
    ignored: int = 0

    def observe(self, e3: Event) -> VerdictRecord:
        return observe(self, e3)

    def snapshot(self) -> Journals:
        return journal_snapshot(self)


def observe(state: MonitorState, e3: Event) -> VerdictRecord:
    """Check one level-3 event at every level at once.

    Events outside the monitored sub-network are filtered: counted in
    ``state.ignored`` and returned as UNSPECIFIED with journals untouched.
    Otherwise each level-i journal gains every level-i representative of
    ``e3``, and each representative is warned about according to its own
    action set.
    """
    reps, sp = state.reps, state.sp
    actions = abstract_actions(reps, e3, 3)
    if not actions:
        state.ignored += 1
        logger.debug("ignored event %r outside the monitored sub-network", e3)
        return VerdictRecord(e3, Verdict.UNSPECIFIED, actions, ((3, 0),))

    layer = frozenset((e3,))
    per_level = []
    verdict = Verdict.UNSPECIFIED
    for level in (3, 2, 1, 0):
        if level < 3:
            layer = reps.represents[level + 1].image(layer)
        per_level.append((level, len(layer)))
        state.monitored[level].update(layer)
        for event in layer:
            v = classify(reps, sp, event, level)
            if v is Verdict.FAIL:
                state.fail[level].add(event)
            elif v is Verdict.CONFLICT:
                state.conflict[level].add(event)
            if level == 3:
                verdict = v
    return VerdictRecord(e3, verdict, actions, tuple(per_level))


def journal_snapshot(state: MonitorState) -> Journals:
    return Journals(
        monitored=tuple(frozenset(state.monitored[i]) for i in LEVELS),
        fail=tuple(frozenset(state.fail[i]) for i in LEVELS),
        conflict=tuple(frozenset(state.conflict[i]) for i in LEVELS),
    )
