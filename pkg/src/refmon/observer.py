"""Status observer, refinement traces and the runtime invariant checker."""

from __future__ import annotations

from dataclasses import dataclass

from .config import Mode, RepresentationSet, Violation
from .domain import Event, KnownNetwork, SecurityPolicy, Verdict, known_net, render_actions, render_event
from .monitor import MonitorState, abstract_actions, classify, verdict_for
from .relations import sort_key, sorted_values


class NotMonitoredError(LookupError):
    pass


class UnspecifiedEventError(ValueError):
    pass


def get_status(state: MonitorState, event: Event, level: int) -> tuple[Event, Verdict]:
    """Journal status of a monitored event; records it as the observed pair."""
    if event not in state.monitored[level]:
        raise NotMonitoredError(f"event not monitored at level {level}: {event!r}")
    if event in state.fail[level]:
        status = Verdict.FAIL
    elif event in state.conflict[level]:
        status = Verdict.CONFLICT
    else:
        status = Verdict.PASS
    state.obs_event[level] = event
    state.obs_status[level] = status
    return event, status


@dataclass(frozen=True)
class TraceEntry:
    level: int
    event: Event
    status: Verdict
    actions: frozenset

    def line(self) -> str:
        return (
            f"L{self.level}\t{render_event(self.event, self.level)}"
            f"\t{self.status.value}\t{render_actions(self.actions)}"
        )


@dataclass(frozen=True)
class TraceRecord:
    chain: tuple[TraceEntry, ...]

    def lines(self) -> list[str]:
        return [entry.line() for entry in self.chain]


def trace(reps: RepresentationSet, sp: SecurityPolicy, e3: Event) -> TraceRecord:
    """Follow one representative of ``e3`` down to the policy level.

    At each step the least related event that still stands for some
    action is chosen, so the chain never dead-ends.
    """
    actions = abstract_actions(reps, e3, 3)
    if not actions:
        raise UnspecifiedEventError(f"event outside monitored sub-network: {render_event(e3, 3)}")
    chain = [TraceEntry(3, e3, verdict_for(actions, sp), actions)]
    event = e3
    for level in (2, 1, 0):
        candidates = [
            e for e in reps.represents[level + 1].image((event,))
            if abstract_actions(reps, e, level)
        ]
        event = min(candidates, key=sort_key)
        acts = abstract_actions(reps, event, level)
        chain.append(TraceEntry(level, event, verdict_for(acts, sp), acts))
    return TraceRecord(tuple(chain))


def follow(state: MonitorState, e3: Event) -> TraceRecord | None:
    """Observe ``e3`` and point the observed variables along its trace.

    Returns None (and leaves the observed variables alone) for
    events outside the monitored sub-network.
    """
    record = state.observe(e3)
    if record.verdict is Verdict.UNSPECIFIED:
        return None
    chain = trace(state.reps, state.sp, e3)
    for entry in chain.chain:
        get_status(state, entry.event, entry.level)
    return chain


def _journal_status(state: MonitorState, event: Event, level: int) -> Verdict:
    if event in state.fail[level]:
        return Verdict.FAIL
    if event in state.conflict[level]:
        return Verdict.CONFLICT
    return Verdict.PASS


def check_invariants(
    state: MonitorState,
    reps: RepresentationSet | None = None,
    sp: SecurityPolicy | None = None,
) -> list[Violation]:
    """Every violated journal, observer and assertion invariant; empty means all hold.

    Assertions are checked for levels 1..3 only.  Related lower-level
    events that stand for no action are skipped there, since they carry
    no status of their own.
    """
    reps = reps or state.reps
    sp = sp or state.sp
    out: list[Violation] = []

    def report(rule: str, level: int, message: str, values=()) -> None:
        out.append(Violation(rule, level, message, tuple(sorted_values(values))))

    mon, fail, conf = state.monitored, state.fail, state.conflict

    outside = mon[0] - reps.to_zero[0].dom()
    if outside:
        report("J-MONITORED0", 0, "Monitored outside KnownNet0", outside)
    if conf[0]:
        report("J-CONFLICT0", 0, "CONFLICT not empty at level 0", conf[0])
    for level in (1, 2, 3):
        missing = reps.represents[level].image(mon[level]) - mon[level - 1]
        if missing:
            report("J-REFINE", level, f"representatives of Monitored not monitored at level {level - 1}", missing)

    for level in (0, 1, 2, 3):
        to_zero = reps.to_zero[level]
        stray = (fail[level] | conf[level]) - mon[level]
        if stray:
            report("J-WARNED", level, f"FAIL ∪ CONFLICT ⊄ Monitored at level {level}", stray)
        both = fail[level] & conf[level]
        if both:
            report("J-DISJOINT", level, f"FAIL ∩ CONFLICT ≠ ∅ at level {level}", both)
        passed = mon[level] - fail[level] - conf[level]
        bad = [e for e in passed if not to_zero.image((e,)) <= sp.sp]
        if bad:
            report("P1-CORRECTNESS", level, "Property 1 (correctness): passed event maps outside SP", bad)
        bad = [e for e in fail[level] if to_zero.image((e,)) & sp.sp]
        if bad:
            report("P2-FAIL", level, "Property 2 (completeness): failed event maps into SP", bad)
        bad = [e for e in conf[level] if to_zero.image((e,)) <= sp.sp]
        if bad:
            report("P2-CONFLICT", level, "Property 2 (completeness): conflicting event maps inside SP", bad)

    for level, event in state.obs_event.items():
        if not mon[level]:
            continue
        status = state.obs_status[level]
        if event not in mon[level] or status is not _journal_status(state, event, level):
            report("OBS-STATUS", level, f"observed status {status.value} disagrees with journals", [event])
    for level in (1, 2, 3):
        upper, lower = state.obs_event.get(level), state.obs_event.get(level - 1)
        if upper is None or lower is None:
            continue
        if (upper, lower) not in reps.represents[level]:
            report("OBS-REFINE", level, f"observed events at levels {level} and {level - 1} are unrelated", [upper])
            continue
        s_up, s_low = state.obs_status[level], state.obs_status[level - 1]
        if s_up is Verdict.PASS and s_low is not Verdict.PASS:
            report("OBS-A1", level, f"observed Pass refined by {s_low.value}", [upper])
        if s_up is Verdict.FAIL and s_low is not Verdict.FAIL:
            report("OBS-A2", level, f"observed Fail refined by {s_low.value}", [upper])

    for level in (1, 2, 3):
        rep = reps.represents[level]
        lower_actions = reps.to_zero[level - 1]
        broken_pass, broken_fail = [], []
        for event in mon[level]:
            status = _journal_status(state, event, level)
            if status is Verdict.CONFLICT or not reps.to_zero[level].image((event,)):
                continue
            for succ in rep.image((event,)):
                if succ not in mon[level - 1] or not lower_actions.image((succ,)):
                    continue
                if _journal_status(state, succ, level - 1) is not status:
                    (broken_pass if status is Verdict.PASS else broken_fail).append(event)
                    break
        if broken_pass:
            report("A1-PASS", level, "Assertion 1: Pass event refined by a non-Pass event", broken_pass)
        if broken_fail:
            report("A2-FAIL", level, "Assertion 2: Fail event refined by a non-Fail event", broken_fail)
        bad = [
            e for e in conf[level]
            if not (reps.to_zero[level].image((e,)) & sp.sp)
            or reps.to_zero[level].image((e,)) <= sp.sp
        ]
        if bad:
            report("A2-CONFLICT", level, "Assertion 2: Conflict event not split across SP", bad)
    return out


def enumerate_verdicts(
    reps: RepresentationSet,
    sp: SecurityPolicy,
    kn: KnownNetwork,
    level: int,
    mode: Mode | str = Mode.RELAXED,
) -> list[tuple[Event, Verdict]]:
    """Verdict for every known event (strict) or every monitored event (relaxed)."""
    if Mode(mode) is Mode.STRICT:
        events = known_net(kn, level)
    else:
        events = reps.monitored_domain(level)
    return [(e, classify(reps, sp, e, level)) for e in sorted_values(events)]
