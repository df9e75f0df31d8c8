"""Configuration text, validation rules and the representation relations.

The config format is line oriented, one directive per line::

    user james
    service intranet
    daemon httpd
    terminal_server ts1        # must also be declared as a daemon
    host host1
    port 80
    interface 10.0.0.1 host1
    used_by ts1 james
    provide httpd intranet
    hosting host1 ts1
    run_on host2 80 httpd
    allow james intranet

Directives may appear in any order; references are resolved once the
whole text has been read.
"""

from __future__ import annotations

import enum
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .domain import (
    LEVELS,
    DomainError,
    KnownNetwork,
    SecurityPolicy,
    check_name,
    ip_to_u32,
    known_net,
    parse_port,
    render_event,
    u32_to_ip,
)
from .relations import Relation, sorted_values


class Mode(str, enum.Enum):
    STRICT = "strict"
    RELAXED = "relaxed"


class ConfigError(ValueError):
    """Raised by :func:`parse_config`; ``errors`` holds every problem found."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("\n".join(self.errors))


@dataclass(frozen=True)
class Configuration:
    known: KnownNetwork = field(default_factory=KnownNetwork)
    used_by: Relation = field(default_factory=Relation)  # terminal server -> user
    provide: Relation = field(default_factory=Relation)  # daemon -> service
    hosting: Relation = field(default_factory=Relation)  # host -> daemon
    run_on: Relation = field(default_factory=Relation)  # (host, port) -> daemon
    addr: Relation = field(default_factory=Relation)  # interface -> host
    policy: SecurityPolicy = field(default_factory=SecurityPolicy)


_ARITY = {
    "user": 1,
    "service": 1,
    "daemon": 1,
    "terminal_server": 1,
    "host": 1,
    "port": 1,
    "interface": 2,
    "used_by": 2,
    "provide": 2,
    "hosting": 2,
    "run_on": 3,
    "allow": 2,
}


def _intern(name: str) -> str:
    return sys.intern(check_name(name))


def parse_config(text: str) -> Configuration:
    """Parse config text into a :class:`Configuration`.

    Raises :class:`ConfigError` listing syntax errors (with line numbers),
    references to undeclared entities, a second daemon bound to one
    ``(host, port)`` and an interface bound to two hosts.
    """
    errors: list[str] = []
    sets: dict[str, set] = {k: set() for k in ("user", "service", "daemon", "terminal_server", "host", "port")}
    interfaces: dict[int, tuple[str, int]] = {}
    run_on: dict[tuple[str, int], tuple[str, int]] = {}
    pairs: dict[str, list] = {k: [] for k in ("used_by", "provide", "hosting", "allow")}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        directive, args = tokens[0], tokens[1:]
        if directive not in _ARITY:
            errors.append(f"line {lineno}: unknown directive {directive!r}")
            continue
        if len(args) != _ARITY[directive]:
            errors.append(f"line {lineno}: {directive} takes {_ARITY[directive]} argument(s), got {len(args)}")
            continue
        try:
            if directive == "port":
                sets["port"].add(parse_port(args[0]))
            elif directive in sets:
                sets[directive].add(_intern(args[0]))
            elif directive == "interface":
                address, host = ip_to_u32(args[0]), _intern(args[1])
                previous = interfaces.get(address)
                if previous is not None and previous[0] != host:
                    errors.append(
                        f"line {lineno}: interface {args[0]} bound to two hosts"
                        f" ({previous[0]} on line {previous[1]}, {host})"
                    )
                else:
                    interfaces[address] = (host, lineno)
            elif directive == "run_on":
                slot = (_intern(args[0]), parse_port(args[1]))
                daemon = _intern(args[2])
                previous = run_on.get(slot)
                if previous is not None and previous[0] != daemon:
                    errors.append(f"line {lineno}: duplicate daemon on ({slot[0]},{slot[1]})")
                else:
                    run_on[slot] = (daemon, lineno)
            else:
                pairs[directive].append((_intern(args[0]), _intern(args[1]), lineno))
        except DomainError as exc:
            errors.append(f"line {lineno}: {exc}")

    def require(kind: str, name, lineno: int) -> None:
        if name not in sets[kind]:
            errors.append(f"line {lineno}: undeclared {kind} {name!r}")

    checks = {
        "used_by": ("terminal_server", "user"),
        "provide": ("daemon", "service"),
        "hosting": ("host", "daemon"),
        "allow": ("user", "service"),
    }
    for directive, (left_kind, right_kind) in checks.items():
        for left, right, lineno in pairs[directive]:
            require(left_kind, left, lineno)
            require(right_kind, right, lineno)
    for (host, port), (daemon, lineno) in run_on.items():
        require("host", host, lineno)
        require("port", port, lineno)
        require("daemon", daemon, lineno)
    for host, lineno in interfaces.values():
        require("host", host, lineno)
    for ts in sets["terminal_server"]:
        if ts not in sets["daemon"]:
            errors.append(f"terminal_server {ts!r} is not a declared daemon")

    if errors:
        raise ConfigError(errors)

    def strip(directive: str) -> Relation:
        return Relation((a, b) for a, b, _ in pairs[directive])

    known = KnownNetwork(
        users=frozenset(sets["user"]),
        services=frozenset(sets["service"]),
        daemons=frozenset(sets["daemon"]),
        terminal_servers=frozenset(sets["terminal_server"]),
        hosts=frozenset(sets["host"]),
        ports=frozenset(sets["port"]),
        interfaces=frozenset(interfaces),
    )
    return Configuration(
        known=known,
        used_by=strip("used_by"),
        provide=strip("provide"),
        hosting=strip("hosting"),
        run_on=Relation((slot, d) for slot, (d, _) in run_on.items()),
        addr=Relation((a, h) for a, (h, _) in interfaces.items()),
        policy=SecurityPolicy(frozenset(strip("allow").pairs)),
    )


def load_config(path: str | Path) -> Configuration:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def render_config(cfg: Configuration) -> str:
    """Canonical text form; ``parse_config(render_config(c)) == c``."""
    kn = cfg.known
    lines = []
    for directive, values in (
        ("user", kn.users),
        ("service", kn.services),
        ("daemon", kn.daemons),
        ("terminal_server", kn.terminal_servers),
        ("host", kn.hosts),
        ("port", kn.ports),
    ):
        lines.extend(f"{directive} {v}" for v in sorted_values(values))
    lines.extend(f"interface {u32_to_ip(a)} {h}" for a, h in cfg.addr)
    for directive, rel in (("used_by", cfg.used_by), ("provide", cfg.provide), ("hosting", cfg.hosting)):
        lines.extend(f"{directive} {a} {b}" for a, b in rel)
    lines.extend(f"run_on {h} {p} {d}" for (h, p), d in cfg.run_on)
    lines.extend(f"allow {u} {s}" for u, s in sorted_values(cfg.policy.sp))
    return "".join(line + "\n" for line in lines)


@dataclass(frozen=True)
class RepresentationSet:
    """``represents[i]`` maps level-i events to level-(i-1) events;
    ``to_zero[i]`` is their composition down to policy actions."""

    represents: dict[int, Relation]
    to_zero: dict[int, Relation]

    def actions(self, event, level: int) -> frozenset:
        return self.to_zero[level].image((event,))

    def monitored_domain(self, level: int) -> frozenset:
        return self.to_zero[level].dom()


def build_representations(cfg: Configuration) -> RepresentationSet:
    kn = cfg.known
    rep1 = cfg.used_by.parallel(cfg.provide)
    rep2 = cfg.hosting.range_restrict(kn.terminal_servers).parallel(cfg.run_on)
    rep3 = Relation(
        ((a1, (a2, port)), (h1, (h2, port)))
        for a1, h1 in cfg.addr.pairs
        for a2, h2 in cfg.addr.pairs
        for port in kn.ports
    )
    represents = {1: rep1, 2: rep2, 3: rep3}
    to_zero = {0: Relation.identity(known_net(kn, 0))}
    for level in (1, 2, 3):
        to_zero[level] = represents[level].compose(to_zero[level - 1])
    return RepresentationSet(represents=represents, to_zero=to_zero)


@dataclass(frozen=True)
class Violation:
    rule: str
    level: int | None
    message: str
    values: tuple = ()

    def line(self) -> str:
        level = "-" if self.level is None else str(self.level)
        return f"{self.rule}\t{level}\t{self.message}"


@dataclass(frozen=True)
class ValidationReport:
    mode: Mode
    violations: tuple[Violation, ...]
    monitored_domain: dict[int, frozenset]

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        out = [f"mode={self.mode.value} violations={len(self.violations)}"]
        out.extend(
            f"monitored_domain\t{level}\t{len(self.monitored_domain[level])}" for level in LEVELS
        )
        out.extend(v.line() for v in self.violations)
        return out


def _render_values(values, level: int | None, limit: int = 3) -> str:
    items = sorted_values(values)
    shown = [render_event(v, level) if level is not None else str(v) for v in items[:limit]]
    more = f", ... (+{len(items) - limit})" if len(items) > limit else ""
    return ", ".join(shown) + more


def _structural_violations(cfg: Configuration) -> list[Violation]:
    kn = cfg.known
    out: list[Violation] = []

    def typed(rule: str, rel: Relation, left: frozenset, right: frozenset, label: str) -> None:
        bad = tuple(sorted_values(p for p in rel.pairs if p[0] not in left or p[1] not in right))
        if bad:
            out.append(Violation(rule, None, f"{label} references undeclared entities: {bad[:3]}", bad))

    slots = frozenset((h, p) for h in kn.hosts for p in kn.ports)
    typed("TYPE-USED-BY", cfg.used_by, kn.terminal_servers, kn.users, "used_by")
    typed("TYPE-PROVIDE", cfg.provide, kn.daemons, kn.services, "provide")
    typed("TYPE-HOSTING", cfg.hosting, kn.hosts, kn.daemons, "hosting")
    typed("TYPE-RUN-ON", cfg.run_on, slots, kn.daemons, "run_on")
    typed("TYPE-ADDR", cfg.addr, kn.interfaces, kn.hosts, "interface")

    stray = tuple(sorted_values(kn.terminal_servers - kn.daemons))
    if stray:
        out.append(Violation("TS-SUBSET", None, f"terminal servers not declared as daemons: {stray}", stray))
    if not cfg.run_on.is_function():
        dup = tuple(sorted_values(s for s in cfg.run_on.dom() if len(cfg.run_on.image((s,))) > 1))
        out.append(Violation("RUN-ON-FUNCTION", None, f"more than one daemon on {dup}", dup))
    if not cfg.addr.is_function():
        dup = tuple(sorted_values(a for a in cfg.addr.dom() if len(cfg.addr.image((a,))) > 1))
        out.append(Violation("ADDR-FUNCTION", None, "interface bound to two hosts", dup))
    unbound = tuple(sorted_values(kn.interfaces - cfg.addr.dom()))
    if unbound:
        out.append(Violation("ADDR-TOTAL", None, "interface without a host", unbound))
    outside = tuple(sorted_values(cfg.policy.sp - known_net(kn, 0)))
    if outside:
        out.append(
            Violation("SP-KNOWN", 0, f"SP outside KnownNet0: {_render_values(outside, 0)}", outside)
        )
    return out


def validate(cfg: Configuration, mode: Mode | str = Mode.RELAXED) -> ValidationReport:
    """Check the configuration rules; strict mode adds full-coverage rules."""
    mode = Mode(mode)
    violations = _structural_violations(cfg)
    reps = build_representations(cfg)
    if mode is Mode.STRICT:
        for level in (1, 2, 3):
            rel = reps.represents[level]
            universe = known_net(cfg.known, level)
            lower = known_net(cfg.known, level - 1)
            missing_dom = universe - rel.dom()
            if missing_dom:
                violations.append(Violation(
                    "COVER-DOM", level,
                    f"{len(missing_dom)} known events outside dom(Represents{level}):"
                    f" {_render_values(missing_dom, level)}",
                    tuple(sorted_values(missing_dom)),
                ))
            missing_ran = lower - rel.ran()
            if missing_ran:
                violations.append(Violation(
                    "COVER-RAN", level,
                    f"{len(missing_ran)} level-{level - 1} known events outside ran(Represents{level}):"
                    f" {_render_values(missing_ran, level - 1)}",
                    tuple(sorted_values(missing_ran)),
                ))
    domain = {level: reps.monitored_domain(level) for level in LEVELS}
    return ValidationReport(mode=mode, violations=tuple(violations), monitored_domain=domain)
