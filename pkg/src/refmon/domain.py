"""Network concepts, per-level event shapes and the security policy.

Events are nested tuples whose shape is fixed by their level:

=====  ==========================================  ==================
level  shape                                        rendering
=====  ==========================================  ==================
0      ``(user, service)``                          ``user->service``
1      ``(terminal_server, daemon)``                ``ts>daemon``
2      ``(src_host, (dst_host, dst_port))``         ``h1>h2:80``
3      ``(src_addr, (dst_addr, dst_port))``         ``a.b.c.d>e.f.g.h:80``
=====  ==========================================  ==================

Addresses are 32-bit ints; source ports are never carried.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass, field
from typing import Any

LEVELS = (0, 1, 2, 3)
MAX_PORT = 65535
NAME_RE = re.compile(r"^[a-z0-9_.-]+$")

Event = tuple


class Verdict(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    CONFLICT = "CONFLICT"
    UNSPECIFIED = "UNSPECIFIED"

    def __str__(self) -> str:
        return self.value


class DomainError(ValueError):
    """Malformed name, port, address or event text."""


def check_name(name: str) -> str:
    if not NAME_RE.match(name):
        raise DomainError(f"invalid name {name!r}: expected [a-z0-9_.-]+")
    return name


def parse_port(text: str) -> int:
    if not text.isdigit():
        raise DomainError(f"invalid port {text!r}")
    port = int(text)
    if port > MAX_PORT:
        raise DomainError(f"port {port} out of range 0..{MAX_PORT}")
    return port


def ip_to_u32(dotted: str) -> int:
    """Valuate a dotted quad into its 32-bit integer, most significant octet first.

    >>> ip_to_u32("129.88.39.37")
    2170038053
    """
    octets = dotted.split(".")
    if len(octets) != 4:
        raise DomainError(f"invalid address {dotted!r}: expected four octets")
    value = 0
    for i, octet in enumerate(octets):
        if not octet.isdigit() or int(octet) > 255:
            raise DomainError(f"invalid address {dotted!r}: bad octet {i + 1} {octet!r}")
        value = value * 256 + int(octet)
    return value


def u32_to_ip(value: int) -> str:
    if not 0 <= value <= 0xFFFFFFFF:
        raise DomainError(f"address {value} out of 32-bit range")
    return ".".join(str((value >> shift) & 0xFF) for shift in (24, 16, 8, 0))


def l0(user: str, service: str) -> Event:
    return (user, service)


def l1(terminal_server: str, daemon: str) -> Event:
    return (terminal_server, daemon)


def l2(src_host: str, dst_host: str, port: int) -> Event:
    return (src_host, (dst_host, port))


def l3(src: int | str, dst: int | str, port: int) -> Event:
    """Level-3 event; addresses may be given as dotted quads."""
    if isinstance(src, str):
        src = ip_to_u32(src)
    if isinstance(dst, str):
        dst = ip_to_u32(dst)
    return (src, (dst, port))


def event_level_ok(event: Any, level: int) -> bool:
    """Whether ``event`` has the tuple shape of ``level``."""
    if not isinstance(event, tuple) or len(event) != 2:
        return False
    if level in (0, 1):
        return isinstance(event[0], str) and isinstance(event[1], str)
    src, rest = event
    if not (isinstance(rest, tuple) and len(rest) == 2 and isinstance(rest[1], int)):
        return False
    atom = str if level == 2 else int
    return isinstance(src, atom) and isinstance(rest[0], atom)


def render_event(event: Event, level: int) -> str:
    if level == 0:
        return f"{event[0]}->{event[1]}"
    if level == 1:
        return f"{event[0]}>{event[1]}"
    src, (dst, port) = event
    if level == 3:
        src, dst = u32_to_ip(src), u32_to_ip(dst)
    return f"{src}>{dst}:{port}"


def render_actions(actions) -> str:
    if not actions:
        return "-"
    return ",".join(sorted(render_event(a, 0) for a in actions))


def parse_event_line(line: str) -> Event:
    """Parse ``<src-dotted-quad> <dst-dotted-quad> <dst-port>`` into a level-3 event."""
    tokens = line.split()
    if len(tokens) != 3:
        raise DomainError(f"expected '<src> <dst> <port>', got {line.strip()!r}")
    src, dst, port = tokens
    return l3(ip_to_u32(src), ip_to_u32(dst), parse_port(port))


@dataclass(frozen=True)
class KnownNetwork:
    """The described part of the network; everything else is unknown."""

    users: frozenset = field(default_factory=frozenset)
    services: frozenset = field(default_factory=frozenset)
    daemons: frozenset = field(default_factory=frozenset)
    terminal_servers: frozenset = field(default_factory=frozenset)
    hosts: frozenset = field(default_factory=frozenset)
    ports: frozenset = field(default_factory=frozenset)
    interfaces: frozenset = field(default_factory=frozenset)


@dataclass(frozen=True)
class SecurityPolicy:
    """Closed policy: the set of authorized ``(user, service)`` actions."""

    sp: frozenset = field(default_factory=frozenset)

    def __contains__(self, action: object) -> bool:
        return action in self.sp

    def __len__(self) -> int:
        return len(self.sp)


def known_net(kn: KnownNetwork, level: int) -> frozenset:
    """Full cartesian universe of known events at ``level``."""
    if level == 0:
        return frozenset(itertools.product(kn.users, kn.services))
    if level == 1:
        return frozenset(itertools.product(kn.terminal_servers, kn.daemons))
    if level == 2:
        nodes, ports = kn.hosts, kn.ports
    elif level == 3:
        nodes, ports = kn.interfaces, kn.ports
    else:
        raise ValueError(f"level must be in 0..3, got {level}")
    return frozenset(
        (src, (dst, port)) for src in nodes for dst in nodes for port in ports
    )
