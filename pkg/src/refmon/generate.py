"""Seeded random configurations and event logs for property checks."""

from __future__ import annotations

import random

from .config import Configuration
from .domain import KnownNetwork, SecurityPolicy, ip_to_u32
from .relations import Relation

PORT_POOL = (22, 25, 80, 143, 443, 993)


def _names(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i}" for i in range(n)]


def _subset(rng: random.Random, items, p: float = 0.5) -> list:
    return [x for x in items if rng.random() < p]


def _addresses(rng: random.Random, hosts: list[str], per_host: tuple[int, int]) -> dict[int, str]:
    addr: dict[int, str] = {}
    next_octet = 1
    for host in hosts:
        for _ in range(rng.randint(*per_host)):
            addr[ip_to_u32("10.0.0.0") + next_octet] = host
            next_octet += 1
    return addr


def relaxed_config(seed: int, max_entities: int = 4, max_ports: int = 3) -> Configuration:
    """Random configuration satisfying every rule except full coverage."""
    rng = random.Random(seed)
    users = _names("u", rng.randint(1, max_entities))
    services = _names("s", rng.randint(1, max_entities))
    daemons = _names("d", rng.randint(1, max_entities))
    terminal_servers = _subset(rng, daemons) or [rng.choice(daemons)]
    hosts = _names("h", rng.randint(1, max_entities))
    ports = rng.sample(PORT_POOL, rng.randint(1, max_ports))
    addr = _addresses(rng, hosts, (0, 2))
    used_by = [(t, u) for t in terminal_servers for u in users if rng.random() < 0.5]
    provide = [(d, s) for d in daemons for s in services if rng.random() < 0.4]
    hosting = [(h, d) for h in hosts for d in daemons if rng.random() < 0.4]
    run_on = [((h, p), rng.choice(daemons)) for h in hosts for p in ports if rng.random() < 0.6]
    sp = [(u, s) for u in users for s in services if rng.random() < 0.5]
    return Configuration(
        known=KnownNetwork(
            users=frozenset(users),
            services=frozenset(services),
            daemons=frozenset(daemons),
            terminal_servers=frozenset(terminal_servers),
            hosts=frozenset(hosts),
            ports=frozenset(ports),
            interfaces=frozenset(addr),
        ),
        used_by=Relation(used_by),
        provide=Relation(provide),
        hosting=Relation(hosting),
        run_on=Relation(run_on),
        addr=Relation(addr.items()),
        policy=SecurityPolicy(frozenset(sp)),
    )


def _cover(rng: random.Random, left: list, right: list, p: float = 0.3) -> list:
    # Every left and every right value appears in at least one pair.
    pairs = {(a, b) for a in left for b in right if rng.random() < p}
    for a in left:
        pairs.add((a, rng.choice(right)))
    for b in right:
        pairs.add((rng.choice(left), b))
    return sorted(pairs)


def strict_config(seed: int, max_entities: int = 4, max_ports: int = 3) -> Configuration:
    """Random configuration that also satisfies the full-coverage rules."""
    rng = random.Random(seed)
    users = _names("u", rng.randint(1, max_entities))
    services = _names("s", rng.randint(1, max_entities))
    hosts = _names("h", rng.randint(1, max_entities))
    ports = rng.sample(PORT_POOL, rng.randint(1, max_ports))
    slots = [(h, p) for h in hosts for p in ports]
    daemons = _names("d", rng.randint(1, min(max_entities, len(slots))))
    terminal_servers = _subset(rng, daemons) or [rng.choice(daemons)]
    addr = _addresses(rng, hosts, (1, 2))

    rng.shuffle(slots)
    run_on = list(zip(slots, daemons))
    run_on += [(slot, rng.choice(daemons)) for slot in slots[len(daemons):]]
    return Configuration(
        known=KnownNetwork(
            users=frozenset(users),
            services=frozenset(services),
            daemons=frozenset(daemons),
            terminal_servers=frozenset(terminal_servers),
            hosts=frozenset(hosts),
            ports=frozenset(ports),
            interfaces=frozenset(addr),
        ),
        used_by=Relation(_cover(rng, terminal_servers, users)),
        provide=Relation(_cover(rng, daemons, services)),
        hosting=Relation(
            _cover(rng, hosts, terminal_servers)
            + _subset(rng, [(h, d) for h in hosts for d in daemons], 0.2)
        ),
        run_on=Relation(run_on),
        addr=Relation(addr.items()),
        policy=SecurityPolicy(frozenset(_subset(rng, [(u, s) for u in users for s in services]))),
    )


def random_events(seed: int, cfg: Configuration, n: int = 50) -> list[tuple]:
    """Level-3 events drawn mostly from the known interfaces and ports,
    with a share of unknown addresses and ports mixed in."""
    rng = random.Random(seed)
    addresses = sorted(cfg.known.interfaces) or [ip_to_u32("10.0.0.1")]
    unknown_addr = ip_to_u32("10.9.9.9")
    ports = sorted(cfg.known.ports) or [80]
    events = []
    for _ in range(n):
        src = rng.choice(addresses) if rng.random() < 0.9 else unknown_addr
        dst = rng.choice(addresses) if rng.random() < 0.9 else unknown_addr
        port = rng.choice(ports) if rng.random() < 0.9 else 8080
        events.append((src, (dst, port)))
    return events
