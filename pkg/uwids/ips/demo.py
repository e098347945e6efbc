# 2026/09/19
"""
demo.py - Scripted key-reset scenarios over an in-process link.

Defines Loopback, DemoSetup, ScenarioResult and the functions 'demo_setup',
'run_scenario', 'run_demo' and 'format_table'.

Each scenario builds a fresh buoy and node from a seeded topology, runs one
exchange (honest or with an adversary on the link) and records how it ended.
Messages cross the link serialized, so every run also goes through the wire
codec.

"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, replace
from typing import Iterable, TypeVar

import numpy as np
import pandas as pd

from uwids.errors import ConfigurationError, ProtocolError
from uwids.ips.primitives import KEY_BYTES, generate_keypair, random_bytes
from uwids.ips.protocol import (
    DELTA_T,
    Buoy,
    NodeEndpoint,
    buoy_confirm,
    buoy_handle_m2,
    buoy_initiate,
    make_m1,
    node_activate,
    node_handle_m1,
)
from uwids.ips.rssi import build_registry, measure_rssi
from uwids.ips.wire import M1, M2, KeyConfirm
from uwids.model import Node, SimConfig
from uwids.sim import build_topology

logger = logging.getLogger(__name__)

Message = TypeVar("Message", M1, M2, KeyConfirm)

COMPLETED = "completed"
START_TIME = 100.0

# scenario -> (expected outcome, key rotated, node isolated at the end)
SCENARIOS: dict[str, tuple[str, bool, bool]] = {
    "honest": (COMPLETED, True, False),
    "stale-t1": ("FreshnessError", False, True),
    "stale-t2": ("FreshnessError", False, True),
    "forged-m1": ("AuthenticityError", False, True),
    "tampered-m2": ("BindingError", False, True),
    "replay": ("NoPendingExchangeError", True, False),
    "out-of-range-rssi": ("RssiRejected", False, True),
}


class Loopback:
    """Ordered in-process link carrying serialized messages."""

    def __init__(self) -> None:
        self._queue: deque[bytes] = deque()
        self.sent = 0

    def send(self, message: M1 | M2 | KeyConfirm) -> bytes:
        data = message.to_bytes()
        self._queue.append(data)
        self.sent += 1
        return data

    def inject(self, data: bytes) -> None:
        self._queue.append(data)

    def receive(self, kind: type[Message]) -> Message:
        if not self._queue:
            raise ProtocolError("Nothing to receive on the link.")
        return kind.from_bytes(self._queue.popleft())


@dataclass
class DemoSetup:
    buoy: Buoy
    node: NodeEndpoint
    link: Loopback
    sk_old: bytes
    rssi: float


@dataclass(frozen=True)
class ScenarioResult:
    scenario: str
    outcome: str
    rekeyed: bool
    keys_equal: bool
    isolated: bool
    messages: int

    @property
    def expected(self) -> str:
        return SCENARIOS[self.scenario][0]

    @property
    def passed(self) -> bool:
        outcome, rekeyed, isolated = SCENARIOS[self.scenario]
        return (
            self.outcome == outcome
            and self.rekeyed == rekeyed
            and self.isolated == isolated
            and self.keys_equal
        )

    def to_dict(self) -> dict[str, object]:
        return {
            "scenario": self.scenario,
            "expected": self.expected,
            "outcome": self.outcome,
            "rekeyed": self.rekeyed,
            "keys_equal": self.keys_equal,
            "isolated": self.isolated,
            "messages": self.messages,
            "verdict": "PASS" if self.passed else "FAIL",
        }


def demo_setup(seed: int = 0, *, node_count: int = 16, delta_t: float = DELTA_T) -> DemoSetup:
    """Buoy at the sink of a seeded topology, sharing a session key with
    one randomly chosen sensor node."""
    config = SimConfig(node_count=node_count, rng_seed=seed)
    nodes = build_topology(config)
    sink = nodes[0]
    rng = np.random.default_rng([seed, 7])
    target: Node = nodes[1 + int(rng.integers(node_count - 1))]

    buoy_keys, node_keys = generate_keypair(), generate_keypair()
    sk_old = random_bytes(KEY_BYTES)
    buoy = Buoy(
        buoy_keys, build_registry(nodes, sink.position, config.frequency_khz), delta_t=delta_t
    )
    buoy.register(target.id, node_keys.public, sk_old)

    def rssi() -> float:
        return measure_rssi(target, sink.position, config.frequency_khz, rng=rng)

    node = NodeEndpoint(target.id, node_keys, buoy_keys.public, sk_old, rssi, delta_t=delta_t)
    return DemoSetup(buoy, node, Loopback(), sk_old, rssi())


def run_scenario(name: str, *, seed: int = 0, delta_t: float = DELTA_T) -> ScenarioResult:
    """Plays scenario `name` and reports how the exchange ended."""
    if name not in SCENARIOS:
        raise ConfigurationError(
            f"Unknown scenario '{name}'; choose from {', '.join(SCENARIOS)}."
        )
    setup = demo_setup(seed, delta_t=delta_t)
    buoy, node, link = setup.buoy, setup.node, setup.link
    node_id, t = node.node_id, START_TIME
    late = delta_t + 1.0

    try:
        match name:
            case "honest":
                _exchange(setup, t)
            case "stale-t1":
                link.send(buoy_initiate(buoy, node_id, t, setup.rssi))
                node_handle_m1(node, link.receive(M1), t + late)
            case "stale-t2":
                link.send(buoy_initiate(buoy, node_id, t, setup.rssi))
                link.send(node_handle_m1(node, link.receive(M1), t + 1))
                buoy_handle_m2(buoy, link.receive(M2), t + 1 + late)
            case "forged-m1":
                link.send(buoy_initiate(buoy, node_id, t, setup.rssi))
                link.receive(M1)  # intercepted
                intruder = generate_keypair()
                forged = make_m1(intruder, node.context.keypair.public, node_id, random_bytes(), t)
                link.send(forged)
                node_handle_m1(node, link.receive(M1), t + 1)
            case "tampered-m2":
                link.send(buoy_initiate(buoy, node_id, t, setup.rssi))
                link.send(node_handle_m1(node, link.receive(M1), t + 1))
                m2 = link.receive(M2)
                buoy_handle_m2(buoy, replace(m2, sealed=_flip_bit(m2.sealed)), t + 2)
            case "replay":
                captured = _exchange(setup, t)
                link.inject(captured)
                buoy_handle_m2(buoy, link.receive(M2), t + 4)
            case "out-of-range-rssi":
                band = buoy.registry[node_id]
                buoy_initiate(buoy, node_id, t, band.high + 10.0)
        outcome = COMPLETED
    except ProtocolError as exc:
        outcome = type(exc).__name__
        logger.info("Scenario %s: %s", name, exc)

    buoy_key = buoy.context(node_id).sk_old
    return ScenarioResult(
        scenario=name,
        outcome=outcome,
        rekeyed=buoy_key != setup.sk_old,
        keys_equal=buoy_key == node.session_key,
        isolated=buoy.is_isolated(node_id),
        messages=link.sent,
    )


def run_demo(
    scenarios: Iterable[str] | None = None, *, seed: int = 0, trials: int = 1
) -> list[ScenarioResult]:
    """Runs each scenario `trials` times with seeds seed, seed + 1, ..."""
    if trials < 1:
        raise ConfigurationError(f"trials must be at least 1, not '{trials}'.")
    names = list(SCENARIOS) if scenarios is None else list(scenarios)
    return [run_scenario(name, seed=seed + k) for name in names for k in range(trials)]


def format_table(results: Iterable[ScenarioResult]) -> str:
    frame = pd.DataFrame([r.to_dict() for r in results])
    return frame.to_string(index=False) if not frame.empty else ""


# Auxiliar functions


def _exchange(setup: DemoSetup, t: float) -> bytes:
    """Honest round trip; returns the serialized M2 as seen on the link."""
    buoy, node, link = setup.buoy, setup.node, setup.link
    link.send(buoy_initiate(buoy, node.node_id, t, setup.rssi))
    m2_bytes = link.send(node_handle_m1(node, link.receive(M1), t + 1))
    buoy_handle_m2(buoy, link.receive(M2), t + 2)
    link.send(buoy_confirm(buoy, node.node_id))
    node_activate(node, link.receive(KeyConfirm))
    return m2_bytes


def _flip_bit(data: bytes, position: int = -1) -> bytes:
    flipped = bytearray(data)
    flipped[position] ^= 0x01
    return bytes(flipped)
