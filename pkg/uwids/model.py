# 2026/09/02
"""
model.py - Model definitions for uwids entities.

Defines SimConfig, Node, TraceRecord and FeatureVector, together with the
enumerations they use.

"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Any

from uwids.errors import ConfigurationError

Position = tuple[float, float, float]

SINK_ID = 0

# Trace codes
APP_PORT = 0
ATTACK_PORT = 1
ROUTING_PORT = 255

FLAG_DATA = 0
FLAG_FORWARDED = 1
FLAG_DROPPED = 2

INFO_DATA = 0
INFO_FLOOD = 1


class PacketStatus(str, Enum):
    RECEIVE = "r"
    SEND = "s"
    DROP = "d"


class TraceLayer(str, Enum):
    RTR = "RTR"
    MAC = "MAC"


class AttackKind(str, Enum):
    NONE = "none"
    BLACKHOLE = "blackhole"
    GRAYHOLE = "grayhole"
    FLOODING = "flooding"


class Behaviour(str, Enum):
    HONEST = "honest"
    BLACKHOLE = "blackhole"
    GRAYHOLE = "grayhole"
    FLOODER = "flooder"


ATTACK_TO_BEHAVIOUR = {
    AttackKind.NONE: Behaviour.HONEST,
    AttackKind.BLACKHOLE: Behaviour.BLACKHOLE,
    AttackKind.GRAYHOLE: Behaviour.GRAYHOLE,
    AttackKind.FLOODING: Behaviour.FLOODER,
}


class TraceEntity(ABC):
    """Base class for uwids records.

    Defines:
    - Comparison methods '__eq__' and '__lt__' based on abstract property
    'sorting_key'.
    - Representation method '__repr__'.

    Requires subclasses to implement:
    - 'sorting_key' property, for comparison operations.
    - 'to_dict()' method, for serialization to dictionary.

    """

    @property
    @abstractmethod
    def sorting_key(self) -> tuple[Any, ...]:
        """Abstract property for sorting key."""
        pass

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TraceEntity):
            return NotImplemented
        return self.sorting_key == other.sorting_key

    def __lt__(self, other: TraceEntity) -> bool:
        if not isinstance(other, TraceEntity):
            return NotImplemented
        return self.sorting_key < other.sorting_key

    def __hash__(self) -> int:
        return hash(self.sorting_key)

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} {self.sorting_key}>"

    @abstractmethod
    def to_dict(self) -> dict[str, Any]:
        """Abstract method for serialization to dictionary."""
        pass


# Configuration


@dataclass
class SimConfig:
    """Parameters of one simulation run.

    Node ids go from 0 to 'node_count - 1'; node 0 is the surface sink.
    Per-field checks run on construction, cross-field checks in
    'validate()', which is also called on construction.

    """

    node_count: int = 16
    malicious_ids: frozenset[int] = frozenset()
    attack_kind: AttackKind = AttackKind.NONE
    grayhole_drop_fraction: float = 0.4
    topo_dims: Position = (100.0, 100.0, 100.0)
    sim_duration: float = 600.0
    data_interval: float = 0.1
    initial_energy: float = 10000.0
    frequency_khz: float = 25.0
    vbf_pipe_radius: float = 20.0
    tx_range: float = 90.0
    tx_cost: float = 2.0
    rx_cost: float = 0.75
    flood_multiple: float = 10.0
    flood_start: float | None = None
    rng_seed: int = 0

    def __post_init__(self) -> None:
        self.malicious_ids = frozenset(int(i) for i in self.malicious_ids)
        self.attack_kind = AttackKind(self.attack_kind)
        self.topo_dims = tuple(float(d) for d in self.topo_dims)
        self.validate()

    def validate(self) -> None:
        """Checks every invariant, raising ConfigurationError on failure."""
        if not (2 <= self.node_count <= 4096):
            raise ConfigurationError(
                f"node_count must be between 2 and 4096, not '{self.node_count}'."
            )
        if len(self.topo_dims) != 3 or any(d <= 0 for d in self.topo_dims):
            raise ConfigurationError(
                f"topo_dims must be three positive sizes, not '{self.topo_dims}'."
            )
        if not (0.0 < self.grayhole_drop_fraction < 1.0):
            raise ConfigurationError(
                "grayhole_drop_fraction must lie in (0, 1), "
                f"not '{self.grayhole_drop_fraction}'."
            )
        for name in ("sim_duration", "data_interval", "initial_energy"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"{name} must be positive.")
        for name in ("frequency_khz", "vbf_pipe_radius", "tx_range"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"{name} must be positive.")
        if self.tx_cost < 0 or self.rx_cost < 0:
            raise ConfigurationError("tx_cost and rx_cost must be non-negative.")
        if self.flood_multiple <= 0:
            raise ConfigurationError("flood_multiple must be positive.")
        if self.flood_start is not None and not (
            0 <= self.flood_start <= self.sim_duration
        ):
            raise ConfigurationError("flood_start must lie within the run.")
        for mid in self.malicious_ids:
            if not (0 <= mid < self.node_count):
                raise ConfigurationError(
                    f"Malicious id '{mid}' is not a node id (0..{self.node_count - 1})."
                )
            if mid == SINK_ID:
                raise ConfigurationError("The sink cannot be a malicious node.")
        if self.attack_kind == AttackKind.NONE and self.malicious_ids:
            raise ConfigurationError("Malicious ids given without an attack kind.")
        if self.attack_kind != AttackKind.NONE and not self.malicious_ids:
            raise ConfigurationError(
                f"Attack '{self.attack_kind.value}' requires malicious ids."
            )
        if self.attack_kind == AttackKind.FLOODING and len(self.malicious_ids) < 3:
            raise ConfigurationError("Flooding requires at least three malicious ids.")

    @property
    def flood_begin(self) -> float:
        """Time at which flooders start, half the run by default."""
        return self.sim_duration / 2 if self.flood_start is None else self.flood_start

    @classmethod
    def from_mapping(cls, mapping: dict[str, Any]) -> SimConfig:
        """Builds a configuration from a flat key/value mapping.

        Unknown keys raise ConfigurationError.

        """
        known = {f.name for f in fields(cls)}
        unknown = set(mapping) - known
        if unknown:
            raise ConfigurationError(
                f"Unknown simulation keys: {', '.join(sorted(unknown))}."
            )
        return cls(**mapping)

    def to_dict(self) -> dict[str, Any]:
        return {
            "node_count": self.node_count,
            "malicious_ids": sorted(self.malicious_ids),
            "attack_kind": self.attack_kind.value,
            "grayhole_drop_fraction": self.grayhole_drop_fraction,
            "topo_dims": list(self.topo_dims),
            "sim_duration": self.sim_duration,
            "data_interval": self.data_interval,
            "initial_energy": self.initial_energy,
            "frequency_khz": self.frequency_khz,
            "vbf_pipe_radius": self.vbf_pipe_radius,
            "tx_range": self.tx_range,
            "tx_cost": self.tx_cost,
            "rx_cost": self.rx_cost,
            "flood_multiple": self.flood_multiple,
            "flood_start": self.flood_start,
            "rng_seed": self.rng_seed,
        }


# Entities


class Node(TraceEntity):
    """Sensor node, or the surface sink when 'id' is SINK_ID."""

    def __init__(
        self,
        node_id: int,
        position: Position,
        initial_energy: float,
        behaviour: Behaviour = Behaviour.HONEST,
    ) -> None:
        if node_id < 0:
            raise ValueError(f"Node id must be non-negative, not '{node_id}'.")
        if initial_energy <= 0:
            raise ValueError("Node initial energy must be positive.")
        self.id = node_id
        self.position = tuple(float(c) for c in position)
        self.initial_energy = float(initial_energy)
        self.residual_energy = float(initial_energy)
        self.et = 0.0
        self.er = 0.0
        self.behaviour = Behaviour(behaviour)

    @property
    def is_sink(self) -> bool:
        return self.id == SINK_ID

    @property
    def is_malicious(self) -> bool:
        return self.behaviour != Behaviour.HONEST

    def can_spend(self, cost: float) -> bool:
        return self.residual_energy >= cost

    def spend_tx(self, cost: float) -> None:
        """Charges a transmission; residual energy never goes below zero."""
        if not self.can_spend(cost):
            raise ValueError(f"Node {self.id} has no energy left to transmit.")
        self.residual_energy -= cost
        self.et += cost

    def spend_rx(self, cost: float) -> None:
        """Charges a reception; residual energy never goes below zero."""
        if not self.can_spend(cost):
            raise ValueError(f"Node {self.id} has no energy left to receive.")
        self.residual_energy -= cost
        self.er += cost

    def distance_to(self, other: Node | Position) -> float:
        pos = other.position if isinstance(other, Node) else other
        return math.dist(self.position, pos)

    @property
    def sorting_key(self) -> tuple[Any, ...]:
        return ("N", self.id, self.position, self.behaviour.value)

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "position": list(self.position),
            "residual_energy": self.residual_energy,
            "et": self.et,
            "er": self.er,
            "behaviour": self.behaviour.value,
        }

    def __str__(self) -> str:
        x, y, z = self.position
        role = "SINK" if self.is_sink else self.behaviour.value.upper()
        return f"[{self.id:03d}] ({x:6.2f}, {y:6.2f}, {z:6.2f}) {role}"


class TraceRecord(TraceEntity):
    """One simulator event row."""

    def __init__(
        self,
        status: PacketStatus | str,
        time: float,
        sender: int,
        receiver: int,
        layer: TraceLayer | str,
        pkt_no: int,
        src_port: int = 0,
        dst_port: int = 0,
        flag: int = 0,
        info2: int = 0,
        energy: float = 0.0,
        et: float = 0.0,
        er: float = 0.0,
    ) -> None:
        self.status = PacketStatus(status)
        self.layer = TraceLayer(layer)
        if time < 0:
            raise ValueError(f"Trace time must be non-negative, not '{time}'.")
        if pkt_no < 0:
            raise ValueError(f"Packet number must be non-negative, not '{pkt_no}'.")
        self.time = float(time)
        self.sender = int(sender)
        self.receiver = int(receiver)
        self.pkt_no = int(pkt_no)
        self.src_port = int(src_port)
        self.dst_port = int(dst_port)
        self.flag = int(flag)
        self.info2 = int(info2)
        self.energy = float(energy)
        self.et = float(et)
        self.er = float(er)

    @property
    def sorting_key(self) -> tuple[Any, ...]:
        return (
            self.time,
            self.pkt_no,
            self.status.value,
            self.layer.value,
            self.sender,
            self.receiver,
            self.src_port,
            self.dst_port,
            self.flag,
            self.info2,
            self.energy,
            self.et,
            self.er,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status.value,
            "time": self.time,
            "sender": self.sender,
            "receiver": self.receiver,
            "layer": self.layer.value,
            "pkt_no": self.pkt_no,
            "src_port": self.src_port,
            "dst_port": self.dst_port,
            "flag": self.flag,
            "info2": self.info2,
            "energy": self.energy,
            "et": self.et,
            "er": self.er,
        }

    def __str__(self) -> str:
        return (
            f"{self.status.value} {self.time:.6f} _{self.sender}_ -> _{self.receiver}_ "
            f"{self.layer.value} #{self.pkt_no}"
        )


@dataclass
class FeatureVector:
    """The engineered features of one trace row, plus its label.

    Categorical fields hold raw category values; the dataset encoding table
    turns them into integer codes.

    """

    packet_status_cat: str
    sender_mac: int
    et: float
    packet_info2_cat: int
    cumulative_count: int
    sender_rtr: int
    mac_ratio: float
    er: float
    rtr_ratio: float
    energy: float
    time: float
    sent_packet_number: int
    dst_port_cat: int
    src_port_cat: int
    flag_cat: int
    trace_type_cat: str
    attack_cat: int = 0
    extra: dict[str, Any] = field(default_factory=dict, compare=False, repr=False)

    def to_dict(self) -> dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "extra"}
