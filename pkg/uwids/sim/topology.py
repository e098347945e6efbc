# 2026/09/04
"""
topology.py - Node placement and vector-based forwarding.

Defines 'build_topology', which places the nodes of a network, and the
geometric rules of vector-based forwarding (VBF): 'vbf_forward_decision',
'next_hop' and 'propagation_delay'.

Forwarding is hop-by-hop: at every hop the routing vector goes from the node
holding the packet to the sink, and only nodes inside the pipe of radius
'vbf_pipe_radius' around that vector, within acoustic range and closer to
the sink, are candidates. The candidate with the largest advance wins.

"""

from __future__ import annotations

import logging
import math
from enum import Enum

import numpy as np

from uwids.errors import ConfigurationError, DegenerateVectorError
from uwids.model import (
    ATTACK_TO_BEHAVIOUR,
    SINK_ID,
    AttackKind,
    Behaviour,
    Node,
    Position,
    SimConfig,
)
from uwids.util import find

logger = logging.getLogger(__name__)

SOUND_SPEED = 1500.0  # m/s
JITTER = 0.3  # fraction of a lattice cell
MAX_PLACEMENT_ATTEMPTS = 200


class ForwardDecision(str, Enum):
    FORWARD = "forward"
    IGNORE = "ignore"


def build_topology(config: SimConfig) -> list[Node]:
    """Places 'config.node_count' nodes inside the topography.

    The sink (node 0) sits at the centre of the surface (z = 0). The other
    nodes fill a jittered cubic lattice: the lattice has k^3 slots with
    k = ceil((n - 1) ** (1/3)), visited in a seeded random order, and every
    node is moved by up to JITTER of a cell in each axis.

    Placements where some sensor has no route to the sink are drawn again,
    up to MAX_PLACEMENT_ATTEMPTS times, from the same seeded generator.

    """
    config.validate()
    rng = np.random.default_rng([config.rng_seed, 1])
    dims = np.asarray(config.topo_dims)

    sensors = config.node_count - 1
    k = max(1, math.ceil(round(sensors ** (1 / 3), 9)))
    cell = dims / k
    slots = np.array(
        [(i, j, m) for i in range(k) for j in range(k) for m in range(k)], dtype=float
    )
    behaviour = ATTACK_TO_BEHAVIOUR[config.attack_kind]
    sink_pos = (dims[0] / 2, dims[1] / 2, 0.0)

    for attempt in range(1, MAX_PLACEMENT_ATTEMPTS + 1):
        order = rng.permutation(len(slots))[:sensors]
        centres = (slots[order] + 0.5) * cell
        jitter = rng.uniform(-JITTER, JITTER, size=centres.shape) * cell
        positions = np.clip(centres + jitter, 0.0, dims)

        nodes = [Node(SINK_ID, sink_pos, config.initial_energy)]
        for i, pos in enumerate(positions, start=1):
            nodes.append(
                Node(
                    i,
                    tuple(round(float(c), 6) for c in pos),
                    config.initial_energy,
                    behaviour if i in config.malicious_ids else Behaviour.HONEST,
                )
            )
        unreachable = [n.id for n in nodes[1:] if not route(nodes, n, config)[-1].is_sink]
        if not unreachable:
            logger.debug("Placement found after %d attempt(s)", attempt)
            return nodes

    logger.warning(
        "No fully connected placement after %d attempts; nodes %s cannot reach the sink",
        MAX_PLACEMENT_ATTEMPTS,
        unreachable,
    )
    return nodes


def choose_malicious_ids(
    node_count: int, fraction: float, rng_seed: int = 0
) -> frozenset[int]:
    """Draws ceil(fraction * node_count) malicious ids among the sensors."""
    if not (0.0 < fraction < 1.0):
        raise ConfigurationError(f"Malicious fraction must lie in (0, 1), not '{fraction}'.")
    count = math.ceil(fraction * node_count)
    if count > node_count - 1:
        raise ConfigurationError("Not enough sensor nodes for the malicious fraction.")
    rng = np.random.default_rng([rng_seed, 2])
    ids = rng.choice(np.arange(1, node_count), size=count, replace=False)
    return frozenset(int(i) for i in ids)


def vbf_forward_decision(
    node: Node | Position,
    packet_source_pos: Position,
    sink_pos: Position,
    pipe_radius: float,
) -> ForwardDecision:
    """Decides whether `node` lies inside the routing pipe.

    The pipe is the set of points whose distance to the segment from
    `packet_source_pos` to `sink_pos` is at most `pipe_radius` (boundary
    included).

    """
    if pipe_radius <= 0:
        raise ConfigurationError(f"Pipe radius must be positive, not '{pipe_radius}'.")
    pos = node.position if isinstance(node, Node) else node
    distance = segment_distance(pos, packet_source_pos, sink_pos)
    return ForwardDecision.FORWARD if distance <= pipe_radius else ForwardDecision.IGNORE


def segment_distance(point: Position, start: Position, end: Position) -> float:
    """Distance from `point` to the segment [start, end]."""
    p, a, b = (np.asarray(v, dtype=float) for v in (point, start, end))
    ab = b - a
    length2 = float(ab @ ab)
    if length2 == 0.0:
        raise DegenerateVectorError("Routing vector has zero length (source is the sink).")
    t = min(1.0, max(0.0, float((p - a) @ ab) / length2))
    return float(np.linalg.norm(p - (a + t * ab)))


def propagation_delay(distance: float) -> float:
    """Acoustic propagation delay, in seconds, over `distance` metres."""
    if distance < 0:
        raise ValueError(f"Distance must be non-negative, not '{distance}'.")
    return distance / SOUND_SPEED


def neighbours(nodes: list[Node], node: Node, tx_range: float) -> list[Node]:
    """Nodes other than `node` within `tx_range` of it."""
    return find(nodes, lambda n: n.id != node.id and node.distance_to(n) <= tx_range)


def next_hop(
    nodes: list[Node],
    holder: Node,
    config: SimConfig,
    *,
    min_energy: float = 0.0,
) -> Node | None:
    """Chooses the node `holder` hands a packet to, on its way to the sink.

    Nodes with less than `min_energy` left are not candidates. Returns None
    when no candidate exists.

    """
    sink = nodes[SINK_ID]
    if holder.is_sink:
        return None
    own_distance = holder.distance_to(sink)
    best, best_advance = None, 0.0
    for cand in neighbours(nodes, holder, config.tx_range):
        if not cand.can_spend(min_energy):
            continue
        advance = own_distance - cand.distance_to(sink)
        if advance <= best_advance:
            continue
        decision = vbf_forward_decision(
            cand, holder.position, sink.position, config.vbf_pipe_radius
        )
        if decision == ForwardDecision.FORWARD:
            best, best_advance = cand, advance
    return best


def route(nodes: list[Node], source: Node, config: SimConfig) -> list[Node]:
    """Static path from `source` towards the sink, ignoring energy.

    The path ends at the sink, or at the last node that found no candidate.

    """
    path = [source]
    while not path[-1].is_sink:
        hop = next_hop(nodes, path[-1], config)
        if hop is None or hop in path:
            break
        path.append(hop)
    return path


def relay_load(nodes: list[Node], config: SimConfig) -> dict[int, int]:
    """Number of sources whose static path each node relays."""
    load = {n.id: 0 for n in nodes}
    for source in nodes[1:]:
        for relay in route(nodes, source, config)[1:-1]:
            load[relay.id] += 1
    return load


def flood_target(nodes: list[Node], config: SimConfig) -> Node | None:
    """Sink-adjacent relay with the lightest (non-zero) relayed load.

    Ties go to the lowest id. Returns None when no node relays traffic.

    """
    load = relay_load(nodes, config)
    sink = nodes[SINK_ID]
    parents = find(
        nodes[1:], lambda n: load[n.id] > 0 and n.distance_to(sink) <= config.tx_range
    )
    if not parents:
        return None
    return min(parents, key=lambda n: (load[n.id], n.id))


def flooding_candidates(
    nodes: list[Node], config: SimConfig, count: int = 3
) -> frozenset[int]:
    """Ids of the `count` nearest sensor neighbours of the flood target."""
    target = flood_target(nodes, config)
    if target is None:
        raise ConfigurationError("The topology has no relaying parent to flood.")
    others = sorted(
        (n for n in nodes[1:] if n.id != target.id),
        key=lambda n: (target.distance_to(n), n.id),
    )
    return frozenset(n.id for n in others[:count])


def relay_candidates(
    nodes: list[Node], config: SimConfig, count: int = 1
) -> frozenset[int]:
    """Ids of the `count` most loaded relays, for dropping attacks."""
    load = relay_load(nodes, config)
    ranked = sorted(
        (n for n in nodes[1:] if load[n.id] > 0), key=lambda n: (-load[n.id], n.id)
    )
    if not ranked:
        raise ConfigurationError("The topology has no relaying node.")
    return frozenset(n.id for n in ranked[:count])


def attack_roles(nodes: list[Node], config: SimConfig, attack: AttackKind) -> frozenset[int]:
    """Default malicious ids for `attack` on this topology."""
    if attack == AttackKind.NONE:
        return frozenset()
    if attack == AttackKind.FLOODING:
        return flooding_candidates(nodes, config)
    return relay_candidates(nodes, config, count=2)
