# 2026/09/05
"""
engine.py - Discrete-event simulation of an underwater sensor network.

Defines class 'Simulation' and function 'run_simulation', which run a
network under one attack scenario and return its trace records, and
'apply_attack_behaviour', the per-node forwarding policy.

Traffic model:
- One application packet every 'data_interval' seconds, network-wide, from
the sensors in round-robin order, routed hop by hop to the sink.
- Under flooding, the malicious nodes also send FLOOD packets to the
flood target from 'flood_begin' on. All flooders together send
'flood_multiple' times the packet rate of a single honest sensor.

Every hop logs a send row by the transmitter and a receive row by the
receiver. The first hop is sent at RTR, relays send at MAC, and a receiver
logs at RTR only when it is the final destination. Drops are logged at RTR
by the node that drops the packet.

"""

from __future__ import annotations

import logging
from enum import Enum

import numpy as np
import simpy

from uwids.model import (
    APP_PORT,
    ATTACK_PORT,
    FLAG_DATA,
    FLAG_DROPPED,
    FLAG_FORWARDED,
    INFO_DATA,
    INFO_FLOOD,
    ROUTING_PORT,
    SINK_ID,
    AttackKind,
    Behaviour,
    Node,
    PacketStatus,
    SimConfig,
    TraceLayer,
    TraceRecord,
)
from uwids.sim.topology import build_topology, flood_target, next_hop, propagation_delay

logger = logging.getLogger(__name__)


class Action(str, Enum):
    FORWARD_PACKET = "forward_packet"


class Outcome(str, Enum):
    FORWARDED = "forwarded"
    DROPPED = "dropped"


def apply_attack_behaviour(
    node: Node,
    action: Action = Action.FORWARD_PACKET,
    rng: np.random.Generator | None = None,
    *,
    drop_fraction: float = 0.4,
) -> Outcome:
    """Decides what `node` does with a packet it was asked to forward.

    Honest nodes and flooders forward, blackholes always drop, and grayholes
    drop with probability `drop_fraction`, drawn from `rng`.

    """
    action = Action(action)
    if node.behaviour == Behaviour.BLACKHOLE:
        return Outcome.DROPPED
    if node.behaviour == Behaviour.GRAYHOLE:
        if rng is None:
            raise ValueError("A grayhole decision needs a random generator.")
        return Outcome.DROPPED if rng.random() < drop_fraction else Outcome.FORWARDED
    return Outcome.FORWARDED


class Simulation:
    """One run of the network described by a SimConfig.

    The run is single-threaded and fully determined by the configuration,
    seed included. After 'run()', 'nodes' holds the final energy state and
    'records' the trace.

    """

    def __init__(self, config: SimConfig) -> None:
        config.validate()
        self.config = config
        self.nodes = build_topology(config)
        self.env = simpy.Environment()
        self.rng = np.random.default_rng([config.rng_seed, 3])
        self.records: list[TraceRecord] = []
        self._packets = 0

    @property
    def sink(self) -> Node:
        return self.nodes[SINK_ID]

    @property
    def flooders(self) -> list[Node]:
        return [n for n in self.nodes if n.behaviour == Behaviour.FLOODER]

    def run(self) -> list[TraceRecord]:
        """Runs the simulation once and returns the trace records."""
        if self.records:
            raise RuntimeError("Simulation already run; build a new one.")

        self.env.process(self._traffic())
        if self.config.attack_kind == AttackKind.FLOODING:
            target = flood_target(self.nodes, self.config)
            for k, flooder in enumerate(self.flooders):
                self.env.process(self._flood(flooder, target, k))

        self.env.run(until=self.config.sim_duration)
        logger.info(
            "Simulated %s scenario: %d packets, %d trace rows",
            self.config.attack_kind.value,
            self._packets,
            len(self.records),
        )
        return self.records

    # Processes

    def _traffic(self):
        sources = self.nodes[1:]
        turn = 0
        while True:
            source = sources[turn % len(sources)]
            turn += 1
            self.env.process(self._deliver(source, self._new_packet()))
            yield self.env.timeout(self.config.data_interval)

    def _flood(self, flooder: Node, target: Node | None, rank: int):
        cfg = self.config
        flooders = len(self.flooders)
        sources = len(self.nodes) - 1
        interval = cfg.data_interval * sources * flooders / cfg.flood_multiple
        # Flooders take turns within one interval
        yield self.env.timeout(cfg.flood_begin + rank * interval / flooders)
        while True:
            dest = target
            if dest is None or dest is flooder or flooder.distance_to(dest) > cfg.tx_range:
                dest = next_hop(self.nodes, flooder, cfg)
            if dest is not None:
                self.env.process(self._flood_hop(flooder, dest, self._new_packet()))
            yield self.env.timeout(interval)

    def _deliver(self, source: Node, pkt_no: int):
        cfg = self.config
        holder = source
        first = True
        while True:
            nxt = next_hop(self.nodes, holder, cfg, min_energy=cfg.rx_cost)
            if nxt is None or not holder.can_spend(cfg.tx_cost):
                receiver = nxt.id if nxt is not None else holder.id
                self._drop(holder.id, receiver, pkt_no, holder, INFO_DATA)
                return

            holder.spend_tx(cfg.tx_cost)
            self._log(
                PacketStatus.SEND,
                holder,
                nxt,
                TraceLayer.RTR if first else TraceLayer.MAC,
                pkt_no,
                src_port=APP_PORT if first else ROUTING_PORT,
                dst_port=APP_PORT if nxt.is_sink else ROUTING_PORT,
                flag=FLAG_DATA if first else FLAG_FORWARDED,
                info2=INFO_DATA,
                logger_node=holder,
            )
            yield self.env.timeout(propagation_delay(holder.distance_to(nxt)))

            if not nxt.can_spend(cfg.rx_cost):
                self._drop(holder.id, nxt.id, pkt_no, nxt, INFO_DATA)
                return
            nxt.spend_rx(cfg.rx_cost)
            self._log(
                PacketStatus.RECEIVE,
                holder,
                nxt,
                TraceLayer.RTR if nxt.is_sink else TraceLayer.MAC,
                pkt_no,
                src_port=APP_PORT if first else ROUTING_PORT,
                dst_port=APP_PORT if nxt.is_sink else ROUTING_PORT,
                flag=FLAG_DATA if first else FLAG_FORWARDED,
                info2=INFO_DATA,
                logger_node=nxt,
            )
            if nxt.is_sink:
                return

            outcome = apply_attack_behaviour(
                nxt, rng=self.rng, drop_fraction=cfg.grayhole_drop_fraction
            )
            if outcome == Outcome.DROPPED:
                self._drop(holder.id, nxt.id, pkt_no, nxt, INFO_DATA)
                return
            holder, first = nxt, False

    def _flood_hop(self, flooder: Node, dest: Node, pkt_no: int):
        cfg = self.config
        if not flooder.can_spend(cfg.tx_cost):
            self._drop(flooder.id, dest.id, pkt_no, flooder, INFO_FLOOD)
            return
        flooder.spend_tx(cfg.tx_cost)
        ports = {"src_port": ATTACK_PORT, "dst_port": ATTACK_PORT}
        self._log(
            PacketStatus.SEND,
            flooder,
            dest,
            TraceLayer.RTR,
            pkt_no,
            flag=FLAG_DATA,
            info2=INFO_FLOOD,
            logger_node=flooder,
            **ports,
        )
        yield self.env.timeout(propagation_delay(flooder.distance_to(dest)))
        if not dest.can_spend(cfg.rx_cost):
            self._drop(flooder.id, dest.id, pkt_no, dest, INFO_FLOOD)
            return
        dest.spend_rx(cfg.rx_cost)
        self._log(
            PacketStatus.RECEIVE,
            flooder,
            dest,
            TraceLayer.RTR,
            pkt_no,
            flag=FLAG_DATA,
            info2=INFO_FLOOD,
            logger_node=dest,
            **ports,
        )

    # Auxiliar methods

    def _new_packet(self) -> int:
        pkt_no = self._packets
        self._packets += 1
        return pkt_no

    def _drop(
        self, sender: int, receiver: int, pkt_no: int, dropper: Node, info2: int
    ) -> None:
        self.records.append(
            TraceRecord(
                PacketStatus.DROP,
                self.env.now,
                sender,
                receiver,
                TraceLayer.RTR,
                pkt_no,
                src_port=ROUTING_PORT,
                dst_port=ROUTING_PORT,
                flag=FLAG_DROPPED,
                info2=info2,
                energy=dropper.residual_energy,
                et=dropper.et,
                er=dropper.er,
            )
        )

    def _log(
        self,
        status: PacketStatus,
        sender: Node,
        receiver: Node,
        layer: TraceLayer,
        pkt_no: int,
        *,
        src_port: int,
        dst_port: int,
        flag: int,
        info2: int,
        logger_node: Node,
    ) -> None:
        self.records.append(
            TraceRecord(
                status,
                self.env.now,
                sender.id,
                receiver.id,
                layer,
                pkt_no,
                src_port=src_port,
                dst_port=dst_port,
                flag=flag,
                info2=info2,
                energy=logger_node.residual_energy,
                et=logger_node.et,
                er=logger_node.er,
            )
        )


def run_simulation(config: SimConfig) -> list[TraceRecord]:
    """Runs the network described by `config` and returns its trace."""
    return Simulation(config).run()
