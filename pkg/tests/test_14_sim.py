# 2026/09/24
"""
test_14_sim.py - Tests for the network simulator
"""

import numpy as np
import pytest

from uwids.errors import ConfigurationError, DegenerateVectorError
from uwids.experiments import scenario_configs
from uwids.model import (
    INFO_DATA,
    INFO_FLOOD,
    AttackKind,
    Behaviour,
    Node,
    PacketStatus,
    SimConfig,
    TraceLayer,
)
from uwids.sim import (
    ForwardDecision,
    Simulation,
    apply_attack_behaviour,
    build_topology,
    choose_malicious_ids,
    propagation_delay,
    route,
    run_simulation,
    vbf_forward_decision,
)
from uwids.sim.engine import Outcome
from uwids.sim.topology import flood_target, segment_distance


@pytest.fixture
def scenarios(small_config):
    return {config.attack_kind: config for config in scenario_configs(small_config)}


# Topology


def test_topology(small_config):
    nodes = build_topology(small_config)
    assert len(nodes) == 16
    assert [n.id for n in nodes] == list(range(16))
    assert nodes[0].is_sink
    assert nodes[0].position == (50.0, 50.0, 0.0)
    for node in nodes:
        assert all(0.0 <= c <= d for c, d in zip(node.position, small_config.topo_dims))

    # Every sensor has a route to the sink
    for node in nodes[1:]:
        assert route(nodes, node, small_config)[-1].is_sink


def test_topology_seeded(small_config):
    first = [n.position for n in build_topology(small_config)]
    assert first == [n.position for n in build_topology(small_config)]

    other = SimConfig(node_count=16, rng_seed=small_config.rng_seed + 1)
    assert first != [n.position for n in build_topology(other)]


def test_vbf_pipe():
    source, sink = (0.0, 0.0, 100.0), (0.0, 0.0, 0.0)
    inside = vbf_forward_decision((20.0, 0.0, 50.0), source, sink, 20.0)
    outside = vbf_forward_decision((20.5, 0.0, 50.0), source, sink, 20.0)
    assert inside == ForwardDecision.FORWARD
    assert outside == ForwardDecision.IGNORE

    # Distance is to the segment, not to the line
    beyond = vbf_forward_decision((0.0, 0.0, 130.0), source, sink, 20.0)
    assert beyond == ForwardDecision.IGNORE

    with pytest.raises(DegenerateVectorError):
        vbf_forward_decision((1.0, 1.0, 1.0), sink, sink, 20.0)
    with pytest.raises(ConfigurationError):
        vbf_forward_decision((1.0, 1.0, 1.0), source, sink, 0.0)


def test_propagation_delay():
    assert propagation_delay(1500.0) == 1.0
    assert propagation_delay(0.0) == 0.0
    with pytest.raises(ValueError):
        propagation_delay(-1.0)


def test_choose_malicious_ids():
    ids = choose_malicious_ids(64, 0.2, rng_seed=5)
    assert len(ids) == 13
    assert all(1 <= i < 64 for i in ids)
    assert ids == choose_malicious_ids(64, 0.2, rng_seed=5)

    with pytest.raises(ConfigurationError):
        choose_malicious_ids(64, 1.5)


# Behaviours


def test_attack_behaviour():
    rng = np.random.default_rng(0)
    honest = Node(1, (0, 0, 0), 1.0)
    blackhole = Node(2, (0, 0, 0), 1.0, Behaviour.BLACKHOLE)
    grayhole = Node(3, (0, 0, 0), 1.0, Behaviour.GRAYHOLE)
    flooder = Node(4, (0, 0, 0), 1.0, Behaviour.FLOODER)

    assert apply_attack_behaviour(honest, rng=rng) == Outcome.FORWARDED
    assert apply_attack_behaviour(flooder, rng=rng) == Outcome.FORWARDED
    assert apply_attack_behaviour(blackhole, rng=rng) == Outcome.DROPPED

    outcomes = [apply_attack_behaviour(grayhole, rng=rng) for _ in range(10_000)]
    dropped = sum(o == Outcome.DROPPED for o in outcomes) / len(outcomes)
    assert dropped == pytest.approx(0.4, abs=0.03)

    with pytest.raises(ValueError):
        apply_attack_behaviour(grayhole)


# Runs


def test_run_normal(scenarios):
    records = run_simulation(scenarios[AttackKind.NONE])
    assert records
    times = [r.time for r in records]
    assert times == sorted(times)
    assert times[-1] <= 60.0
    assert all(r.energy >= 0 for r in records)

    # Packets reach the sink
    delivered = [r for r in records if r.receiver == 0 and r.status == PacketStatus.RECEIVE]
    assert delivered
    assert all(r.layer == TraceLayer.RTR for r in delivered)


def test_run_deterministic(scenarios):
    config = scenarios[AttackKind.GRAYHOLE]
    assert run_simulation(config) == run_simulation(config)


def test_run_blackhole(scenarios):
    config = scenarios[AttackKind.BLACKHOLE]
    records = run_simulation(config)
    malicious = config.malicious_ids

    # Blackholes never relay
    relayed = [
        r
        for r in records
        if r.sender in malicious and r.status == PacketStatus.SEND and r.layer == TraceLayer.MAC
    ]
    assert relayed == []
    drops = [r for r in records if r.status == PacketStatus.DROP and r.receiver in malicious]
    assert drops


def test_run_grayhole(scenarios):
    config = scenarios[AttackKind.GRAYHOLE]
    records = run_simulation(config)
    drops = [
        r
        for r in records
        if r.status == PacketStatus.DROP and r.receiver in config.malicious_ids
    ]
    assert drops


def test_run_flooding(scenarios):
    config = scenarios[AttackKind.FLOODING]
    records = run_simulation(config)
    flood = [r for r in records if r.info2 == INFO_FLOOD]
    assert flood
    assert min(r.time for r in flood) >= config.flood_begin
    sent = [r for r in flood if r.status == PacketStatus.SEND]
    assert {r.sender for r in sent} <= config.malicious_ids


def test_run_twice():
    simulation = Simulation(SimConfig(node_count=4, sim_duration=5.0, data_interval=1.0))
    simulation.run()
    with pytest.raises(RuntimeError):
        simulation.run()


# Whole-run invariants


@pytest.mark.parametrize("attack", list(AttackKind))
def test_energy_conservation(scenarios, attack):
    simulation = Simulation(scenarios[attack])
    records = simulation.run()
    for node in simulation.nodes:
        assert node.initial_energy - node.residual_energy == pytest.approx(node.et + node.er)
        assert node.residual_energy >= 0.0
    # Every trace row carries its node's balance at that time
    for r in records:
        assert r.energy == pytest.approx(simulation.config.initial_energy - r.et - r.er)


@pytest.mark.parametrize("attack", list(AttackKind))
def test_forwarding_stays_in_pipe(scenarios, attack):
    simulation = Simulation(scenarios[attack])
    records = simulation.run()
    positions = {n.id: n.position for n in simulation.nodes}
    sink = simulation.sink.position
    radius = simulation.config.vbf_pipe_radius

    hops = [r for r in records if r.status == PacketStatus.SEND and r.info2 == INFO_DATA]
    assert hops
    for r in hops:
        assert segment_distance(positions[r.receiver], positions[r.sender], sink) <= radius


def test_flooding_volume(scenarios):
    flooding = scenarios[AttackKind.FLOODING]
    normal = scenarios[AttackKind.NONE]
    target = flood_target(build_topology(flooding), flooding)
    assert target is not None

    def received(config):
        return sum(
            r.status == PacketStatus.RECEIVE
            and r.receiver == target.id
            and r.time >= flooding.flood_begin
            for r in run_simulation(config)
        )

    assert received(normal) > 0
    assert received(flooding) >= 5 * received(normal)
