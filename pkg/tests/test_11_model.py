# 2026/09/24
"""
test_11_model.py - Tests for the data model layer
"""

import pytest

from uwids.errors import ConfigurationError
from uwids.model import AttackKind, Behaviour, Node, PacketStatus, SimConfig, TraceRecord

# SimConfig


def test_config_defaults():
    config = SimConfig()
    assert config.node_count == 16
    assert config.sim_duration == 600.0
    assert config.data_interval == 0.1
    assert config.attack_kind == AttackKind.NONE
    assert config.flood_begin == 300.0


def test_config_bad_attributes():
    # Too few nodes
    with pytest.raises(ConfigurationError):
        SimConfig(node_count=1)

    # Drop fraction outside (0, 1)
    with pytest.raises(ConfigurationError):
        SimConfig(grayhole_drop_fraction=1.0)

    # The sink cannot attack
    with pytest.raises(ConfigurationError):
        SimConfig(attack_kind=AttackKind.BLACKHOLE, malicious_ids={0})

    # Attack without attackers, attackers without attack
    with pytest.raises(ConfigurationError):
        SimConfig(attack_kind=AttackKind.GRAYHOLE)
    with pytest.raises(ConfigurationError):
        SimConfig(malicious_ids={3})

    # Flooding needs three attackers
    with pytest.raises(ConfigurationError):
        SimConfig(attack_kind=AttackKind.FLOODING, malicious_ids={3, 4})

    # Errors are also ValueErrors
    with pytest.raises(ValueError):
        SimConfig(node_count=5000)


def test_config_mapping():
    config = SimConfig.from_mapping(
        {"node_count": 32, "attack_kind": "grayhole", "malicious_ids": [5, 9]}
    )
    assert config.attack_kind == AttackKind.GRAYHOLE
    assert config.malicious_ids == frozenset({5, 9})
    assert SimConfig.from_mapping(config.to_dict()) == config

    with pytest.raises(ConfigurationError):
        SimConfig.from_mapping({"nodes": 32})


# Node


def test_node_energy():
    node = Node(4, (1.0, 2.0, 3.0), 10.0)
    node.spend_tx(2.0)
    node.spend_rx(0.75)
    assert node.residual_energy == pytest.approx(7.25)
    assert node.et == 2.0
    assert node.er == 0.75

    with pytest.raises(ValueError):
        node.spend_tx(8.0)
    assert node.residual_energy == pytest.approx(7.25)


def test_node_roles():
    assert Node(0, (0, 0, 0), 1.0).is_sink
    assert not Node(1, (0, 0, 0), 1.0).is_malicious
    assert Node(2, (0, 0, 0), 1.0, Behaviour.FLOODER).is_malicious
    assert Node(1, (0, 0, 0), 1.0).distance_to((3.0, 4.0, 0.0)) == 5.0

    with pytest.raises(ValueError):
        Node(-1, (0, 0, 0), 1.0)


# TraceRecord


def test_record_sorting():
    records = [
        TraceRecord("r", 2.0, 1, 0, "RTR", 1),
        TraceRecord("s", 1.0, 1, 0, "MAC", 1),
        TraceRecord("s", 1.0, 1, 0, "MAC", 0),
    ]
    records.sort()
    assert [(r.time, r.pkt_no) for r in records] == [(1.0, 0), (1.0, 1), (2.0, 1)]
    assert records[0].status == PacketStatus.SEND


def test_record_bad_attributes():
    with pytest.raises(ValueError):
        TraceRecord("x", 1.0, 1, 0, "RTR", 1)
    with pytest.raises(ValueError):
        TraceRecord("s", -1.0, 1, 0, "RTR", 1)
    with pytest.raises(ValueError):
        TraceRecord("s", 1.0, 1, 0, "AGT", 1)
