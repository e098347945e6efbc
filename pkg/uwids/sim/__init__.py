# 2026/09/05
"""Underwater network simulator.

Defines the node placement and vector-based forwarding rules, and the
discrete-event engine that turns a SimConfig into trace records.

"""

from .engine import Action, Outcome, Simulation, apply_attack_behaviour, run_simulation
from .topology import (
    ForwardDecision,
    attack_roles,
    build_topology,
    choose_malicious_ids,
    flood_target,
    next_hop,
    propagation_delay,
    route,
    vbf_forward_decision,
)
