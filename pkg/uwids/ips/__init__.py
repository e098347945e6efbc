# 2026/09/19
"""Intrusion prevention: session key reset between buoy and node.

Defines the cryptographic primitives, the wire format of the protocol
messages, the buoy and node state machines, RSSI gating, and the scripted
demo scenarios.

"""

from .demo import SCENARIOS, Loopback, ScenarioResult, format_table, run_demo, run_scenario
from .primitives import (
    KeyPair,
    PublicIdentity,
    derive_session_key,
    digest,
    generate_keypair,
    key_fingerprint,
    open_sealed,
    seal,
    sign,
    verify,
)
from .protocol import (
    CONFIRMATION,
    DELTA_T,
    Z_SIGNAL,
    Buoy,
    NodeEndpoint,
    SessionContext,
    SessionKey,
    buoy_confirm,
    buoy_handle_m2,
    buoy_initiate,
    make_m1,
    node_activate,
    node_handle_m1,
)
from .rssi import RssiRange, RssiRegistry, build_registry, measure_rssi, rssi_within_range
from .wire import M1, M2, KeyConfirm, pack_fields, unpack_fields
