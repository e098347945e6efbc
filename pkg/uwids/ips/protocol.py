# 2026/09/18
"""
protocol.py - Session key reset between the surface buoy and a sensor node.

Defines SessionContext, SessionKey, Buoy, NodeEndpoint and the protocol
steps 'buoy_initiate', 'make_m1', 'node_handle_m1', 'buoy_handle_m2',
'buoy_confirm' and 'node_activate'.

Exchange, once the detection pipeline flags a node:
1. The buoy checks the node's RSSI against its registered band, isolates
the node and sends M1: its signature over the zero signal, a nonce psi1 and
a timestamp t1, sealed for the node.
2. The node checks t1 freshness and the signature, draws a seed epsilon and
a nonce psi2, and answers M2: (epsilon, psi2, t2, rssi) sealed for the buoy,
the binding digest of that ciphertext with the old session key, and its
signature over the confirmation message and the digest.
3. The buoy checks the binding, the signature, t2 freshness and the RSSI,
then both sides hold KDF(psi1, psi2, epsilon). The buoy retires the old key
and lifts the isolation.

The node installs its new key only when the buoy proves it holds the same
key (KeyConfirm). Every failed check aborts the exchange: the pending state
is cleared, both sides keep the old key and the node stays isolated.

"""

from __future__ import annotations

import hmac
import logging
from dataclasses import dataclass
from typing import Any, Callable

from uwids.errors import (
    BindingError,
    ConfigurationError,
    DuplicateExchangeError,
    FreshnessError,
    NoPendingExchangeError,
    ProtocolError,
    RssiRejected,
)
from uwids.ips.primitives import (
    KEY_BYTES,
    KeyPair,
    PublicIdentity,
    derive_session_key,
    digest,
    key_fingerprint,
    open_sealed,
    random_bytes,
    seal,
    sign,
    verify,
    verify_fingerprint,
)
from uwids.ips.rssi import RssiRegistry, rssi_within_range
from uwids.ips.wire import (
    M1,
    M1_TAG,
    M2,
    M2_TAG,
    KeyConfirm,
    decode_double,
    encode_double,
    encode_uint,
    pack_fields,
    unpack_fields,
)

logger = logging.getLogger(__name__)

Z_SIGNAL = b"uwids-zero-signal"
CONFIRMATION = b"uwids-key-reset-confirm"
DELTA_T = 30.0


@dataclass
class PendingExchange:
    psi1: bytes
    t1: float


@dataclass
class SessionContext:
    """One side's view of its session with a peer."""

    keypair: KeyPair
    peer: PublicIdentity
    sk_old: bytes
    delta_t: float = DELTA_T
    pending: PendingExchange | None = None

    def __post_init__(self) -> None:
        if self.delta_t <= 0:
            raise ConfigurationError(f"delta_t must be positive, not '{self.delta_t}'.")
        if len(self.sk_old) != KEY_BYTES:
            raise ConfigurationError(f"Session keys hold {KEY_BYTES} bytes.")

    def is_fresh(self, timestamp: float, now: float) -> bool:
        return abs(now - timestamp) <= self.delta_t


@dataclass(frozen=True)
class SessionKey:
    node_id: int
    key: bytes


class Buoy:
    """Surface buoy: one session per registered node, the RSSI registry,
    the isolated node ids and an event log."""

    def __init__(
        self, keypair: KeyPair, registry: RssiRegistry, *, delta_t: float = DELTA_T
    ) -> None:
        self.keypair = keypair
        self.registry = registry
        self.delta_t = delta_t
        self.sessions: dict[int, SessionContext] = {}
        self.isolated: set[int] = set()
        self.events: list[dict[str, Any]] = []

    @property
    def identity(self) -> PublicIdentity:
        return self.keypair.public

    def register(self, node_id: int, identity: PublicIdentity, sk_old: bytes) -> SessionContext:
        self.sessions[node_id] = SessionContext(self.keypair, identity, sk_old, self.delta_t)
        return self.sessions[node_id]

    def context(self, node_id: int) -> SessionContext:
        try:
            return self.sessions[node_id]
        except KeyError:
            raise ProtocolError(f"Node {node_id} is not registered.") from None

    def is_isolated(self, node_id: int) -> bool:
        return node_id in self.isolated

    def log(self, event: str, node_id: int, now: float, **detail: Any) -> None:
        self.events.append({"time": now, "node": node_id, "event": event, **detail})
        logger.info("Buoy: %s for node %d at t=%.3f %s", event, node_id, now, detail or "")


class NodeEndpoint:
    """Sensor node side: its session with the buoy and the candidate key of
    the exchange in progress.

    `rssi_source` returns the signal strength the node reports in M2.

    """

    def __init__(
        self,
        node_id: int,
        keypair: KeyPair,
        buoy: PublicIdentity,
        sk_old: bytes,
        rssi_source: Callable[[], float],
        *,
        delta_t: float = DELTA_T,
    ) -> None:
        self.node_id = node_id
        self.context = SessionContext(keypair, buoy, sk_old, delta_t)
        self.rssi_source = rssi_source
        self.candidate: bytes | None = None

    @property
    def session_key(self) -> bytes:
        return self.context.sk_old


def buoy_initiate(buoy: Buoy, node_id: int, now: float, measured_rssi: float) -> M1:
    """Starts a key reset for a flagged node.

    Raises RssiRejected (after isolating the node) when `measured_rssi` is
    outside the node's band, and DuplicateExchangeError when an exchange
    with the node is already pending. A pending exchange older than the
    freshness window is dropped first.

    """
    ctx = buoy.context(node_id)
    if ctx.pending is not None and now - ctx.pending.t1 > ctx.delta_t:
        buoy.log("expired", node_id, now, t1=ctx.pending.t1)
        ctx.pending = None
    if ctx.pending is not None:
        raise DuplicateExchangeError(f"An exchange with node {node_id} is already pending.")
    buoy.isolated.add(node_id)
    if not rssi_within_range(buoy.registry, node_id, measured_rssi):
        buoy.log("isolated", node_id, now, reason="rssi", rssi=measured_rssi)
        raise RssiRejected(f"RSSI {measured_rssi:.2f} of node {node_id} is out of range.")

    psi1 = random_bytes()
    ctx.pending = PendingExchange(psi1, now)
    buoy.log("m1_sent", node_id, now)
    return make_m1(buoy.keypair, ctx.peer, node_id, psi1, now)


def make_m1(
    signer: KeyPair, recipient: PublicIdentity, node_id: int, psi1: bytes, now: float
) -> M1:
    """Zero signal signed by `signer`, sealed for `recipient` with psi1 and `now`."""
    t1 = encode_double(now)
    signature = sign(signer, pack_fields(Z_SIGNAL, encode_uint(node_id), psi1, t1))
    return M1(node_id, seal(recipient, pack_fields(signature, psi1, t1), _aad(M1_TAG, node_id)))


def node_handle_m1(node: NodeEndpoint, m1: M1, now: float) -> M2:
    """Answers a buoy's M1, keeping the derived key as a candidate."""
    if m1.node_id != node.node_id:
        raise ProtocolError(f"M1 for node {m1.node_id} reached node {node.node_id}.")
    ctx = node.context
    signature, psi1, t1 = unpack_fields(
        open_sealed(ctx.keypair, m1.sealed, _aad(M1_TAG, node.node_id)), 3
    )
    if not ctx.is_fresh(decode_double(t1), now):
        raise FreshnessError(f"M1 timestamp {decode_double(t1):.3f} is stale at {now:.3f}.")
    verify(ctx.peer, signature, pack_fields(Z_SIGNAL, encode_uint(node.node_id), psi1, t1))

    epsilon, psi2 = random_bytes(), random_bytes()
    inner = pack_fields(epsilon, psi2, encode_double(now), encode_double(node.rssi_source()))
    sealed = seal(ctx.peer, inner, _aad(M2_TAG, node.node_id))
    binding = digest(sealed, ctx.sk_old)
    m2 = M2(
        node.node_id,
        sealed,
        CONFIRMATION,
        binding,
        sign(ctx.keypair, pack_fields(CONFIRMATION, binding)),
    )
    node.candidate = derive_session_key(psi1, psi2, epsilon)
    ctx.pending = PendingExchange(psi1, decode_double(t1))
    return m2


def buoy_handle_m2(buoy: Buoy, m2: M2, now: float) -> SessionKey:
    """Completes the exchange, or aborts it on the first failed check."""
    ctx = buoy.context(m2.node_id)
    pending = ctx.pending
    if pending is None:
        raise NoPendingExchangeError(f"No exchange pending with node {m2.node_id}.")
    try:
        key = _accept_m2(buoy, ctx, pending, m2, now)
    except ProtocolError as exc:
        ctx.pending = None
        buoy.log("aborted", m2.node_id, now, reason=type(exc).__name__)
        raise

    ctx.sk_old = key
    ctx.pending = None
    buoy.isolated.discard(m2.node_id)
    buoy.log("completed", m2.node_id, now)
    return SessionKey(m2.node_id, key)


def buoy_confirm(buoy: Buoy, node_id: int) -> KeyConfirm:
    """Proof of the buoy's current key, sent once an exchange completes."""
    return KeyConfirm(node_id, key_fingerprint(buoy.context(node_id).sk_old, node_id))


def node_activate(node: NodeEndpoint, confirm: KeyConfirm) -> SessionKey:
    """Installs the candidate key once the buoy proves it holds it."""
    if node.candidate is None:
        raise NoPendingExchangeError("No candidate key to activate.")
    if confirm.node_id != node.node_id:
        raise ProtocolError(f"Confirmation for node {confirm.node_id} reached node {node.node_id}.")
    verify_fingerprint(node.candidate, node.node_id, confirm.fingerprint)
    node.context.sk_old = node.candidate
    node.candidate = None
    node.context.pending = None
    return SessionKey(node.node_id, node.context.sk_old)


# Auxiliar functions


def _aad(tag: bytes, node_id: int) -> bytes:
    return pack_fields(tag, encode_uint(node_id))


def _accept_m2(
    buoy: Buoy, ctx: SessionContext, pending: PendingExchange, m2: M2, now: float
) -> bytes:
    binding = digest(m2.sealed, ctx.sk_old)
    if not hmac.compare_digest(binding, m2.binding):
        raise BindingError("M2 ciphertext is not bound to the current session key.")
    if m2.confirmation != CONFIRMATION:
        raise ProtocolError("Unexpected confirmation message.")
    verify(ctx.peer, m2.signature, pack_fields(CONFIRMATION, binding))

    epsilon, psi2, t2, rssi = unpack_fields(
        open_sealed(buoy.keypair, m2.sealed, _aad(M2_TAG, m2.node_id)), 4
    )
    if not ctx.is_fresh(decode_double(t2), now):
        raise FreshnessError(f"M2 timestamp {decode_double(t2):.3f} is stale at {now:.3f}.")
    if now - pending.t1 > ctx.delta_t:
        raise FreshnessError(f"Exchange started at {pending.t1:.3f} expired at {now:.3f}.")
    if not rssi_within_range(buoy.registry, m2.node_id, decode_double(rssi)):
        raise RssiRejected(f"Reported RSSI {decode_double(rssi):.2f} is out of range.")

    key = derive_session_key(pending.psi1, psi2, epsilon)
    if key == ctx.sk_old:
        raise ProtocolError("Derived key equals the retired one.")
    return key
