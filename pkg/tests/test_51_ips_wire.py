# 2026/09/28
"""
test_51_ips_wire.py - Tests for the IPS primitives, wire format and RSSI model
"""

import pytest

from uwids.errors import AuthenticityError, ConfigurationError, InputRangeError, ProtocolError
from uwids.ips import (
    M1,
    M2,
    KeyConfirm,
    RssiRegistry,
    build_registry,
    derive_session_key,
    digest,
    generate_keypair,
    key_fingerprint,
    measure_rssi,
    open_sealed,
    pack_fields,
    rssi_within_range,
    seal,
    sign,
    unpack_fields,
    verify,
)
from uwids.ips.primitives import verify_fingerprint
from uwids.ips.rssi import RssiRange, expected_rssi, thorp_absorption
from uwids.ips.wire import decode_double, decode_uint, encode_double, encode_uint
from uwids.model import Node

PSI1, PSI2, EPSILON = b"\x01" * 32, b"\x02" * 32, b"\x03" * 32


@pytest.fixture(scope="module")
def alice():
    return generate_keypair()


@pytest.fixture(scope="module")
def bob():
    return generate_keypair()


# Field codec


def test_pack_fields():
    assert pack_fields(b"M1", b"") == b"\x00\x00\x00\x02M1\x00\x00\x00\x00"
    assert unpack_fields(pack_fields(b"a", b"", b"xyz")) == [b"a", b"", b"xyz"]
    assert unpack_fields(b"") == []


def test_unpack_errors():
    with pytest.raises(ProtocolError):
        unpack_fields(b"\x00\x00")
    with pytest.raises(ProtocolError):
        unpack_fields(b"\x00\x00\x00\x05abc")
    with pytest.raises(ProtocolError):
        unpack_fields(pack_fields(b"a", b"b"), 3)


def test_scalars():
    assert encode_uint(7) == b"\x00\x00\x00\x07"
    assert encode_double(1.0) == b"\x3f\xf0\x00\x00\x00\x00\x00\x00"
    assert decode_uint(encode_uint(4_000_000_000)) == 4_000_000_000
    assert decode_double(encode_double(-73.25)) == -73.25
    with pytest.raises(ProtocolError):
        decode_uint(b"\x00\x07")
    with pytest.raises(ProtocolError):
        decode_double(b"\x00" * 4)


# Messages


def test_m1_bytes():
    data = M1(7, b"abc").to_bytes()
    assert data == (
        b"\x00\x00\x00\x02M1"
        b"\x00\x00\x00\x04\x00\x00\x00\x07"
        b"\x00\x00\x00\x03abc"
    )
    assert M1.from_bytes(data) == M1(7, b"abc")


def test_m2_and_confirm_bytes():
    m2 = M2(3, b"s", b"c", b"b", b"g")
    data = m2.to_bytes()
    assert data.startswith(b"\x00\x00\x00\x02M2\x00\x00\x00\x04\x00\x00\x00\x03")
    assert len(unpack_fields(data)) == 6
    assert M2.from_bytes(data) == m2

    confirm = KeyConfirm(3, b"\xff" * 32)
    assert confirm.to_bytes()[:6] == b"\x00\x00\x00\x02KC"
    assert KeyConfirm.from_bytes(confirm.to_bytes()) == confirm


def test_wrong_tag():
    with pytest.raises(ProtocolError):
        M2.from_bytes(M1(1, b"x").to_bytes())
    with pytest.raises(ProtocolError):
        M1.from_bytes(pack_fields(b"M2", encode_uint(1), b"x"))


# Primitives


def test_seal(alice, bob):
    sealed = seal(bob.public, b"hello", b"aad")
    assert len(sealed) == 32 + 12 + len(b"hello") + 16
    assert open_sealed(bob, sealed, b"aad") == b"hello"

    with pytest.raises(AuthenticityError):
        open_sealed(alice, sealed, b"aad")
    with pytest.raises(AuthenticityError):
        open_sealed(bob, sealed, b"other")
    with pytest.raises(ProtocolError):
        open_sealed(bob, sealed[:40])

    # Every seal uses a fresh ephemeral key and nonce
    assert seal(bob.public, b"hello") != seal(bob.public, b"hello")


def test_sign_verify(alice, bob):
    signature = sign(alice, b"message")
    verify(alice.public, signature, b"message")
    with pytest.raises(AuthenticityError):
        verify(bob.public, signature, b"message")
    with pytest.raises(AuthenticityError):
        verify(alice.public, signature, b"massage")


def test_digest():
    assert len(digest(b"a", b"b")) == 32
    # Field boundaries are part of the digest
    assert digest(b"ab", b"c") != digest(b"a", b"bc")


def test_session_key():
    key = derive_session_key(PSI1, PSI2, EPSILON)
    assert len(key) == 32
    assert key == derive_session_key(PSI1, PSI2, EPSILON)
    assert key != derive_session_key(PSI2, PSI1, EPSILON)
    with pytest.raises(InputRangeError):
        derive_session_key(PSI1[:16], PSI2, EPSILON)


def test_fingerprint():
    key = derive_session_key(PSI1, PSI2, EPSILON)
    tag = key_fingerprint(key, 5)
    verify_fingerprint(key, 5, tag)
    with pytest.raises(AuthenticityError):
        verify_fingerprint(key, 6, tag)
    with pytest.raises(AuthenticityError):
        verify_fingerprint(b"\x00" * 32, 5, tag)


# RSSI


def test_rssi_model():
    assert thorp_absorption(25.0) == pytest.approx(6.105, abs=0.01)
    assert expected_rssi(0.5) == expected_rssi(1.0) == 150.0
    assert expected_rssi(1000.0) < expected_rssi(100.0)

    node = Node(4, (0.0, 0.0, 100.0), 1.0)
    assert measure_rssi(node, (0.0, 0.0, 0.0), noise_std=0.0) == expected_rssi(100.0)
    assert measure_rssi(node, (0.0, 0.0, 0.0)) == measure_rssi(node, (0.0, 0.0, 0.0))


def test_registry():
    sink = Node(0, (0.0, 0.0, 0.0), 1.0)
    node = Node(1, (0.0, 0.0, 100.0), 1.0)
    registry = build_registry([sink, node], sink.position, margin=6.0)
    assert list(registry) == [1]

    level = expected_rssi(100.0)
    assert rssi_within_range(registry, 1, level + 6.0)
    assert not rssi_within_range(registry, 1, level + 6.01)
    assert not rssi_within_range(registry, 2, level)

    manual = RssiRegistry()
    manual.register(9, -80.0, -60.0)
    assert rssi_within_range(manual, 9, -70.0)
    with pytest.raises(ConfigurationError):
        RssiRange(-60.0, -80.0)
