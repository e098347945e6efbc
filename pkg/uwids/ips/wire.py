# 2026/09/17
"""
wire.py - Byte layout of the key-reset protocol messages.

Defines 'pack_fields' and 'unpack_fields', the length-prefixed field codec,
the scalar codecs, and the message classes M1, M2 and KeyConfirm.

Every message is a sequence of fields, each one a 4-byte big-endian length
followed by that many bytes. The first field is the message tag. Integers
are 4-byte big-endian unsigned, times and RSSI values 8-byte big-endian
IEEE 754 doubles.

"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from uwids.errors import ProtocolError

LENGTH = struct.Struct(">I")
DOUBLE = struct.Struct(">d")
UINT = struct.Struct(">I")

M1_TAG = b"M1"
M2_TAG = b"M2"
CONFIRM_TAG = b"KC"


def pack_fields(*fields: bytes) -> bytes:
    return b"".join(LENGTH.pack(len(field)) + bytes(field) for field in fields)


def unpack_fields(data: bytes, count: int | None = None) -> list[bytes]:
    """Splits `data` into its fields; raises ProtocolError when it is
    truncated or does not hold exactly `count` fields."""
    fields, offset = [], 0
    while offset < len(data):
        if offset + LENGTH.size > len(data):
            raise ProtocolError("Truncated field length.")
        (size,) = LENGTH.unpack_from(data, offset)
        offset += LENGTH.size
        if offset + size > len(data):
            raise ProtocolError("Truncated field.")
        fields.append(data[offset : offset + size])
        offset += size
    if count is not None and len(fields) != count:
        raise ProtocolError(f"Expected {count} fields, found {len(fields)}.")
    return fields


def encode_uint(value: int) -> bytes:
    return UINT.pack(value)


def decode_uint(data: bytes) -> int:
    if len(data) != UINT.size:
        raise ProtocolError(f"Integer field of {len(data)} bytes.")
    return UINT.unpack(data)[0]


def encode_double(value: float) -> bytes:
    return DOUBLE.pack(value)


def decode_double(data: bytes) -> float:
    if len(data) != DOUBLE.size:
        raise ProtocolError(f"Double field of {len(data)} bytes.")
    return DOUBLE.unpack(data)[0]


@dataclass(frozen=True)
class M1:
    """Buoy to node: sealed (signature, psi1, t1)."""

    node_id: int
    sealed: bytes

    def to_bytes(self) -> bytes:
        return pack_fields(M1_TAG, encode_uint(self.node_id), self.sealed)

    @classmethod
    def from_bytes(cls, data: bytes) -> M1:
        tag, node_id, sealed = unpack_fields(data, 3)
        _check_tag(tag, M1_TAG)
        return cls(decode_uint(node_id), sealed)


@dataclass(frozen=True)
class M2:
    """Node to buoy: sealed (epsilon, psi2, t2, rssi), the confirmation
    message, the binding digest and the node's signature over both."""

    node_id: int
    sealed: bytes
    confirmation: bytes
    binding: bytes
    signature: bytes

    def to_bytes(self) -> bytes:
        return pack_fields(
            M2_TAG,
            encode_uint(self.node_id),
            self.sealed,
            self.confirmation,
            self.binding,
            self.signature,
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> M2:
        tag, node_id, sealed, confirmation, binding, signature = unpack_fields(data, 6)
        _check_tag(tag, M2_TAG)
        return cls(decode_uint(node_id), sealed, confirmation, binding, signature)


@dataclass(frozen=True)
class KeyConfirm:
    """Buoy to node, after a completed exchange: proof that the buoy holds
    the new key."""

    node_id: int
    fingerprint: bytes

    def to_bytes(self) -> bytes:
        return pack_fields(CONFIRM_TAG, encode_uint(self.node_id), self.fingerprint)

    @classmethod
    def from_bytes(cls, data: bytes) -> KeyConfirm:
        tag, node_id, fingerprint = unpack_fields(data, 3)
        _check_tag(tag, CONFIRM_TAG)
        return cls(decode_uint(node_id), fingerprint)


# Auxiliar functions


def _check_tag(tag: bytes, expected: bytes) -> None:
    if tag != expected:
        raise ProtocolError(f"Expected a {expected.decode()} message, got tag {tag!r}.")
