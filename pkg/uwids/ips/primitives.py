# 2026/09/17
"""
primitives.py - Cryptographic building blocks of the key-reset protocol.

Defines KeyPair, PublicIdentity and the functions 'generate_keypair', 'seal',
'open_sealed', 'sign', 'verify', 'digest', 'key_fingerprint' and
'derive_session_key'.

- Key pairs hold an X25519 key for encryption and an Ed25519 key for
signatures.
- 'seal' encrypts to a recipient's X25519 key: an ephemeral X25519 exchange,
HKDF-SHA256 over the shared secret, then AES-256-GCM. The output is the
ephemeral public key (32 bytes), the GCM nonce (12 bytes) and the
ciphertext with its tag.
- Hashes are SHA-256 over length-prefixed fields, so field boundaries are
part of the digest.

"""

from __future__ import annotations

import secrets
from dataclasses import dataclass

from cryptography.exceptions import InvalidSignature, InvalidTag
from cryptography.hazmat.primitives import hashes, hmac, serialization
from cryptography.hazmat.primitives.asymmetric import ed25519, x25519
from cryptography.hazmat.primitives.ciphers.aead import AESGCM
from cryptography.hazmat.primitives.kdf.hkdf import HKDF

from uwids.errors import AuthenticityError, InputRangeError, ProtocolError
from uwids.ips.wire import pack_fields

NONCE_BYTES = 32
KEY_BYTES = 32
PUBLIC_KEY_BYTES = 32
GCM_NONCE_BYTES = 12
SEAL_INFO = b"uwids-seal"
SESSION_INFO = b"uwids-session-key"
CONFIRM_INFO = b"uwids-key-confirm"

_RAW = serialization.Encoding.Raw
_RAW_PUBLIC = serialization.PublicFormat.Raw


@dataclass(frozen=True)
class PublicIdentity:
    """Raw public keys of a party: X25519 for encryption, Ed25519 for
    signatures."""

    agreement: bytes
    signing: bytes

    def agreement_key(self) -> x25519.X25519PublicKey:
        return x25519.X25519PublicKey.from_public_bytes(self.agreement)

    def signing_key(self) -> ed25519.Ed25519PublicKey:
        return ed25519.Ed25519PublicKey.from_public_bytes(self.signing)


@dataclass(frozen=True)
class KeyPair:
    agreement: x25519.X25519PrivateKey
    signing: ed25519.Ed25519PrivateKey

    @property
    def public(self) -> PublicIdentity:
        return PublicIdentity(
            self.agreement.public_key().public_bytes(_RAW, _RAW_PUBLIC),
            self.signing.public_key().public_bytes(_RAW, _RAW_PUBLIC),
        )


def generate_keypair() -> KeyPair:
    return KeyPair(x25519.X25519PrivateKey.generate(), ed25519.Ed25519PrivateKey.generate())


def random_bytes(length: int = NONCE_BYTES) -> bytes:
    return secrets.token_bytes(length)


def seal(recipient: PublicIdentity, plaintext: bytes, associated_data: bytes = b"") -> bytes:
    """Encrypts `plaintext` so that only `recipient` can read it."""
    ephemeral = x25519.X25519PrivateKey.generate()
    ephemeral_public = ephemeral.public_key().public_bytes(_RAW, _RAW_PUBLIC)
    key = _seal_key(ephemeral.exchange(recipient.agreement_key()), ephemeral_public, recipient)
    nonce = random_bytes(GCM_NONCE_BYTES)
    return ephemeral_public + nonce + AESGCM(key).encrypt(nonce, plaintext, associated_data)


def open_sealed(keypair: KeyPair, sealed: bytes, associated_data: bytes = b"") -> bytes:
    """Decrypts the output of 'seal'; raises AuthenticityError when the
    ciphertext was not sealed for `keypair` or was altered."""
    head = PUBLIC_KEY_BYTES + GCM_NONCE_BYTES
    if len(sealed) <= head:
        raise ProtocolError(f"Sealed box of {len(sealed)} bytes is too short.")
    ephemeral_public = sealed[:PUBLIC_KEY_BYTES]
    nonce = sealed[PUBLIC_KEY_BYTES:head]
    shared = keypair.agreement.exchange(x25519.X25519PublicKey.from_public_bytes(ephemeral_public))
    key = _seal_key(shared, ephemeral_public, keypair.public)
    try:
        return AESGCM(key).decrypt(nonce, sealed[head:], associated_data)
    except InvalidTag:
        raise AuthenticityError("Sealed box failed authentication.") from None


def sign(keypair: KeyPair, data: bytes) -> bytes:
    return keypair.signing.sign(data)


def verify(identity: PublicIdentity, signature: bytes, data: bytes) -> None:
    try:
        identity.signing_key().verify(signature, data)
    except InvalidSignature:
        raise AuthenticityError("Signature verification failed.") from None


def digest(*fields: bytes) -> bytes:
    """SHA-256 of the length-prefixed `fields`."""
    h = hashes.Hash(hashes.SHA256())
    h.update(pack_fields(*fields))
    return h.finalize()


def derive_session_key(psi1: bytes, psi2: bytes, epsilon: bytes) -> bytes:
    """HKDF-SHA256 with salt psi1 || psi2 over the seed epsilon."""
    for name, value in (("psi1", psi1), ("psi2", psi2), ("epsilon", epsilon)):
        if len(value) < NONCE_BYTES:
            raise InputRangeError(f"{name} must hold at least {NONCE_BYTES} bytes.")
    return HKDF(
        algorithm=hashes.SHA256(), length=KEY_BYTES, salt=psi1 + psi2, info=SESSION_INFO
    ).derive(epsilon)


def key_fingerprint(key: bytes, node_id: int) -> bytes:
    """HMAC-SHA256 tag proving possession of `key` for `node_id`."""
    mac = hmac.HMAC(key, hashes.SHA256())
    mac.update(CONFIRM_INFO + node_id.to_bytes(4, "big"))
    return mac.finalize()


def verify_fingerprint(key: bytes, node_id: int, tag: bytes) -> None:
    mac = hmac.HMAC(key, hashes.SHA256())
    mac.update(CONFIRM_INFO + node_id.to_bytes(4, "big"))
    try:
        mac.verify(tag)
    except InvalidSignature:
        raise AuthenticityError("Key fingerprint does not match.") from None


# Auxiliar functions


def _seal_key(shared: bytes, ephemeral_public: bytes, recipient: PublicIdentity) -> bytes:
    return HKDF(
        algorithm=hashes.SHA256(),
        length=KEY_BYTES,
        salt=ephemeral_public + recipient.agreement,
        info=SEAL_INFO,
    ).derive(shared)
