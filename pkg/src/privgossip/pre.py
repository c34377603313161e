"""Unidirectional proxy re-encryption over a bilinear group.

Keys, ciphertext levels, and the re-encryption transform follow the classic
two-level construction: a second-level ciphertext (g^k, m Z^{a1 k}) under A
can be turned by anyone holding rk_{A->B} = g^{a1 b2} into a first-level
ciphertext (Z^{b2 k'}, m Z^{k'}) that only B opens.  Delegation is one-hop
and one-way: rk_{A->B} gives the proxy no path from B back to A.

Because group messages live in G2 while the protocol's mask values live in
Z_n, masks travel in a ScalarEnvelope: a KEM ciphertext of a random group
element R plus the pad s + H(R) mod n.  Re-encrypting the envelope touches
only the KEM part.
"""

from dataclasses import dataclass, replace

from .groups import GroupMembershipError, hash_g2_to_zn
from .rng import SplitRng

L2 = "l2"
L1_NATIVE = "l1"  # produced by first-level encryption; opens with a1
L1_REENC = "l1r"  # produced by re-encryption; opens with a2

_TAGS = {L2: 2, L1_NATIVE: 17, L1_REENC: 18}
_TAG_NAMES = {v: k for k, v in _TAGS.items()}


@dataclass(frozen=True)
class PublicKey:
    z_a1: object  # Z^{a1} in G2
    g_a2: object  # g^{a2} in G1


@dataclass(frozen=True)
class SecretKey:
    a1: int
    a2: int


@dataclass(frozen=True)
class KeyPair:
    pk: PublicKey
    sk: SecretKey


@dataclass(frozen=True)
class ReEncryptionKey:
    value: object  # g^{a1 b2} in G1


@dataclass(frozen=True)
class Ciphertext:
    """(c1, c2) plus the level/origin tag that selects the decryption rule."""

    level: str
    c1: object
    c2: object


def keygen(group, rng: SplitRng) -> KeyPair:
    a1 = rng.uniform_scalar(group.q)
    a2 = rng.uniform_scalar(group.q)
    return KeyPair(PublicKey(group.Z ** a1, group.g ** a2), SecretKey(a1, a2))


def reenc_keygen(sk_a: SecretKey, pk_b: PublicKey) -> ReEncryptionKey:
    """rk_{A->B} = (g^{b2})^{a1}; needs A's secret and B's public key only."""
    return ReEncryptionKey(pk_b.g_a2 ** sk_a.a1)


def encrypt_l2(m, pk: PublicKey, group, rng: SplitRng) -> Ciphertext:
    k = rng.uniform_scalar(group.q)
    return Ciphertext(L2, group.g ** k, m * (pk.z_a1 ** k))


def encrypt_l1(m, pk: PublicKey, group, rng: SplitRng) -> Ciphertext:
    k = rng.uniform_scalar(group.q)
    return Ciphertext(L1_NATIVE, pk.z_a1 ** k, m * (group.Z ** k))


def reencrypt(c: Ciphertext, rk: ReEncryptionKey, group) -> Ciphertext:
    """Second-level ciphertext for A -> first-level ciphertext for B.

    (Z^{b2 k'}, m Z^{k'}) with k' = a1 k; single hop, so the input must be
    level 2.  A wrong rk is undetectable here and surfaces as a decryption
    mismatch downstream.
    """
    if c.level != L2:
        raise TypeError("only second-level ciphertexts can be re-encrypted")
    return Ciphertext(L1_REENC, group.pair(c.c1, rk.value), c.c2)


def decrypt_l1(c: Ciphertext, sk: SecretKey, group):
    """m = c2 / c1^{1/a_i}; a1 for native first-level, a2 after re-encryption."""
    if c.level == L1_NATIVE:
        a = sk.a1
    elif c.level == L1_REENC:
        a = sk.a2
    else:
        raise TypeError("not a first-level ciphertext")
    return c.c2 / (c.c1 ** pow(a, -1, group.q))


def decrypt_l2(c: Ciphertext, sk: SecretKey, group):
    if c.level != L2:
        raise TypeError("not a second-level ciphertext")
    return c.c2 / (group.pair(c.c1, group.g) ** sk.a1)


def decrypt(c: Ciphertext, sk: SecretKey, group):
    return decrypt_l2(c, sk, group) if c.level == L2 else decrypt_l1(c, sk, group)


# ---------------------------------------------------------------------------
# Canonical serialization: tag byte, then length-prefixed big-endian element
# encodings.
# ---------------------------------------------------------------------------


def _frame(payload: bytes) -> bytes:
    return len(payload).to_bytes(2, "big") + payload


def ciphertext_bytes(c: Ciphertext, group) -> bytes:
    c1 = group.g1_bytes(c.c1) if c.level == L2 else group.g2_bytes(c.c1)
    return bytes([_TAGS[c.level]]) + _frame(c1) + _frame(group.g2_bytes(c.c2))


def ciphertext_from_bytes(data: bytes, group) -> Ciphertext:
    if not data or data[0] not in _TAG_NAMES:
        raise GroupMembershipError("bad ciphertext tag")
    level = _TAG_NAMES[data[0]]
    off = 1
    parts = []
    for _ in range(2):
        if off + 2 > len(data):
            raise GroupMembershipError("truncated ciphertext")
        ln = int.from_bytes(data[off : off + 2], "big")
        off += 2
        if off + ln > len(data):
            raise GroupMembershipError("truncated ciphertext")
        parts.append(data[off : off + ln])
        off += ln
    if off != len(data):
        raise GroupMembershipError("trailing ciphertext bytes")
    c1 = group.g1_from_bytes(parts[0]) if level == L2 else group.g2_from_bytes(parts[0])
    return Ciphertext(level, c1, group.g2_from_bytes(parts[1]))


# ---------------------------------------------------------------------------
# Scalar envelope (KEM/DEM): carry a Z_n value as a hash-padded scalar.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarEnvelope:
    kem: Ciphertext  # encryption of a random group element R
    pad: int  # s + H(R) mod n


def wrap_scalar(s: int, pk: PublicKey, group, rng: SplitRng, n: int) -> ScalarEnvelope:
    if not 0 <= s < n:
        raise ValueError(f"scalar {s} outside Z_{n}")
    r_elem = group.random_g2(rng)
    kem = encrypt_l2(r_elem, pk, group, rng)
    return ScalarEnvelope(kem, (s + hash_g2_to_zn(group, r_elem, n)) % n)


def reencrypt_envelope(env: ScalarEnvelope, rk: ReEncryptionKey, group) -> ScalarEnvelope:
    return replace(env, kem=reencrypt(env.kem, rk, group))


def unwrap_scalar(env: ScalarEnvelope, sk: SecretKey, group, n: int) -> int:
    r_elem = decrypt(env.kem, sk, group)
    return (env.pad - hash_g2_to_zn(group, r_elem, n)) % n


def envelope_bytes(env: ScalarEnvelope, group, n_bits: int) -> bytes:
    pad_bytes = env.pad.to_bytes((n_bits + 7) // 8, "big")
    return ciphertext_bytes(env.kem, group) + pad_bytes


def envelope_from_bytes(data: bytes, group, n_bits: int) -> ScalarEnvelope:
    pad_len = (n_bits + 7) // 8
    if len(data) < pad_len + 1:
        raise GroupMembershipError("truncated envelope")
    kem = ciphertext_from_bytes(data[:-pad_len], group)
    pad = int.from_bytes(data[-pad_len:], "big")
    if pad >= (1 << n_bits):
        raise ValueError("envelope pad out of range")
    return ScalarEnvelope(kem, pad)
