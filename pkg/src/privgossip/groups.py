"""Bilinear group backends for the re-encryption layer.

Two interchangeable realizations of (G1, G2, e):

* PairingGroup   -- production backend: a supersingular curve y^2 = x^3 + x
                    over F_p with p = 4q - 1, p ≡ 3 (mod 4), q a fixed
                    256-bit prime.  G1 is the order-q subgroup of E(F_p),
                    G2 the order-q subgroup of F_{p^2}^*, and e the modified
                    Tate pairing with the distortion map (x, y) -> (-x, iy).
* ExponentGroup  -- test backend, insecure by construction: group elements
                    are their own discrete logs mod a small prime q, so the
                    group law is addition and the pairing is a product.
                    Used for fast exhaustive protocol tests.

Group elements use multiplicative notation throughout (`*` is the group
law, `**` exponentiation) so scheme code reads like the algebra.
"""

import hashlib
from functools import lru_cache

from .rng import SplitRng


class GroupMembershipError(ValueError):
    """Deserialized bytes do not encode a valid group element."""


_SMALL_PRIMES: list[int] = []
_sieve = bytearray([1]) * 4000
for _i in range(2, 4000):
    if _sieve[_i]:
        _SMALL_PRIMES.append(_i)
        for _j in range(_i * _i, 4000, _i):
            _sieve[_j] = 0


def is_prime(n: int) -> bool:
    """Miller-Rabin with 25 fixed prime bases after a small-prime sieve."""
    if n < 2:
        return False
    for sp in _SMALL_PRIMES:
        if n % sp == 0:
            return n == sp
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES[:25]:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def deterministic_prime(bits: int) -> int:
    """Smallest prime >= 2**(bits-1) + 1; fixed per bit size for replays."""
    if bits < 8:
        raise ValueError("prime size below 8 bits not supported")
    n = (1 << (bits - 1)) + 1
    while not is_prime(n):
        n += 2
    return n


# ---------------------------------------------------------------------------
# Production pairing backend.
# ---------------------------------------------------------------------------

# Fixed curve: q prime (256 bits), p = 4q - 1 prime, E: y^2 = x^3 + x / F_p,
# #E(F_p) = p + 1 = 4q.  g generates the order-q subgroup.
CURVE_Q = 0x800000000000000000000000000000000000000000000000000000000000E811
CURVE_P = 0x2000000000000000000000000000000000000000000000000000000000003A043
_GX = 0x14AA9F676971428EC0E866DA7E1A675C726D73E6520A5CCD6547A24C26E462B24
_GY = 0x2BDEEDB76D5BA1D023A5CC0F1DE2B2B48F24123F78D1C2A8A8D0FD1F7AA6A97B

_P = CURVE_P
_FBYTES = (_P.bit_length() + 7) // 8  # 33
_INF_BYTES = b"\xff" * _FBYTES


def _f2mul(x, y):
    a, b = x
    c, d = y
    return ((a * c - b * d) % _P, (a * d + b * c) % _P)


def _f2sqr(x):
    a, b = x
    return ((a * a - b * b) % _P, 2 * a * b % _P)


def _f2inv(x):
    a, b = x
    s = pow(a * a + b * b, -1, _P)
    return (a * s % _P, -b * s % _P)


def _f2pow(x, e):
    r = (1, 0)
    while e:
        if e & 1:
            r = _f2mul(r, x)
        x = _f2sqr(x)
        e >>= 1
    return r


class G1Elem:
    """Point on E(F_p); None coordinates encode the identity."""

    __slots__ = ("x", "y")

    def __init__(self, x: int | None, y: int | None):
        self.x = x
        self.y = y

    @property
    def is_identity(self) -> bool:
        return self.x is None

    def __mul__(self, other: "G1Elem") -> "G1Elem":
        if self.is_identity:
            return other
        if other.is_identity:
            return self
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        if x1 == x2:
            if (y1 + y2) % _P == 0:
                return G1Elem(None, None)
            lam = (3 * x1 * x1 + 1) * pow(2 * y1, -1, _P) % _P
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, _P) % _P
        x3 = (lam * lam - x1 - x2) % _P
        return G1Elem(x3, (lam * (x1 - x3) - y1) % _P)

    def __pow__(self, k: int) -> "G1Elem":
        k %= CURVE_Q
        r = G1Elem(None, None)
        base = self
        while k:
            if k & 1:
                r = r * base
            base = base * base
            k >>= 1
        return r

    def __eq__(self, other) -> bool:
        return isinstance(other, G1Elem) and self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        return "G1(identity)" if self.is_identity else f"G1({self.x:#x})"


class G2Elem:
    """Norm-1 element a + bi of F_{p^2}; the order-q subgroup in use."""

    __slots__ = ("a", "b")

    def __init__(self, a: int, b: int):
        self.a = a
        self.b = b

    def __mul__(self, other: "G2Elem") -> "G2Elem":
        return G2Elem(*_f2mul((self.a, self.b), (other.a, other.b)))

    def __truediv__(self, other: "G2Elem") -> "G2Elem":
        return G2Elem(*_f2mul((self.a, self.b), _f2inv((other.a, other.b))))

    def __pow__(self, e: int) -> "G2Elem":
        return G2Elem(*_f2pow((self.a, self.b), e % CURVE_Q))

    def __eq__(self, other) -> bool:
        return isinstance(other, G2Elem) and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"G2({self.a:#x}, {self.b:#x})"


def _line(V, lam, xq, yq):
    # Line of slope lam through affine V, evaluated at the distorted point
    # (-xq, i*yq); vertical-line factors land in F_p and are killed by the
    # final exponentiation, so they are omitted.
    xv, yv = V
    return ((-yv - lam * (-xq - xv)) % _P, yq)


class PairingGroup:
    """Fixed-curve backend with compressed 33-byte element encodings."""

    name = "pairing"
    q = CURVE_Q

    def __init__(self):
        self.g = G1Elem(_GX, _GY)
        self.Z = self.pair(self.g, self.g)

    # -- pairing --------------------------------------------------------

    def pair(self, P: G1Elem, Q: G1Elem) -> G2Elem:
        """Modified Tate pairing e(P, Q) = f_{q,P}(phi(Q))^((p^2-1)/q)."""
        if P.is_identity or Q.is_identity:
            return G2Elem(1, 0)
        xq, yq = Q.x, Q.y
        xp, yp = P.x, P.y
        f = (1, 0)
        xv, yv = xp, yp
        for bit in bin(CURVE_Q)[3:]:
            lam = (3 * xv * xv + 1) * pow(2 * yv, -1, _P) % _P
            f = _f2mul(_f2sqr(f), _line((xv, yv), lam, xq, yq))
            x3 = (lam * lam - 2 * xv) % _P
            yv = (lam * (xv - x3) - yv) % _P
            xv = x3
            if bit == "1":
                if xv == xp and (yv + yp) % _P == 0:
                    # vertical line through V and P: eliminated factor, and
                    # V + P is the identity (only reachable at loop end).
                    xv = None
                else:
                    lam = (yp - yv) * pow(xp - xv, -1, _P) % _P
                    f = _f2mul(f, _line((xv, yv), lam, xq, yq))
                    x3 = (lam * lam - xv - xp) % _P
                    yv = (lam * (xv - x3) - yv) % _P
                    xv = x3
        # (p^2 - 1)/q = 4(p - 1) and z^(p-1) = conj(z)/z in F_{p^2}.
        z = _f2mul((f[0], -f[1] % _P), _f2inv(f))
        return G2Elem(*_f2sqr(_f2sqr(z)))

    # -- randomness ------------------------------------------------------

    def random_g2(self, rng: SplitRng) -> G2Elem:
        return self.Z ** rng.uniform_scalar(self.q)

    # -- serialization ----------------------------------------------------

    def g1_bytes(self, e: G1Elem) -> bytes:
        if e.is_identity:
            return _INF_BYTES
        buf = bytearray(e.x.to_bytes(_FBYTES, "big"))
        if e.y & 1:
            buf[0] |= 0x80
        return bytes(buf)

    def g1_from_bytes(self, data: bytes) -> G1Elem:
        if len(data) != _FBYTES:
            raise GroupMembershipError("bad G1 encoding length")
        if data == _INF_BYTES:
            return G1Elem(None, None)
        buf = bytearray(data)
        sign = buf[0] >> 7
        buf[0] &= 0x7F
        x = int.from_bytes(bytes(buf), "big")
        if x >= _P:
            raise GroupMembershipError("G1 x out of range")
        rhs = (x * x * x + x) % _P
        y = pow(rhs, (_P + 1) // 4, _P)
        if y * y % _P != rhs:
            raise GroupMembershipError("G1 x not on curve")
        if (y & 1) != sign:
            y = _P - y
        return G1Elem(x, y)

    def g2_bytes(self, e: G2Elem) -> bytes:
        # Torus compression: a norm-1 element g != 1 is (c + i)/(c - i) for a
        # unique c in F_p (c = 0 encodes -1); the identity gets a sentinel.
        if e.b == 0:
            if e.a == 1:
                return _INF_BYTES
            c = 0  # e.a == p - 1
        else:
            c = (1 + e.a) * pow(e.b, -1, _P) % _P
        return c.to_bytes(_FBYTES, "big")

    def g2_from_bytes(self, data: bytes) -> G2Elem:
        if len(data) != _FBYTES:
            raise GroupMembershipError("bad G2 encoding length")
        if data == _INF_BYTES:
            return G2Elem(1, 0)
        c = int.from_bytes(data, "big")
        if c >= _P:
            raise GroupMembershipError("G2 torus value out of range")
        if c == 0:
            return G2Elem(_P - 1, 0)
        d = pow(c * c + 1, -1, _P)
        return G2Elem((c * c - 1) * d % _P, 2 * c * d % _P)


# ---------------------------------------------------------------------------
# Exponent-arithmetic test backend.
# ---------------------------------------------------------------------------


class ExpG1:
    """G1 element represented by its discrete log mod q."""

    __slots__ = ("v", "q")

    def __init__(self, v: int, q: int):
        self.v = v % q
        self.q = q

    def __mul__(self, other: "ExpG1") -> "ExpG1":
        return ExpG1(self.v + other.v, self.q)

    def __pow__(self, k: int) -> "ExpG1":
        return ExpG1(self.v * (k % self.q), self.q)

    def __eq__(self, other) -> bool:
        return isinstance(other, ExpG1) and self.v == other.v and self.q == other.q

    def __hash__(self):
        return hash(("ExpG1", self.v))

    def __repr__(self):
        return f"ExpG1({self.v})"


class ExpG2:
    """G2 element represented by its discrete log mod q."""

    __slots__ = ("v", "q")

    def __init__(self, v: int, q: int):
        self.v = v % q
        self.q = q

    def __mul__(self, other: "ExpG2") -> "ExpG2":
        return ExpG2(self.v + other.v, self.q)

    def __truediv__(self, other: "ExpG2") -> "ExpG2":
        return ExpG2(self.v - other.v, self.q)

    def __pow__(self, k: int) -> "ExpG2":
        return ExpG2(self.v * (k % self.q), self.q)

    def __eq__(self, other) -> bool:
        return isinstance(other, ExpG2) and self.v == other.v and self.q == other.q

    def __hash__(self):
        return hash(("ExpG2", self.v))

    def __repr__(self):
        return f"ExpG2({self.v})"


class ExponentGroup:
    """Insecure dlog-representation backend: e(x, y) is literally x*y mod q."""

    name = "test"

    def __init__(self, q_bits: int = 128):
        self.q = deterministic_prime(q_bits)
        self.g = ExpG1(1, self.q)
        self.Z = ExpG2(1, self.q)
        self._ebytes = (self.q.bit_length() + 7) // 8

    def pair(self, a: ExpG1, b: ExpG1) -> ExpG2:
        return ExpG2(a.v * b.v, self.q)

    def random_g2(self, rng: SplitRng) -> ExpG2:
        return ExpG2(rng.uniform_scalar(self.q), self.q)

    def g1_bytes(self, e: ExpG1) -> bytes:
        return e.v.to_bytes(self._ebytes, "big")

    def g1_from_bytes(self, data: bytes) -> ExpG1:
        if len(data) != self._ebytes:
            raise GroupMembershipError("bad element encoding length")
        v = int.from_bytes(data, "big")
        if v >= self.q:
            raise GroupMembershipError("element out of range")
        return ExpG1(v, self.q)

    def g2_bytes(self, e: ExpG2) -> bytes:
        return e.v.to_bytes(self._ebytes, "big")

    def g2_from_bytes(self, data: bytes) -> ExpG2:
        if len(data) != self._ebytes:
            raise GroupMembershipError("bad element encoding length")
        v = int.from_bytes(data, "big")
        if v >= self.q:
            raise GroupMembershipError("element out of range")
        return ExpG2(v, self.q)


def make_group(backend: str, q_bits: int = 128):
    """Factory for the two backends; q_bits applies to the test backend only."""
    if backend == "pairing":
        return PairingGroup()
    if backend == "test":
        return ExponentGroup(q_bits)
    raise ValueError(f"unknown backend {backend!r}: expected 'pairing' or 'test'")


def hash_g2_to_zn(group, elem, n: int) -> int:
    """256-bit hash of the canonical encoding of a G2 element, reduced mod n."""
    digest = hashlib.sha256(b"privgossip-kdf:" + group.g2_bytes(elem)).digest()
    return int.from_bytes(digest, "big") % n
