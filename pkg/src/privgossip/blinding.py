"""Additive masking of numerators, with exact removal.

Two modes:

* uniform     -- r uniform over Z_n, y = x + r mod n.  One-time-pad style:
                 y reveals nothing about x.
* statistical -- r uniform over Z_(2**(m+t)), y = x + r as a plain integer
                 sum.  Requires 2**m + 2**(m+t) < n so the sum never wraps;
                 leaks about 2**-t of a bit of information, which is the
                 price paid for keeping y small enough for cheap circuits.
"""

from dataclasses import dataclass

from .rng import SplitRng

UNIFORM = "uniform"
STATISTICAL = "statistical"


@dataclass(frozen=True)
class BlindingFactor:
    value: int
    mode: str
    range_bits: int = 0  # m + t, statistical mode only


def blind_uniform(x: int, rng: SplitRng, n: int) -> tuple[int, BlindingFactor]:
    if not 0 <= x < n:
        raise ValueError(f"value {x} outside Z_{n}")
    r = rng.randrange(n)
    return (x + r) % n, BlindingFactor(r, UNIFORM)


def blind_statistical(
    x: int, m: int, t: int, n: int, rng: SplitRng
) -> tuple[int, BlindingFactor]:
    if x < 0 or x >= (1 << m):
        raise ValueError(f"value {x} does not fit in {m} bits")
    if (1 << m) + (1 << (m + t)) >= n:
        raise ValueError(
            f"statistical blinding needs 2^{m} + 2^{m + t} < n (n has {n.bit_length() - 1} bits)"
        )
    r = rng.getrandbits(m + t)
    return x + r, BlindingFactor(r, STATISTICAL, m + t)


def unblind(y: int, r: BlindingFactor, n: int) -> int:
    if r.mode == UNIFORM:
        return (y - r.value) % n
    x = y - r.value
    if x < 0:
        raise ValueError("negative unblinded value: mismatched statistical factor")
    return x
