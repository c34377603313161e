"""Exact modular and rational arithmetic for the consensus engine.

States are ratios numerator / 2**denom_exp with the numerator held in Z_n.
Denominators are always powers of two, so only the exponent is stored and
lcm / multiplier computations reduce to max() and shifts.  The plaintext
gossip oracle mirrors the masked protocol exactly and additionally tracks
an unreduced big-integer numerator so that any modular wraparound inside a
configured run is detected instead of silently corrupting the average.
"""

import math
from dataclasses import dataclass
from fractions import Fraction


class WrapError(ArithmeticError):
    """An oracle numerator exceeded the modulus n (state no longer exact)."""


@dataclass(frozen=True)
class ModulusParams:
    """Arithmetic domain for masked numerators.

    n      -- modulus for blinding arithmetic; a power of two here, n = 2**n_bits
    ell    -- bit length of quantized protocol inputs
    t_stat -- statistical-security margin (bits) for bounded-range masks
    """

    n_bits: int
    ell: int
    t_stat: int = 80

    def __post_init__(self):
        if self.t_stat < 1:
            raise ValueError("t_stat must be >= 1")
        if self.ell < 1:
            raise ValueError("ell must be >= 1")
        # floor(log2 n) must exceed ell + t + 1 to leave room for the
        # size-reduction trigger ell1 < floor(log2 n) - ell - t - 1.
        if self.n_bits <= self.ell + self.t_stat + 1:
            raise ValueError(
                f"n_bits={self.n_bits} too small: need n_bits > ell + t_stat + 1 "
                f"= {self.ell + self.t_stat + 1}"
            )

    @property
    def n(self) -> int:
        return 1 << self.n_bits

    @property
    def numerator_bytes(self) -> int:
        return (self.n_bits + 7) // 8


@dataclass(frozen=True)
class QuantizationConfig:
    """Amplification factor K (a power of two) and target bit length."""

    k_factor: int
    ell: int

    def __post_init__(self):
        if self.k_factor < 1 or self.k_factor & (self.k_factor - 1):
            raise ValueError("k_factor must be a positive power of two")


@dataclass(frozen=True)
class RationalState:
    """Consensus value numerator / 2**denom_exp with numerator in Z_n."""

    numerator: int
    denom_exp: int

    def __post_init__(self):
        if self.denom_exp < 0:
            raise ValueError("denom_exp must be non-negative")

    @property
    def denominator(self) -> int:
        return 1 << self.denom_exp

    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)


def quantize(x: float, cfg: QuantizationConfig) -> int:
    """Map a non-negative real to floor(K*x), which must fit in ell bits."""
    if x < 0:
        raise ValueError(f"negative input {x}: offset signed statistics before quantizing")
    q = math.floor(cfg.k_factor * x)
    if q >= (1 << cfg.ell):
        raise OverflowError(f"quantized value {q} does not fit in {cfg.ell} bits")
    return q


def lcm_pow2(e_a: int, e_b: int) -> int:
    """lcm of 2**e_a and 2**e_b, returned as an exponent: just max(e_a, e_b)."""
    if e_a < 0 or e_b < 0:
        raise ValueError("denominator exponents must be non-negative")
    return max(e_a, e_b)


def fuse_plain(a: RationalState, b: RationalState, n: int) -> RationalState:
    """Pairwise-average two states over a shared modulus.

    numerator = a.num * lcm/d_a + b.num * lcm/d_b  (mod n), denominator = 2*lcm.
    This is the plaintext oracle for one masked update step.
    """
    lcm_e = lcm_pow2(a.denom_exp, b.denom_exp)
    num = (
        a.numerator * (1 << (lcm_e - a.denom_exp))
        + b.numerator * (1 << (lcm_e - b.denom_exp))
    ) % n
    return RationalState(num, lcm_e + 1)


def decide_plain(s: RationalState, thr_scaled: int) -> bool:
    """Threshold test numerator < thr * 2**denom_exp (strict)."""
    return s.numerator < thr_scaled * s.denominator


class PlainOracle:
    """Unmasked gossip track run alongside the encrypted protocol.

    Keeps each agent's Z_n state plus an arbitrary-precision unreduced
    numerator; fuse() raises WrapError the moment a numerator would exceed
    n, since protocol correctness silently assumes that never happens
    (absent the size-reduction variant).
    """

    def __init__(self, initial: list[int], n: int):
        for x in initial:
            if not 0 <= x < n:
                raise ValueError("initial values must lie in [0, n)")
        self.n = n
        self.states = [RationalState(x, 0) for x in initial]
        self.exact = [int(x) for x in initial]
        # Ideal rational values ignoring size-reduction truncation, used to
        # bound the drift the reduction variant introduces.
        self.ideal = [Fraction(x) for x in initial]
        self.mean = Fraction(sum(initial), len(initial)) if initial else Fraction(0)

    def __len__(self) -> int:
        return len(self.states)

    def fuse(self, i: int, j: int) -> None:
        a, b = self.states[i], self.states[j]
        lcm_e = lcm_pow2(a.denom_exp, b.denom_exp)
        exact = (
            self.exact[i] * (1 << (lcm_e - a.denom_exp))
            + self.exact[j] * (1 << (lcm_e - b.denom_exp))
        )
        if exact >= self.n:
            raise WrapError(
                f"oracle numerator {exact.bit_length()} bits exceeds modulus "
                f"({self.n.bit_length() - 1} bits); enable size reduction or enlarge n"
            )
        fused = fuse_plain(a, b, self.n)
        self.states[i] = self.states[j] = fused
        self.exact[i] = self.exact[j] = exact
        mean_ij = (self.ideal[i] + self.ideal[j]) / 2
        self.ideal[i] = self.ideal[j] = mean_ij

    def reduce(self, i: int, j: int, k_shift: int) -> None:
        """Mirror the size-reduction variant: drop k low bits of both
        numerators and divide the denominator by 2**k_shift."""
        s = self.states[i]
        if s != self.states[j]:
            raise ValueError("reduction applies to a freshly fused pair")
        if s.denom_exp < k_shift:
            raise ValueError("cannot reduce denominator below 1")
        reduced = RationalState(s.numerator >> k_shift, s.denom_exp - k_shift)
        self.states[i] = self.states[j] = reduced
        self.exact[i] = self.exact[j] = self.exact[i] >> k_shift

    def value(self, i: int) -> Fraction:
        return Fraction(self.exact[i], self.states[i].denominator)

    def values(self) -> list[Fraction]:
        return [self.value(i) for i in range(len(self.states))]

    def max_deviation(self) -> Fraction:
        if not self.states:
            return Fraction(0)
        return max(abs(v - self.mean) for v in self.values())
