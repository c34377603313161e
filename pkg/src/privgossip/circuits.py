"""Boolean circuits for the decision phase, plus a plaintext evaluator.

The decision circuit removes a statistical mask with a truncated
ripple-borrow subtractor (mod 2^w) and compares the result against one or
two threshold inputs.  Gate inventory is deliberately tiny: free gates
(XOR, NOT) and two-input truth-table gates (the "non-XOR" class that costs
a garbled table).  Per block the non-XOR count is exactly one gate per bit,
so the decision circuit has 2w (single threshold) or 3w (dual) non-XOR
gates.
"""

from dataclasses import dataclass, field

XOR = "xor"
NOT = "not"
TT = "tt"  # generic two-input gate with explicit truth table

TT_AND = 0b1000  # f(a,b) = a & b
TT_OR_NOTB = 0b1101  # f(a,b) = a | ~b


class WidthError(ValueError):
    """Requested circuit width does not fit the modulus."""


@dataclass(frozen=True)
class Gate:
    op: str
    a: int
    b: int = -1
    tt: int = 0  # truth table, bit (va*2 + vb) = f(va, vb); TT gates only


@dataclass
class BooleanCircuit:
    """Gate list over wires indexed inputs-first (garbler bits, then
    evaluator bits), acyclic by construction."""

    n_garbler: int
    n_evaluator: int
    gates: list[Gate] = field(default_factory=list)
    outputs: list[int] = field(default_factory=list)

    @property
    def n_inputs(self) -> int:
        return self.n_garbler + self.n_evaluator

    @property
    def n_wires(self) -> int:
        return self.n_inputs + len(self.gates)

    @property
    def non_xor_count(self) -> int:
        return sum(1 for g in self.gates if g.op == TT)

    def add(self, gate: Gate) -> int:
        idx = self.n_inputs + len(self.gates)
        self.gates.append(gate)
        return idx

    def xor(self, a: int, b: int) -> int:
        return self.add(Gate(XOR, a, b))

    def not_(self, a: int) -> int:
        return self.add(Gate(NOT, a))

    def tt(self, a: int, b: int, table: int) -> int:
        return self.add(Gate(TT, a, b, table))

    def eval_plain(self, garbler_bits: list[int], evaluator_bits: list[int]) -> list[int]:
        """Reference evaluation on clear bits; the oracle for garbled runs."""
        if len(garbler_bits) != self.n_garbler or len(evaluator_bits) != self.n_evaluator:
            raise ValueError("input bit count mismatch")
        vals = list(garbler_bits) + list(evaluator_bits)
        for g in self.gates:
            if g.op == XOR:
                vals.append(vals[g.a] ^ vals[g.b])
            elif g.op == NOT:
                vals.append(vals[g.a] ^ 1)
            else:
                vals.append((g.tt >> (vals[g.a] * 2 + vals[g.b])) & 1)
        return [vals[w] for w in self.outputs]


def _carry_chain(c: BooleanCircuit, a_bits: list[int], b_bits: list[int]) -> tuple[list[int], int]:
    """Carries of a + ~b + 1 (i.e. a - b), one non-XOR gate per bit.

    Returns (sum bits of a - b mod 2^w, final carry).  The final carry is 1
    iff a >= b.
    """
    w = len(a_bits)
    diffs = [c.xor(a_bits[0], b_bits[0])]  # a0 ^ ~b0 ^ 1
    carry = c.tt(a_bits[0], b_bits[0], TT_OR_NOTB)  # carry(a0, ~b0, cin=1)
    for i in range(1, w):
        nb = c.not_(b_bits[i])
        diffs.append(c.xor(c.xor(a_bits[i], nb), carry))
        t1 = c.xor(a_bits[i], carry)
        t2 = c.xor(nb, carry)
        v = c.tt(t1, t2, TT_AND)
        carry = c.xor(carry, v)
    return diffs, carry


def subtract_mod2w(c: BooleanCircuit, a_bits: list[int], b_bits: list[int]) -> list[int]:
    """(a - b) mod 2^w via two's complement; exactly w non-XOR gates."""
    diffs, _ = _carry_chain(c, a_bits, b_bits)
    return diffs


def less_than(c: BooleanCircuit, a_bits: list[int], b_bits: list[int]) -> int:
    """a < b (unsigned, strict); exactly w non-XOR gates."""
    _, carry = _carry_chain(c, a_bits, b_bits)
    return c.not_(carry)


def build_decision_circuit(w: int, dual: bool, n_bits: int | None = None) -> BooleanCircuit:
    """Subtract-then-compare circuit over w-bit operands.

    Garbler inputs: mask bits (w), then its scaled threshold (w, dual only).
    Evaluator inputs: masked numerator (w), then its scaled threshold (w).
    Outputs: [masked - mask < thr_eval] and, if dual, [... < thr_garbler].
    All operands enter LSB first.
    """
    if w < 1:
        raise WidthError("width must be >= 1")
    if n_bits is not None and w >= n_bits:
        raise WidthError(f"width {w} must stay below log2 n = {n_bits}")
    n_garbler = 2 * w if dual else w
    c = BooleanCircuit(n_garbler=n_garbler, n_evaluator=2 * w)
    mask = list(range(w))
    thr_g = list(range(w, 2 * w)) if dual else []
    masked = list(range(n_garbler, n_garbler + w))
    thr_e = list(range(n_garbler + w, n_garbler + 2 * w))

    value = subtract_mod2w(c, masked, mask)
    c.outputs.append(less_than(c, value, thr_e))
    if dual:
        c.outputs.append(less_than(c, value, thr_g))
    return c


def int_to_bits(x: int, w: int) -> list[int]:
    return [(x >> i) & 1 for i in range(w)]
