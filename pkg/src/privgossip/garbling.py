"""Garbling, oblivious transfer with precomputation, and cost accounting.

Scheme: free-XOR with a global offset delta (low bit forced to 1 so the
label's low bit is the permute bit), point-and-permute row ordering, and
three-row tables: the row whose select bits are (0,0) is implicit, its row
key doubling as the gate's output-label derivation.  Row keys are
H(label_a || label_b || gate_id).

Cost model (what the counters report, and what the wire accounting audits):
per non-XOR gate the garbler pays 3 hashes (one per transmitted row; the
implicit row's key is billed as label derivation) and the evaluator pays
exactly 1; tables are 3t bits; precomputed OT moves 2t online bits per
choice bit; the garbler's own input labels cost t bits each.
"""

import hashlib
from dataclasses import dataclass, field

from .circuits import NOT, TT, XOR, BooleanCircuit, build_decision_circuit, int_to_bits
from .rng import SplitRng


class DecodeError(ValueError):
    """Evaluated output label matches neither decode digest."""


class OTPoolError(RuntimeError):
    """Precomputed OT records missing or already consumed."""


def _label_bytes(label: int, t_bits: int) -> bytes:
    return label.to_bytes((t_bits + 7) // 8, "big")


def _row_key(la: int, lb: int, gate_id: int, t_bits: int) -> int:
    h = hashlib.sha256(
        b"gc-row:" + gate_id.to_bytes(4, "big") + _label_bytes(la, t_bits) + _label_bytes(lb, t_bits)
    ).digest()
    return int.from_bytes(h, "big") & ((1 << t_bits) - 1)


def _decode_digest(label: int, t_bits: int) -> bytes:
    return hashlib.sha256(b"gc-decode:" + _label_bytes(label, t_bits)).digest()[:16]


@dataclass
class GarbledCircuit:
    """Material the evaluator receives (plus per-gate ids for key derivation)."""

    circuit: BooleanCircuit
    t_bits: int
    tables: list[tuple[int, int, int] | None]  # aligned with circuit.gates
    decode: list[tuple[bytes, bytes]]  # per output wire: digests for 0 and 1

    @property
    def table_bits(self) -> int:
        return 3 * self.t_bits * self.circuit.non_xor_count


@dataclass
class GarblerSecrets:
    """Garbler-side label map; never sent anywhere."""

    delta: int
    label0: list[int]  # per wire

    def input_label(self, wire: int, bit: int) -> int:
        return self.label0[wire] ^ (self.delta if bit else 0)


@dataclass
class GarbleStats:
    garble_hashes: int = 0


def garble(circuit: BooleanCircuit, t_bits: int, rng: SplitRng) -> tuple[GarbledCircuit, GarblerSecrets, GarbleStats]:
    delta = rng.getrandbits(t_bits) | 1
    label0 = [rng.getrandbits(t_bits) for _ in range(circuit.n_inputs)]
    tables: list[tuple[int, int, int] | None] = []
    stats = GarbleStats()

    for gate_id, gate in enumerate(circuit.gates):
        if gate.op == XOR:
            label0.append(label0[gate.a] ^ label0[gate.b])
            tables.append(None)
        elif gate.op == NOT:
            label0.append(label0[gate.a] ^ delta)
            tables.append(None)
        elif gate.op == TT:
            la0, lb0 = label0[gate.a], label0[gate.b]
            pa, pb = la0 & 1, lb0 & 1
            # Implicit row (select bits 0,0): its key defines the output
            # label for value tt(pa, pb).  Label derivation, not billed as a
            # table hash.
            k00 = _row_key(la0 ^ (delta if pa else 0), lb0 ^ (delta if pb else 0), gate_id, t_bits)
            v00 = (gate.tt >> (pa * 2 + pb)) & 1
            out0 = k00 ^ (delta if v00 else 0)
            label0.append(out0)
            rows = []
            for sa, sb in ((0, 1), (1, 0), (1, 1)):
                va, vb = sa ^ pa, sb ^ pb
                la = la0 ^ (delta if va else 0)
                lb = lb0 ^ (delta if vb else 0)
                key = _row_key(la, lb, gate_id, t_bits)
                stats.garble_hashes += 1
                v = (gate.tt >> (va * 2 + vb)) & 1
                rows.append(key ^ out0 ^ (delta if v else 0))
            tables.append(tuple(rows))
        else:
            raise ValueError(f"unknown gate op {gate.op!r}")

    decode = [
        (_decode_digest(label0[w], t_bits), _decode_digest(label0[w] ^ delta, t_bits))
        for w in circuit.outputs
    ]
    return GarbledCircuit(circuit, t_bits, tables, decode), GarblerSecrets(delta, label0), stats


@dataclass
class EvalStats:
    eval_hashes: int = 0


def evaluate(garbled: GarbledCircuit, input_labels: list[int]) -> tuple[list[int], EvalStats]:
    """Run the garbled circuit on one label per input wire; returns decoded
    output bits.  Exactly one hash per non-XOR gate."""
    circuit = garbled.circuit
    if len(input_labels) != circuit.n_inputs:
        raise ValueError("need one label per input wire")
    labels = list(input_labels)
    stats = EvalStats()
    for gate_id, gate in enumerate(circuit.gates):
        if gate.op == XOR:
            labels.append(labels[gate.a] ^ labels[gate.b])
        elif gate.op == NOT:
            labels.append(labels[gate.a])
        else:
            la, lb = labels[gate.a], labels[gate.b]
            key = _row_key(la, lb, gate_id, garbled.t_bits)
            stats.eval_hashes += 1
            sa, sb = la & 1, lb & 1
            if sa == 0 and sb == 0:
                labels.append(key)
            else:
                labels.append(key ^ garbled.tables[gate_id][sa * 2 + sb - 1])
    bits = []
    for w, (d0, d1) in zip(circuit.outputs, garbled.decode):
        dg = _decode_digest(labels[w], garbled.t_bits)
        if dg == d0:
            bits.append(0)
        elif dg == d1:
            bits.append(1)
        else:
            raise DecodeError(f"output wire {w}: label matches neither decode digest")
    return bits, stats


# ---------------------------------------------------------------------------
# Oblivious transfer with precomputation (trusted-dealer offline phase).
# ---------------------------------------------------------------------------


@dataclass
class OTPrecomputation:
    """Correlated randomness dealt offline: the sender holds pad pairs, the
    receiver a masked choice bit and the pad it selects."""

    t_bits: int
    sender_pairs: list[tuple[int, int]]
    receiver_bits: list[int]
    receiver_pads: list[int]
    consumed: int = 0

    def take(self, count: int) -> int:
        if self.consumed + count > len(self.sender_pairs):
            raise OTPoolError(
                f"OT pool exhausted: need {count}, have {len(self.sender_pairs) - self.consumed}"
            )
        base = self.consumed
        self.consumed += count
        return base


def ot_precompute(count: int, t_bits: int, rng: SplitRng) -> OTPrecomputation:
    pairs, bits, pads = [], [], []
    for _ in range(count):
        r0, r1 = rng.getrandbits(t_bits), rng.getrandbits(t_bits)
        d = rng.getrandbits(1)
        pairs.append((r0, r1))
        bits.append(d)
        pads.append(r1 if d else r0)
    return OTPrecomputation(t_bits, pairs, bits, pads)


@dataclass
class OTOnlineResult:
    labels: list[int]
    online_bits: int  # sender->receiver masked pairs: 2t per instance
    correction_bits: int  # receiver->sender choice corrections: 1 per instance


def ot_online(
    pre: OTPrecomputation, choice_bits: list[int], label_pairs: list[tuple[int, int]]
) -> OTOnlineResult:
    """Online phase: receiver gets exactly label_pairs[i][choice_bits[i]]."""
    if len(choice_bits) != len(label_pairs):
        raise ValueError("one label pair per choice bit")
    base = pre.take(len(choice_bits))
    labels = []
    for i, (c, (m0, m1)) in enumerate(zip(choice_bits, label_pairs)):
        r0, r1 = pre.sender_pairs[base + i]
        d = pre.receiver_bits[base + i]
        b = c ^ d  # receiver -> sender
        f0 = m0 ^ (r1 if b else r0)  # sender -> receiver
        f1 = m1 ^ (r0 if b else r1)
        fc = f1 if c else f0
        labels.append(fc ^ pre.receiver_pads[base + i])
    n = len(choice_bits)
    return OTOnlineResult(labels, online_bits=2 * pre.t_bits * n, correction_bits=n)


# ---------------------------------------------------------------------------
# Two-party decision execution with exact wire accounting.
# ---------------------------------------------------------------------------


def account_final_step(w: int, t: int) -> int:
    """Paper-model bits on the wire for the dual decision circuit:
    OT online 2w*(2t) + garbler input labels 2w*t + tables 3w*(3t) = 15wt."""
    return 15 * w * t


@dataclass
class DecisionTranscript:
    outputs: list[int]
    w: int
    t_bits: int
    dual: bool
    non_xor: int
    garble_hashes: int
    eval_hashes: int
    table_bits: int
    garbler_label_bits: int
    ot_online_bits: int
    ot_correction_bits: int
    decode_bits: int
    rounds: int = 2

    @property
    def accounted_bits(self) -> int:
        """The three categories the complexity table bills (garbler->evaluator
        payload); correction and decode bits are tracked but unbilled."""
        return self.table_bits + self.garbler_label_bits + self.ot_online_bits

    @property
    def total_hashes(self) -> int:
        return self.garble_hashes + self.eval_hashes


def run_decision(
    w: int,
    masked: int,
    mask: int,
    thr_eval: int,
    thr_garbler: int | None,
    t_bits: int,
    garble_rng: SplitRng,
    ot_rng: SplitRng,
    n_bits: int | None = None,
    ot_pool: OTPrecomputation | None = None,
) -> DecisionTranscript:
    """Garble, transfer, and evaluate one decision circuit between two
    logical parties.

    Round 1 (evaluator -> garbler): OT choice corrections.
    Round 2 (garbler -> evaluator): tables, garbler input labels, OT pads,
    decode digests.  Inputs wider than w bits are truncated to their low w
    bits, which is exactly what removing a statistical mask mod 2^w needs.
    """
    dual = thr_garbler is not None
    circuit = build_decision_circuit(w, dual, n_bits)
    garbled, secrets, gstats = garble(circuit, t_bits, garble_rng)

    garbler_vals = int_to_bits(mask, w) + (int_to_bits(thr_garbler, w) if dual else [])
    eval_vals = int_to_bits(masked, w) + int_to_bits(thr_eval, w)

    garbler_labels = [secrets.input_label(i, b) for i, b in enumerate(garbler_vals)]
    pool = ot_pool if ot_pool is not None else ot_precompute(len(eval_vals), t_bits, ot_rng)
    pairs = [
        (secrets.input_label(circuit.n_garbler + i, 0), secrets.input_label(circuit.n_garbler + i, 1))
        for i in range(len(eval_vals))
    ]
    ot_res = ot_online(pool, eval_vals, pairs)

    outputs, estats = evaluate(garbled, garbler_labels + ot_res.labels)
    return DecisionTranscript(
        outputs=outputs,
        w=w,
        t_bits=t_bits,
        dual=dual,
        non_xor=circuit.non_xor_count,
        garble_hashes=gstats.garble_hashes,
        eval_hashes=estats.eval_hashes,
        table_bits=garbled.table_bits,
        garbler_label_bits=t_bits * len(garbler_labels),
        ot_online_bits=ot_res.online_bits,
        ot_correction_bits=ot_res.correction_bits,
        decode_bits=sum(8 * (len(d0) + len(d1)) for d0, d1 in garbled.decode),
    )
