"""Whole-message authentication built on the block primitives.

A message is a sequence of 32-bit blocks (byte input is padded with zeros
to a block boundary).  Authentication runs in three phases:

* key expansion ("prelude"): the two 32-bit key words are raised to small
  powers under both near-2**32 moduli, the power pairs are XOR-combined,
  and the results are byte-conditioned into six working values: two
  multiplier accumulators X0 and Y0, a rotating word V0 with its XOR mask
  W, and two trailer blocks S and T.  This depends only on the key and is
  computed once per message.
* main loop: per message block M, rotate V, derive E = V XOR W, then
      X := mul1(X XOR M, fix1(E + Y))
      Y := mul2a(Y XOR M, fix2(E + X))
  where the Y update reads the freshly updated X.  fix2 keeps its output
  below 2**31, which is what makes mul2a safe here.
* coda: two extra loop iterations with M = S and M = T, then the result
  is X XOR Y.

Messages longer than 256 blocks are processed in a mode of operation:
split into 256-block segments, authenticate the first, then prepend each
intermediate result to the next segment (a 257-block unit) and continue.
The last result is the MAC.  A message of exactly 256 blocks is a single
segment.  Messages of 1,000,000 blocks or more are rejected.
"""

from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple

from .blocks import (
    FIX1_KEEP,
    FIX1_SET,
    FIX2_KEEP,
    FIX2_SET,
    MASK,
    byt_pat,
    cyc,
    fix1,
    fix2,
    mul1,
    mul2,
    mul2a,
)

SEGMENT_BLOCKS = 256
MAX_MESSAGE_BLOCKS = 1_000_000  # first rejected length

# Block i (1-based) of the deterministic test-message generator.
_GEN_STEP = 0x9E3779B9


class MessageTooLong(ValueError):
    """Raised for messages of MAX_MESSAGE_BLOCKS blocks or more."""


class Key(NamedTuple):
    first: int
    second: int


class PreludeIntermediate(NamedTuple):
    """The six combined key powers, before byte conditioning."""

    h4: int
    h5: int
    h6: int
    h7: int
    h8: int
    h9: int


class PreludeOutput(NamedTuple):
    x0: int  # multiplier accumulator seeds
    y0: int
    v0: int  # rotating word and its fixed XOR mask
    w: int
    s: int  # trailer blocks mixed in by the coda
    t: int


class LoopState(NamedTuple):
    x: int
    y: int
    v: int


def pad_message(data: bytes) -> list[int]:
    """Pack bytes into big-endian blocks, zero-filling the last one."""
    blocks = []
    for i in range(0, len(data), 4):
        chunk = data[i : i + 4]
        if len(chunk) < 4:
            chunk = chunk + b"\x00" * (4 - len(chunk))
        blocks.append(int.from_bytes(chunk, "big"))
    return blocks


def make_message(n_blocks: int) -> list[int]:
    """Deterministic test message: block i (1-based) is i * 9E3779B9 mod 2**32."""
    if n_blocks < 0:
        raise ValueError("block count must be nonnegative")
    return [(i * _GEN_STEP) & MASK for i in range(1, n_blocks + 1)]


def _power_chain(mul, base: int) -> dict[int, int]:
    """Powers 2,4,5,6,7,8,9 of base under the given folded multiplication."""
    p = {2: mul(base, base)}
    p[4] = mul(p[2], p[2])
    p[5] = mul(p[4], base)
    p[6] = mul(p[4], p[2])
    p[7] = mul(p[5], p[2])
    p[8] = mul(p[4], p[4])
    p[9] = mul(p[7], p[2])
    return p


def prelude_intermediate(key: Key) -> PreludeIntermediate:
    """Expand the key into the six combined powers.

    Even powers of the first key word and odd powers of the second are
    computed under both moduli and the two representatives XORed.  When
    the raw key contains a byte 00 or FF, the fifth-power combination is
    additionally scaled by 4 modulo 2**32 - 2, marking conditioned keys;
    clean keys take the combination as is.  Locked by the key-expansion
    known answers in the test suite.
    """
    j, k = key
    _validate_block(j)
    _validate_block(k)
    j_ones = _power_chain(mul1, j)
    j_twos = _power_chain(mul2, j)
    k_ones = _power_chain(mul1, k)
    k_twos = _power_chain(mul2, k)
    scale = 4 if byt_pat(j, k).pattern else 1
    return PreludeIntermediate(
        h4=j_ones[4] ^ j_twos[4],
        h5=mul2(k_ones[5] ^ k_twos[5], scale),
        h6=j_ones[6] ^ j_twos[6],
        h7=k_ones[7] ^ k_twos[7],
        h8=j_ones[8] ^ j_twos[8],
        h9=k_ones[9] ^ k_twos[9],
    )


def prelude(key: Key) -> PreludeOutput:
    """Derive the six working values from the key.

    Pure: equal keys give equal output, so it is computed once per
    message regardless of segmentation.
    """
    h = prelude_intermediate(key)
    x0, y0, _ = byt_pat(h.h4, h.h5)
    v0, w, _ = byt_pat(h.h6, h.h7)
    s, t, _ = byt_pat(h.h8, h.h9)
    return PreludeOutput(x0, y0, v0, w, s, t)


def main_loop_step(state: LoopState, w: int, m: int) -> LoopState:
    """One absorbing iteration; see the module docstring for the dataflow."""
    v = cyc(state.v)
    e = v ^ w
    x = mul1(state.x ^ m, fix1((e + state.y) & MASK))
    y = mul2a(state.y ^ m, fix2((e + x) & MASK))
    return LoopState(x, y, v)


def coda(state: LoopState, w: int, s: int, t: int) -> int:
    """Absorb the two trailer blocks and collapse the state to the result."""
    state = main_loop_step(state, w, s)
    state = main_loop_step(state, w, t)
    return state.x ^ state.y


def process_segment(pre: PreludeOutput, blocks: list[int]) -> int:
    """Authenticate one segment unit (at most 257 blocks: chaining + 256).

    Equivalent to folding main_loop_step over the blocks from the prelude
    seeds and finishing with the coda; written as one tight loop because
    this is the throughput path.
    """
    if len(blocks) > SEGMENT_BLOCKS + 1:
        raise ValueError("segment unit longer than %d blocks" % (SEGMENT_BLOCKS + 1))
    x, y, v = pre.x0, pre.y0, pre.v0
    w = pre.w
    mask = MASK
    a, c = FIX1_SET, FIX1_KEEP
    b, d = FIX2_SET, FIX2_KEEP
    for m in blocks:
        # Inlined main_loop_step.  The mul1 fold (s & mask) + carry cannot
        # exceed the mask; the mul2a fold doubles its carry, and its high
        # half is below 2**31 because the fix2 operand is.
        v = ((v << 1) | (v >> 31)) & mask
        e = v ^ w
        p = (x ^ m) * ((((e + y) & mask) | a) & c)
        s = (p >> 32) + (p & mask)
        x = (s & mask) + (s >> 32)
        p = (y ^ m) * ((((e + x) & mask) | b) & d)
        s = ((p >> 32) << 1) + (p & mask)
        y = (s & mask) + ((s >> 32) << 1)
    return coda(LoopState(x, y, v), w, pre.s, pre.t)


def segment(message: list[int]) -> list[list[int]]:
    """Split a message into 256-block segments; empty input is one empty segment."""
    if not message:
        return [[]]
    return [message[i : i + SEGMENT_BLOCKS] for i in range(0, len(message), SEGMENT_BLOCKS)]


def mac(key: Key, message: Iterable[int]) -> int:
    """Authenticate a message given as an iterable of blocks.

    Single forward pass; buffers at most one segment at a time, so any
    iterator works (files, generators).  Raises MessageTooLong as soon as
    the millionth block is consumed.
    """
    pre = prelude(key)
    try:
        known = len(message)  # type: ignore[arg-type]
    except TypeError:
        known = None
    if known is None:
        return _chain_segments(pre, _limited(message))
    if known >= MAX_MESSAGE_BLOCKS:
        raise MessageTooLong(
            "message has %d blocks; limit is %d" % (known, MAX_MESSAGE_BLOCKS)
        )
    return _chain_segments(pre, message)


def _limited(message: Iterable[int]) -> Iterator[int]:
    count = 0
    for m in message:
        count += 1
        if count >= MAX_MESSAGE_BLOCKS:
            raise MessageTooLong(
                "message reached %d blocks; limit is %d" % (count, MAX_MESSAGE_BLOCKS)
            )
        yield m


def _chain_segments(pre: PreludeOutput, message: Iterable[int]) -> int:
    """The segmentation engine, without the message-length policy.

    Each intermediate result is prepended to the next 256-block segment;
    the throughput benchmark drives this directly, since the length cap
    belongs to the mac interface, not to the arithmetic.
    """
    it = iter(message)
    unit = _take_segment(it)
    z = None
    while True:
        nxt = _take_segment(it)
        z = process_segment(pre, unit if z is None else [z] + unit)
        if not nxt:
            return z
        unit = nxt


def mac_bytes(key: Key, data: bytes) -> int:
    return mac(key, pad_message(data))


def _take_segment(it: Iterator[int]) -> list[int]:
    seg = []
    for m in it:
        if not 0 <= m <= MASK:
            raise ValueError("message block out of 32-bit range: %r" % (m,))
        seg.append(m)
        if len(seg) == SEGMENT_BLOCKS:
            break
    return seg


def _validate_block(value: int) -> None:
    if not 0 <= value <= MASK:
        raise ValueError("block out of 32-bit range: %r" % (value,))
