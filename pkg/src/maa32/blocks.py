"""Primitive operations on 32-bit blocks.

The authenticator mixes three flavours of arithmetic on unsigned 32-bit
words:

* plain bit logic: AND, OR, XOR and a one-bit left rotation;
* modulo 2**32 addition with the carry bit exposed separately;
* multiplication modulo 2**32 - 1 and modulo 2**32 - 2, built by folding
  the high half of the 64-bit product back into the low half (an end-around
  carry for 2**32 - 1, a doubled carry for 2**32 - 2, since 2**32 leaves
  remainder 1 and 2 respectively).

Two masking steps keep multiplier operands away from degenerate values:
``fix1``/``fix2`` force a few bits on and a few bits off, so the result is
never 0, never all-ones, and for ``fix2`` always below 2**31.  That last
guarantee is what licenses ``mul2a``, a cheaper variant of ``mul2`` that
skips one carry-folding stage.

Byte conditioning (``byt_pat``) rewrites the forbidden byte values 00 and
FF inside a pair of blocks and returns a pattern byte recording which of
the eight byte positions were touched.
"""

from __future__ import annotations

from typing import NamedTuple

MASK = 0xFFFFFFFF

# fix1: set the FIX1_SET bits, then clear everything outside FIX1_KEEP.
# fix2 likewise.  FIX2_KEEP has bit 31 clear, which caps fix2 output below
# 2**31; that bound is load-bearing for mul2a (see below).
FIX1_SET = 0x02040801
FIX2_SET = 0x00804021
FIX1_KEEP = 0xBFEF7FDF
FIX2_KEEP = 0x7DFEFBFF

# The set bits must survive the keep mask, otherwise fix1/fix2 could not
# guarantee a nonzero result.  Checked at import because everything else
# leans on it.
if FIX1_SET & FIX1_KEEP != FIX1_SET or FIX2_SET & FIX2_KEEP != FIX2_SET:
    raise AssertionError("fix mask constants are inconsistent")


class ConditioningResult(NamedTuple):
    first: int
    second: int
    pattern: int  # one bit per byte position, MSB examined first


def and_(x: int, y: int) -> int:
    return x & y


def or_(x: int, y: int) -> int:
    return x | y


def xor(x: int, y: int) -> int:
    return x ^ y


def cyc(x: int) -> int:
    """Rotate left by one bit."""
    return ((x << 1) | (x >> 31)) & MASK


def add(x: int, y: int) -> int:
    """Sum modulo 2**32, discarding the carry."""
    return (x + y) & MASK


def car(x: int, y: int) -> int:
    """Carry bit of the 32-bit sum: 0 or 1."""
    return (x + y) >> 32


def high_mul(x: int, y: int) -> int:
    """Upper 32 bits of the 64-bit product."""
    return (x * y) >> 32


def low_mul(x: int, y: int) -> int:
    """Lower 32 bits of the 64-bit product."""
    return (x * y) & MASK


def fix1(x: int) -> int:
    return (x | FIX1_SET) & FIX1_KEEP


def fix2(x: int) -> int:
    return (x | FIX2_SET) & FIX2_KEEP


def _mul1_parts(x: int, y: int) -> tuple[int, int]:
    """Folded sum and carry for mul1, exposed so tests can watch the carry."""
    u = high_mul(x, y)
    l = low_mul(x, y)
    s = add(u, l)
    c = car(u, l)
    # u and l never exceed 2**32 - 1, so their sum carries at most one bit.
    if c not in (0, 1):
        raise AssertionError("mul1 carry out of range")
    return s, c


def mul1(x: int, y: int) -> int:
    """Multiply modulo 2**32 - 1 by end-around carry.

    Returns the representative the fold produces; for a product congruent
    to zero that can be 0xFFFFFFFF rather than 0.  The final add cannot
    overflow: when the carry is 1 the folded sum is at most 0xFFFFFFFE.
    """
    s, c = _mul1_parts(x, y)
    return add(s, c)


def mul2(x: int, y: int) -> int:
    """Multiply modulo 2**32 - 2: carries fold back with weight two."""
    u = high_mul(x, y)
    l = low_mul(x, y)
    f = add(add(u, u), add(car(u, u), car(u, u)))
    s = add(f, l)
    c = car(f, l)
    # f + 2*car(u,u) <= 0xFFFFFFFE and, when c is 1, s <= 0xFFFFFFFD,
    # so neither doubling-fold can itself overflow.
    return add(s, add(c, c))


def mul2a(x: int, y: int) -> int:
    """Faster mul2 with one fewer folding stage.

    Drops the carry of the doubling step, so the result is only congruent
    to x*y modulo 2**32 - 2 when the high product half is below 2**31,
    which holds whenever either operand is below 2**31.  The main loop
    feeds it fix2 output, which satisfies that bound by construction.
    Total for all inputs; callers outside that range just get the cheaper
    fold's answer.
    """
    u = high_mul(x, y)
    l = low_mul(x, y)
    f = add(u, u)
    s = add(f, l)
    c = car(f, l)
    return add(s, add(c, c))


def byt_pat(a: int, b: int) -> ConditioningResult:
    """Rewrite 00/FF bytes in a block pair and report where they were.

    The eight bytes are examined most significant first.  A running byte
    register P doubles at every position and increments when the byte is
    00 or FF; an offending byte is then replaced by its XOR with the
    updated P.  The final P is returned as the pattern: nonzero exactly
    when some byte was rewritten, and it distinguishes most positional
    arrangements of rewritten bytes.
    """
    raw = bytearray(a.to_bytes(4, "big") + b.to_bytes(4, "big"))
    p = 0
    for i in range(8):
        p = (2 * p) & 0xFF
        if raw[i] in (0x00, 0xFF):
            p += 1
            raw[i] ^= p
    return ConditioningResult(
        int.from_bytes(raw[:4], "big"), int.from_bytes(raw[4:], "big"), p
    )


def block_to_octets(x: int) -> tuple[int, int, int, int]:
    """Split a block into four bytes, most significant first."""
    return (x >> 24) & 0xFF, (x >> 16) & 0xFF, (x >> 8) & 0xFF, x & 0xFF


def octets_to_block(o0: int, o1: int, o2: int, o3: int) -> int:
    for o in (o0, o1, o2, o3):
        if not 0 <= o <= 0xFF:
            raise ValueError("octet out of range: %r" % (o,))
    return (o0 << 24) | (o1 << 16) | (o2 << 8) | o3


def block_hex(x: int) -> str:
    """Canonical rendering: exactly eight uppercase hex digits."""
    return "%08X" % x
