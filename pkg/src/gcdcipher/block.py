"""Per-block arithmetic for the GCD block cipher.

A block is two consecutive plaintext bytes (a, b). The cipher byte is
gcd(a, b), and the 40-bit key record stores everything needed to undo it:
the zero-bit weight sums of both bytes, the remaining product of the first
byte (a divided by the gcd), and the quotient and remainder of dividing
the second byte's remaining product by the first's.

All operations are pure functions; there is no shared state.
"""

from __future__ import annotations

import math
from typing import NamedTuple

RECORD_SIZE = 5

# positional weights of an 8-bit value, most significant first
BIT_WEIGHTS = (128, 64, 32, 16, 8, 4, 2, 1)


class MalformedRecordError(ValueError):
    """A key record reconstructs a sub-block outside the 8-bit range."""


class KeyRecord(NamedTuple):
    """The five one-byte fields of a per-block key, in wire order."""

    zero_weight_first: int
    zero_weight_second: int
    rp_first: int
    quotient: int
    remainder: int

    def to_bytes(self) -> bytes:
        return bytes(self)

    @classmethod
    def from_bytes(cls, raw: bytes) -> "KeyRecord":
        if len(raw) != RECORD_SIZE:
            raise ValueError(f"key record must be {RECORD_SIZE} bytes, got {len(raw)}")
        return cls(*raw)


def gcd(a: int, b: int) -> int:
    """Greatest common divisor, with gcd(0, x) = x and gcd(0, 0) = 0."""
    return math.gcd(a, b)


def zero_weight(x: int) -> int:
    """Sum of the positional weights at which a byte has a zero bit.

    Identically 255 - x; computed from the bits so the identity stays a
    testable property rather than the definition.
    """
    _check_byte(x)
    total = 0
    for weight in BIT_WEIGHTS:
        if not x & weight:
            total += weight
    return total


def encrypt_block(first: int, second: int) -> tuple[int, KeyRecord]:
    """Encrypt one two-byte block; returns the cipher byte and its key record."""
    _check_byte(first)
    _check_byte(second)
    cipher = gcd(first, second)
    if cipher:
        rp_first = first // cipher
        rp_second = second // cipher
    else:
        # all-zero block: gcd is 0 by convention, both remaining products too
        rp_first = rp_second = 0
    if rp_first:
        quotient, remainder = divmod(rp_second, rp_first)
    else:
        # first byte is 0: dividing by its remaining product is undefined,
        # so park the second remaining product in the remainder field
        quotient, remainder = 0, rp_second
    record = KeyRecord(zero_weight(first), zero_weight(second), rp_first, quotient, remainder)
    return cipher, record


def decrypt_block(cipher: int, record: KeyRecord) -> tuple[int, int]:
    """Invert encrypt_block, rebuilding both plaintext bytes.

    Rejects records whose reconstruction leaves the 8-bit range; no record
    produced by encrypt_block can do that, so an overflow means the key
    material was corrupted or forged.
    """
    _check_byte(cipher)
    first = record.rp_first * cipher
    if not 0 <= first <= 255:
        raise MalformedRecordError(f"first sub-block reconstructs to {first}, outside 0..255")
    rp_second = record.rp_first * record.quotient + record.remainder
    second = rp_second * cipher
    if not 0 <= second <= 255:
        raise MalformedRecordError(f"second sub-block reconstructs to {second}, outside 0..255")
    return first, second


def _check_byte(value: int) -> None:
    if not 0 <= value <= 255:
        raise ValueError(f"byte value out of range: {value}")
