"""File-level encryption, decryption, and the key-file wire format.

Key file layout:

    bytes 0-3    magic "GCDK"
    byte  4      format version, 0x01
    bytes 5-12   plaintext length in bytes, unsigned 64-bit big-endian
    bytes 13...  one 5-byte record per block: zero_weight_first,
                 zero_weight_second, rp_first, quotient, remainder

The cipher file is the bare cipher bytes, one per block, with no framing,
so its size is exactly ceil(n / 2) for an n-byte plaintext. A trailing
unpaired plaintext byte is paired with itself; decryption drops the
duplicate using the header's plaintext length.

Streams are processed in fixed-size chunks, so memory stays bounded
regardless of input size. The chunk arithmetic is vectorized with numpy;
tests pin it byte-for-byte against the scalar ops in ``block``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import BinaryIO, Iterator

import numpy as np

from .block import RECORD_SIZE, KeyRecord, MalformedRecordError

MAGIC = b"GCDK"
VERSION = 1
HEADER_FORMAT = ">4sBQ"
HEADER_SIZE = struct.calcsize(HEADER_FORMAT)

CHUNK_BLOCKS = 1 << 15  # 64 KiB of plaintext per chunk


class KeyFileFormatError(ValueError):
    """Key file violates the wire format: magic, version, or size arithmetic."""


class ConsistencyError(ValueError):
    """Cipher file and key file disagree about the block count."""


class CorruptRecordError(MalformedRecordError):
    """A key record failed reconstruction; carries the failing block index."""

    def __init__(self, message: str, block_index: int):
        super().__init__(message)
        self.block_index = block_index


def block_count(plaintext_length: int) -> int:
    """Number of two-byte blocks covering a plaintext, odd tail included."""
    return (plaintext_length + 1) // 2


@dataclass(frozen=True)
class KeyFile:
    """Parsed key file: the plaintext length plus the raw record payload.

    Records are kept as bytes rather than objects so multi-megabyte keys
    stay cheap; use ``record``/``records`` for structured access.
    """

    plaintext_length: int
    record_bytes: bytes

    def __post_init__(self) -> None:
        expected = block_count(self.plaintext_length) * RECORD_SIZE
        if len(self.record_bytes) != expected:
            raise ValueError(
                f"plaintext length {self.plaintext_length} implies "
                f"{expected} record bytes, got {len(self.record_bytes)}"
            )

    @property
    def record_count(self) -> int:
        return len(self.record_bytes) // RECORD_SIZE

    def record(self, index: int) -> KeyRecord:
        if not 0 <= index < self.record_count:
            raise IndexError(f"record index {index} out of range")
        offset = index * RECORD_SIZE
        return KeyRecord(*self.record_bytes[offset : offset + RECORD_SIZE])

    def records(self) -> Iterator[KeyRecord]:
        for offset in range(0, len(self.record_bytes), RECORD_SIZE):
            yield KeyRecord(*self.record_bytes[offset : offset + RECORD_SIZE])

    def to_bytes(self) -> bytes:
        header = struct.pack(HEADER_FORMAT, MAGIC, VERSION, self.plaintext_length)
        return header + self.record_bytes


def parse_key_file(raw: bytes) -> KeyFile:
    """Parse and validate a serialized key file."""
    raw = bytes(raw)
    plaintext_length = _parse_header(raw[:HEADER_SIZE])
    payload = raw[HEADER_SIZE:]
    expected = block_count(plaintext_length) * RECORD_SIZE
    if len(payload) != expected:
        raise KeyFileFormatError(
            f"plaintext length {plaintext_length} implies a {expected}-byte "
            f"record payload, got {len(payload)} bytes"
        )
    return KeyFile(plaintext_length, payload)


def encrypt_file(plaintext: bytes) -> tuple[bytes, KeyFile]:
    """Encrypt a byte string; returns the cipher bytes and the key file."""
    data = bytes(plaintext)
    length = len(data)
    if length % 2:
        data += data[-1:]  # self-pair the trailing byte
    cipher, records = _encode_blocks(data)
    return cipher, KeyFile(length, records)


def decrypt_file(cipher: bytes, key: KeyFile) -> bytes:
    """Invert encrypt_file; cipher length must match the key's record count."""
    cipher = bytes(cipher)
    if len(cipher) != key.record_count:
        raise ConsistencyError(
            f"cipher has {len(cipher)} blocks but key has {key.record_count} records"
        )
    plain = _decode_blocks(cipher, key.record_bytes, 0)
    return plain[: key.plaintext_length]


def encrypt_stream(src: BinaryIO, cipher_out: BinaryIO, key_out: BinaryIO) -> int:
    """Encrypt src chunk by chunk; returns the plaintext byte count.

    key_out must be seekable: the header is written up front with a
    placeholder length and patched once the input is exhausted.
    """
    key_out.write(struct.pack(HEADER_FORMAT, MAGIC, VERSION, 0))
    total = 0
    chunk_bytes = 2 * CHUNK_BLOCKS
    while True:
        data = _read_full(src, chunk_bytes)
        got = len(data)
        if not got:
            break
        total += got
        if got % 2:
            data += data[-1:]  # only possible on the final chunk
        cipher, records = _encode_blocks(data)
        cipher_out.write(cipher)
        key_out.write(records)
        if got < chunk_bytes:
            break
    key_out.seek(0)
    key_out.write(struct.pack(HEADER_FORMAT, MAGIC, VERSION, total))
    return total


def decrypt_stream(cipher_in: BinaryIO, key_in: BinaryIO, out: BinaryIO) -> int:
    """Decrypt a cipher stream against a key stream; returns bytes written."""
    plaintext_length = _parse_header(_read_full(key_in, HEADER_SIZE))
    blocks = block_count(plaintext_length)
    done = 0
    while done < blocks:
        k = min(CHUNK_BLOCKS, blocks - done)
        cipher = _read_full(cipher_in, k)
        if len(cipher) < k:
            raise ConsistencyError(
                f"cipher ends after block {done + len(cipher)}, "
                f"key file implies {blocks} blocks"
            )
        records = _read_full(key_in, k * RECORD_SIZE)
        if len(records) < k * RECORD_SIZE:
            raise KeyFileFormatError(
                f"key file record payload truncated near block {done + len(records) // RECORD_SIZE}"
            )
        plain = _decode_blocks(cipher, records, done)
        done += k
        if done == blocks and plaintext_length % 2:
            plain = plain[:-1]  # drop the self-paired duplicate
        out.write(plain)
    if cipher_in.read(1):
        raise ConsistencyError(f"cipher continues past the {blocks} blocks implied by the key file")
    if key_in.read(1):
        raise KeyFileFormatError("trailing bytes after the final key record")
    return plaintext_length


def _parse_header(header: bytes) -> int:
    if len(header) < HEADER_SIZE:
        raise KeyFileFormatError(
            f"key file truncated: header needs {HEADER_SIZE} bytes, got {len(header)}"
        )
    magic, version, plaintext_length = struct.unpack(HEADER_FORMAT, header)
    if magic != MAGIC:
        raise KeyFileFormatError(f"not a key file: bad magic {magic!r}")
    if version != VERSION:
        raise KeyFileFormatError(f"unsupported key file version {version}")
    return plaintext_length


def _encode_blocks(data: bytes) -> tuple[bytes, bytes]:
    # data length must be even; callers self-pair any odd tail
    arr = np.frombuffer(data, dtype=np.uint8)
    a = arr[0::2]
    b = arr[1::2]
    g = np.gcd(a, b)
    safe_g = np.where(g == 0, 1, g).astype(np.uint8)
    rp_first = a // safe_g
    rp_second = b // safe_g
    safe_rp = np.where(rp_first == 0, 1, rp_first).astype(np.uint8)
    has_rp = rp_first > 0
    records = np.empty((len(g), RECORD_SIZE), dtype=np.uint8)
    records[:, 0] = 255 - a  # zero-bit weight sum of x is 255 - x
    records[:, 1] = 255 - b
    records[:, 2] = rp_first
    records[:, 3] = np.where(has_rp, rp_second // safe_rp, 0)
    records[:, 4] = np.where(has_rp, rp_second % safe_rp, rp_second)
    return g.tobytes(), records.tobytes()


def _decode_blocks(cipher: bytes, records: bytes, first_block: int) -> bytes:
    g = np.frombuffer(cipher, dtype=np.uint8).astype(np.uint32)
    recs = np.frombuffer(records, dtype=np.uint8).reshape(-1, RECORD_SIZE).astype(np.uint32)
    first = recs[:, 2] * g
    second = (recs[:, 2] * recs[:, 3] + recs[:, 4]) * g
    bad = (first > 255) | (second > 255)
    if bad.any():
        index = first_block + int(np.argmax(bad))
        raise CorruptRecordError(
            f"key record {index} reconstructs a value above 255", index
        )
    plain = np.empty(2 * len(g), dtype=np.uint8)
    plain[0::2] = first
    plain[1::2] = second
    return plain.tobytes()


def _read_full(stream: BinaryIO, n: int) -> bytes:
    """Read exactly n bytes unless the stream ends first."""
    buf = bytearray()
    while len(buf) < n:
        piece = stream.read(n - len(buf))
        if not piece:
            break
        buf += piece
    return bytes(buf)
