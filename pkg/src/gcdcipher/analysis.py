"""Evaluation metrics for the codec.

Covers byte-frequency chi-square between source and cipher files, the
avalanche effect under a one-bit-per-byte flip, the compression ratio,
wall-clock codec timing, and the key-file leakage audit.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .block import RECORD_SIZE
from .filecodec import KeyFile, decrypt_file, encrypt_file

# default flip target: the 5th bit counting the most significant as 1st (weight 8)
FLIP_MASK = 0x08

_POPCOUNT = np.array([x.bit_count() for x in range(256)], dtype=np.uint32)


@dataclass(frozen=True)
class AnalysisReport:
    """Per-file metrics row."""

    source_size: int
    cipher_size: int
    encrypt_time: float
    decrypt_time: float
    chi_square: float
    degrees_of_freedom: int
    avalanche_percent: float
    compression_percent: float


def frequency_table(data: bytes) -> np.ndarray:
    """Count occurrences of each byte value; returns a length-256 array."""
    values = np.frombuffer(bytes(data), dtype=np.uint8)
    return np.bincount(values, minlength=256).astype(np.int64)


def chi_square(source, encrypted) -> tuple[float, int]:
    """Pearson goodness-of-fit statistic between two byte-frequency tables.

    Expected frequencies come from the source table. Byte values absent
    from the source are left out of both the sum and the degrees of
    freedom, so dof is the number of distinct source values minus one.
    """
    f_e = np.asarray(source, dtype=np.float64)
    f_o = np.asarray(encrypted, dtype=np.float64)
    if f_e.shape != f_o.shape:
        raise ValueError(f"frequency tables differ in shape: {f_e.shape} vs {f_o.shape}")
    present = f_e > 0
    classes = int(present.sum())
    if classes == 0:
        raise ValueError("chi_square is undefined for an empty source table")
    diff = f_o[present] - f_e[present]
    statistic = float(np.sum(diff * diff / f_e[present]))
    return statistic, classes - 1


def hamming_distance(a: bytes, b: bytes) -> int:
    """Number of differing bits between two equal-length byte strings."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    if not a:
        return 0
    xored = np.frombuffer(a, dtype=np.uint8) ^ np.frombuffer(b, dtype=np.uint8)
    return int(_POPCOUNT[xored].sum())


def avalanche(plaintext: bytes, flip_mask: int = FLIP_MASK) -> float:
    """Percentage of output bits that change when every plaintext byte has
    flip_mask XORed into it.

    The compared output is the cipher bytes followed by the key records;
    the constant key-file header is excluded. With flip_mask 0 the mutated
    input equals the original and the result is exactly 0.
    """
    data = bytes(plaintext)
    if not data:
        raise ValueError("avalanche is undefined for an empty plaintext")
    if not 0 <= flip_mask <= 255:
        raise ValueError(f"flip mask out of range: {flip_mask}")
    mutated = (np.frombuffer(data, dtype=np.uint8) ^ np.uint8(flip_mask)).tobytes()
    base_cipher, base_key = encrypt_file(data)
    mut_cipher, mut_key = encrypt_file(mutated)
    baseline = base_cipher + base_key.record_bytes
    flipped = mut_cipher + mut_key.record_bytes
    return 100.0 * hamming_distance(baseline, flipped) / (8 * len(baseline))


def keyfile_leakage_audit(key: KeyFile) -> bytes:
    """Recover the plaintext from the key file alone, never reading the cipher.

    The first two fields of every record are the bitwise complements of
    the block's two plaintext bytes, so complementing them again rebuilds
    the whole file. This is a structural flaw of the scheme, demonstrated
    rather than fixed.
    """
    recs = np.frombuffer(key.record_bytes, dtype=np.uint8).reshape(-1, RECORD_SIZE)
    plain = np.empty(2 * len(recs), dtype=np.uint8)
    plain[0::2] = 255 - recs[:, 0]
    plain[1::2] = 255 - recs[:, 1]
    return plain.tobytes()[: key.plaintext_length]


def analyze_file(plaintext: bytes) -> AnalysisReport:
    """Encrypt, decrypt, and measure one file.

    Times wrap the pure codec calls only. The round trip is verified and
    a mismatch raises RuntimeError, since it can only mean a codec bug.
    """
    data = bytes(plaintext)
    if not data:
        raise ValueError("analyze_file needs a non-empty input")

    start = time.perf_counter()
    cipher, key = encrypt_file(data)
    encrypt_time = time.perf_counter() - start

    start = time.perf_counter()
    recovered = decrypt_file(cipher, key)
    decrypt_time = time.perf_counter() - start

    if recovered != data:
        raise RuntimeError("round-trip mismatch: decryption did not restore the input")

    statistic, dof = chi_square(frequency_table(data), frequency_table(cipher))
    return AnalysisReport(
        source_size=len(data),
        cipher_size=len(cipher),
        encrypt_time=encrypt_time,
        decrypt_time=decrypt_time,
        chi_square=statistic,
        degrees_of_freedom=dof,
        avalanche_percent=avalanche(data),
        compression_percent=100.0 * (1.0 - len(cipher) / len(data)),
    )
