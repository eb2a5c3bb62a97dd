"""Token-matrix file I/O and seeded synthetic clustered embeddings.

Binary format (little-endian throughout): magic "TOK1", u32 version = 1,
u32 M, u32 N, then M*N float32 values row-major.  No trailing data.
A ".csv" path is read as one token per row, N numeric columns, no header.

Synthetic data lives on the unit sphere: cluster centroids are
orthonormalized Gaussian draws and each token is a centroid plus
isotropic Gaussian noise of expected norm `spread`, renormalized.
All randomness comes from a PCG64 generator, so fixtures reproduce
bit-exactly from the seed.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .core import DomainError, FormatError, TokenSequence, validate_sequence

MAGIC = b"TOK1"
VERSION = 1
_HEADER = struct.Struct("<4sIII")
# refuse absurd element counts before allocating
_MAX_ELEMENTS = 1 << 34


class BadMagicError(FormatError):
    """File does not start with the TOK1 magic."""


class VersionMismatchError(FormatError):
    """File declares an unsupported format version."""


class TruncatedPayloadError(FormatError):
    """Payload is shorter (or longer) than the header declares."""


def write_tokens(path, seq: TokenSequence) -> None:
    """Write a validated token matrix; round-trips bitwise with read_tokens."""
    validate_sequence(seq)
    m, n = seq.data.shape
    payload = np.ascontiguousarray(seq.data, dtype="<f4").tobytes()
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, m, n))
        fh.write(payload)


def read_tokens(path) -> TokenSequence:
    """Read a TOK1 file, or a headerless numeric CSV if the path ends .csv."""
    if str(path).endswith(".csv"):
        return _read_csv(path)
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise TruncatedPayloadError(
            f"file holds {len(raw)} bytes, shorter than the {_HEADER.size}-byte header"
        )
    magic, version, m, n = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise BadMagicError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise VersionMismatchError(f"unsupported version {version}, expected {VERSION}")
    if n < 1:
        raise FormatError("embedding dimensionality must be >= 1")
    count = m * n
    if count > _MAX_ELEMENTS:
        raise FormatError(f"declared size {m}x{n} overflows the element limit")
    expected = count * 4
    actual = len(raw) - _HEADER.size
    if actual != expected:
        raise TruncatedPayloadError(
            f"payload holds {actual} bytes, header declares {expected}"
        )
    data = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size).reshape(m, n)
    return TokenSequence(data.copy())


def _read_csv(path) -> TokenSequence:
    data = np.loadtxt(path, delimiter=",", dtype=np.float32, ndmin=2)
    return TokenSequence(data)


def read_scores(path) -> np.ndarray:
    """Read importance scores: a 1xM (or Mx1) TOK1 matrix or one-column CSV."""
    seq = read_tokens(path)
    data = seq.data
    if 1 not in data.shape:
        raise FormatError(f"scores file must be a single row or column, got {data.shape}")
    return data.reshape(-1).astype(np.float64)


@dataclass(frozen=True)
class ClusterSpec:
    """Parameters for synthetic clustered unit-sphere embeddings.

    Tokens come out in contiguous cluster blocks; `labels` gives the
    ground-truth cluster of each of the clusters * per_cluster tokens.
    """

    clusters: int
    per_cluster: int
    dims: int
    spread: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.clusters < 1 or self.per_cluster < 1 or self.dims < 1:
            raise DomainError("clusters, per_cluster, and dims must all be >= 1")
        if self.spread < 0:
            raise DomainError(f"spread must be >= 0, got {self.spread}")

    @property
    def total(self) -> int:
        return self.clusters * self.per_cluster

    @property
    def labels(self) -> np.ndarray:
        return np.repeat(np.arange(self.clusters, dtype=np.int64), self.per_cluster)


def generate_clusters(spec: ClusterSpec) -> tuple[TokenSequence, np.ndarray]:
    """Draw seeded clustered unit vectors; returns (tokens, labels).

    Centroid directions are Gaussian draws orthonormalized by sequential
    projection, so the centroid count may not exceed the dimensionality.
    Noise is isotropic Gaussian scaled to expected norm `spread`.
    """
    c, p, n = spec.clusters, spec.per_cluster, spec.dims
    if c > n:
        raise DomainError(
            f"cannot orthogonalize {c} centroids in {n} dimensions"
        )
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    centroids = rng.standard_normal((c, n))
    for i in range(c):
        for j in range(i):
            centroids[i] -= np.dot(centroids[i], centroids[j]) * centroids[j]
        centroids[i] /= np.linalg.norm(centroids[i])

    noise = rng.standard_normal((c, p, n)) * (spec.spread / np.sqrt(n))
    tokens = centroids[:, None, :] + noise
    tokens /= np.linalg.norm(tokens, axis=2, keepdims=True)
    seq = TokenSequence(tokens.reshape(c * p, n).astype(np.float32))
    return seq, spec.labels


def write_labels(path, labels: np.ndarray) -> None:
    """One integer label per line."""
    np.savetxt(path, np.asarray(labels, dtype=np.int64), fmt="%d")


def read_labels(path) -> np.ndarray:
    return np.loadtxt(path, dtype=np.int64, ndmin=1)
