"""Single-file binary model format.

Layout (all integers little-endian):

    offset  size  field
    0       8     magic ``b"PLSBST01"``
    8       4     u32 format major version (readers reject a different major)
    12      4     u32 format minor version
    16      8     u64 header length L
    24      L     header JSON (UTF-8): config, optional run-config echo,
                  schema as [name, width] pairs, schema fingerprint,
                  n_features, n_trees, base_score, learning_rate, has_stats
    ...           stats block, iff has_stats:
                      u64 n_columns, f64[n_columns] mean,
                      f64[n_columns] std, u64 n_samples
    ...           trees block:
                      u64 n_trees, then per tree:
                          u64 n_nodes, then n_nodes pre-order nodes:
                              u8 kind (0 = leaf, 1 = internal)
                              leaf:     f64 weight
                              internal: u32 feature, f64 threshold, f64 gain
    end-32  32    SHA-256 of every preceding byte

Floats are stored as raw IEEE-754 doubles, so save -> load -> predict is
bit-identical to the in-memory model.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

from ..errors import CorruptModel, VersionMismatch
from ..preprocessing import StandardizationStats
from ..schema import FeatureSchema
from .config import TrainConfig
from .tree import Internal, Leaf, TreeNode, iter_nodes
from .training import TreeEnsemble

MAGIC = b"PLSBST01"
FORMAT_MAJOR = 1
FORMAT_MINOR = 0
_CHECKSUM_LEN = 32


def _pack_tree(buf: bytearray, root: TreeNode) -> None:
    nodes = list(iter_nodes(root))
    buf += struct.pack("<Q", len(nodes))
    for node in nodes:
        if isinstance(node, Leaf):
            buf += struct.pack("<Bd", 0, node.weight)
        else:
            buf += struct.pack("<BIdd", 1, node.feature, node.threshold, node.gain)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise CorruptModel("file is truncated")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def _read_tree(r: _Reader) -> TreeNode:
    (n_nodes,) = r.unpack("<Q")
    if n_nodes < 1:
        raise CorruptModel("tree with zero nodes")
    consumed = 0

    def read_node() -> TreeNode:
        nonlocal consumed
        consumed += 1
        if consumed > n_nodes:
            raise CorruptModel("tree node count does not match structure")
        (kind,) = r.unpack("<B")
        if kind == 0:
            (weight,) = r.unpack("<d")
            return Leaf(weight=weight)
        if kind == 1:
            feature, threshold, gain = r.unpack("<Idd")
            left = read_node()
            right = read_node()
            return Internal(
                feature=feature, threshold=threshold, gain=gain,
                left=left, right=right,
            )
        raise CorruptModel(f"unknown node kind {kind}")

    root = read_node()
    if consumed != n_nodes:
        raise CorruptModel("tree node count does not match structure")
    return root


def save_model(
    path: str | Path,
    ensemble: TreeEnsemble,
    extra: dict | None = None,
) -> None:
    """Write the ensemble (with embedded stats/schema) to one file.

    ``extra`` is echoed verbatim into the header JSON under
    ``run_config`` (used by the CLI to embed the effective run config).
    """
    header = {
        "config": ensemble.config.to_dict(),
        "run_config": extra,
        "schema": (
            [list(pair) for pair in ensemble.input_schema.categories]
            if ensemble.input_schema is not None else None
        ),
        "schema_fingerprint": ensemble.fingerprint(),
        "n_features": ensemble.n_features,
        "n_trees": ensemble.n_trees,
        "base_score": ensemble.base_score,
        "learning_rate": ensemble.learning_rate,
        "has_stats": ensemble.stats is not None,
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")

    buf = bytearray()
    buf += MAGIC
    buf += struct.pack("<II", FORMAT_MAJOR, FORMAT_MINOR)
    buf += struct.pack("<Q", len(header_bytes))
    buf += header_bytes
    if ensemble.stats is not None:
        stats = ensemble.stats
        buf += struct.pack("<Q", stats.n_columns)
        buf += np.ascontiguousarray(stats.mean, dtype="<f8").tobytes()
        buf += np.ascontiguousarray(stats.std, dtype="<f8").tobytes()
        buf += struct.pack("<Q", stats.n_samples)
    buf += struct.pack("<Q", ensemble.n_trees)
    for tree in ensemble.trees:
        _pack_tree(buf, tree)
    buf += hashlib.sha256(bytes(buf)).digest()
    Path(path).write_bytes(bytes(buf))


def load_model_with_header(path: str | Path) -> tuple[TreeEnsemble, dict]:
    """Read a model file back; returns the ensemble and the header dict."""
    data = Path(path).read_bytes()
    if len(data) < len(MAGIC) + 8 + 8 + _CHECKSUM_LEN:
        raise CorruptModel("file is truncated")
    body, checksum = data[:-_CHECKSUM_LEN], data[-_CHECKSUM_LEN:]
    if hashlib.sha256(body).digest() != checksum:
        raise CorruptModel("checksum mismatch")

    r = _Reader(body)
    if r.take(len(MAGIC)) != MAGIC:
        raise CorruptModel("bad magic; not a pulseboost model file")
    major, _minor = r.unpack("<II")
    if major != FORMAT_MAJOR:
        raise VersionMismatch(
            f"model format major version {major}, reader supports {FORMAT_MAJOR}"
        )
    (header_len,) = r.unpack("<Q")
    try:
        header = json.loads(r.take(header_len).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptModel(f"malformed header: {exc}") from exc

    try:
        config = TrainConfig.from_dict(header["config"])
        schema = (
            FeatureSchema(tuple((n, w) for n, w in header["schema"]))
            if header.get("schema") else None
        )
        stats = None
        if header["has_stats"]:
            (n_cols,) = r.unpack("<Q")
            mean = np.frombuffer(r.take(8 * n_cols), dtype="<f8").copy()
            std = np.frombuffer(r.take(8 * n_cols), dtype="<f8").copy()
            (n_samples,) = r.unpack("<Q")
            stats = StandardizationStats(mean=mean, std=std, n_samples=n_samples)
        (n_trees,) = r.unpack("<Q")
        trees = tuple(_read_tree(r) for _ in range(n_trees))
        ensemble = TreeEnsemble(
            trees=trees,
            learning_rate=float(header["learning_rate"]),
            base_score=float(header["base_score"]),
            n_features=int(header["n_features"]),
            config=config,
            input_schema=schema,
            stats=stats,
        )
    except CorruptModel:
        raise
    except (KeyError, TypeError, ValueError, struct.error, RecursionError) as exc:
        raise CorruptModel(f"malformed model body: {exc}") from exc
    if r.pos != len(body):
        raise CorruptModel("trailing bytes after trees block")
    if header.get("schema_fingerprint") != ensemble.fingerprint():
        raise CorruptModel("schema fingerprint does not match stored schema")
    return ensemble, header


def load_model(path: str | Path) -> TreeEnsemble:
    ensemble, _ = load_model_with_header(path)
    return ensemble
