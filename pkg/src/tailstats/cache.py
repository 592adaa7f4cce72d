"""Persistent eigenvalue cache.

File layout (all integers little endian):

    8 bytes   magic b"TSEIGCAC"
    uint32    format version
    uint32    length H of the header text
    H bytes   UTF-8 JSON: ensemble spec, master seed, trial count, record length, stream, method
    records   trials x record_length float64 (little endian), one sorted spectrum per trial

A header that differs from the request in any field means the file is
ignored with a ``CacheMismatch`` warning and regenerated.
"""
from __future__ import annotations

import hashlib
import json
import os
import struct
import warnings
from pathlib import Path

import numpy as np

from .ensembles import EnsembleSpec

__all__ = ["CacheMismatch", "EigenCache", "MAGIC", "FORMAT_VERSION"]

MAGIC = b"TSEIGCAC"
FORMAT_VERSION = 1
_FMT = "<II"


class CacheMismatch(UserWarning):
    """A cache file exists but was written for a different request."""


class EigenCache:
    """Spectra of ``trials`` draws of one ensemble under one seed and stream."""

    def __init__(self, directory, spec: EnsembleSpec, master_seed: int, trials: int,
                 record_length: int, stream: str, method: str = "dense"):
        self.directory = Path(directory)
        self.header = {
            "spec": spec.as_dict(),
            "master_seed": int(master_seed),
            "trials": int(trials),
            "record_length": int(record_length),
            "stream": stream,
            "method": method,
        }

    @property
    def path(self) -> Path:
        # one file per (stream, method, ensemble); seed and trial count live in
        # the header, so a request with other values finds the file and rejects it
        ident = json.dumps([self.header["stream"], self.header["method"], self.header["spec"]],
                           sort_keys=True).encode("utf-8")
        return self.directory / f"{hashlib.sha1(ident).hexdigest()[:20]}.eig"

    def _header_bytes(self) -> bytes:
        return json.dumps(self.header, sort_keys=True, separators=(",", ":")).encode("utf-8")

    def load(self) -> np.ndarray | None:
        """The cached spectra, or None if absent or mismatched."""
        path = self.path
        if not path.exists():
            return None
        try:
            with open(path, "rb") as fh:
                magic = fh.read(len(MAGIC))
                version, hlen = struct.unpack(_FMT, fh.read(struct.calcsize(_FMT)))
                head = fh.read(hlen)
                body = fh.read()
        except (OSError, struct.error) as exc:
            warnings.warn(f"unreadable cache {path}: {exc}; regenerating", CacheMismatch, stacklevel=2)
            return None
        if magic != MAGIC or version != FORMAT_VERSION or head != self._header_bytes():
            warnings.warn(f"cache header in {path} does not match the request; regenerating",
                          CacheMismatch, stacklevel=2)
            return None
        n = self.header["trials"] * self.header["record_length"]
        if len(body) != 8 * n:
            warnings.warn(f"cache {path} is truncated; regenerating", CacheMismatch, stacklevel=2)
            return None
        data = np.frombuffer(body, dtype="<f8").astype(np.float64)
        return data.reshape(self.header["trials"], self.header["record_length"])

    def store(self, spectra: np.ndarray) -> Path:
        spectra = np.ascontiguousarray(spectra, dtype="<f8")
        expect = (self.header["trials"], self.header["record_length"])
        if spectra.shape != expect:
            raise ValueError(f"spectra shape {spectra.shape} does not match header {expect}")
        self.directory.mkdir(parents=True, exist_ok=True)
        head = self._header_bytes()
        path = self.path
        tmp = path.with_suffix(f".{os.getpid()}.tmp")
        with open(tmp, "wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack(_FMT, FORMAT_VERSION, len(head)))
            fh.write(head)
            fh.write(spectra.tobytes())
        os.replace(tmp, path)
        return path
