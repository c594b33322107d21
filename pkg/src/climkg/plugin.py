"""Line-delimited JSON subprocess protocol for external models.

A plug-in is any executable that reads one JSON object per line on stdin
and writes one JSON object per line on stdout. The classifier protocol is
{"text": ...} -> {"name": ..., "confidence": ...}; the embedder protocol
is {"text": ...} -> {"vector": [384 floats]}. Protocol violations and
timeouts make the caller fall back to the builtin provider.
"""

from __future__ import annotations

import json
import logging
import shlex
import subprocess

import numpy as np

from .embedding import EMBEDDING_DIM, HashEmbedder

log = logging.getLogger(__name__)


class PluginError(Exception):
    pass


class LinePlugin:
    """One spawned subprocess, one JSON request/response per call."""

    def __init__(self, command: str, timeout: float = 30.0):
        self.command = command
        self.timeout = timeout
        self._proc: subprocess.Popen | None = None

    def _ensure(self) -> subprocess.Popen:
        if self._proc is None or self._proc.poll() is not None:
            self._proc = subprocess.Popen(
                shlex.split(self.command),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        return self._proc

    def call(self, request: dict) -> dict:
        try:
            proc = self._ensure()
            proc.stdin.write(json.dumps(request) + "\n")
            proc.stdin.flush()
            line = proc.stdout.readline()
            if not line:
                raise PluginError("plug-in closed stdout")
            return json.loads(line)
        except PluginError:
            raise
        except Exception as exc:
            raise PluginError(f"plug-in failure: {exc}") from exc

    def close(self):
        if self._proc is not None and self._proc.poll() is None:
            self._proc.terminate()
            try:
                self._proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self._proc.kill()
        self._proc = None


class SubprocessEmbedder:
    """Embedding provider backed by an external encoder subprocess."""

    dim = EMBEDDING_DIM

    def __init__(self, command: str):
        self._plugin = LinePlugin(command)
        self._fallback = HashEmbedder()

    def embed_text(self, text: str) -> np.ndarray:
        try:
            reply = self._plugin.call({"text": text})
            vec = np.asarray(reply["vector"], dtype=float)
            if vec.shape != (EMBEDDING_DIM,) or not np.all(np.isfinite(vec)):
                raise PluginError(f"bad vector shape {vec.shape}")
            return vec
        except (PluginError, KeyError, TypeError, ValueError) as exc:
            log.warning("embedding plug-in failed (%s); using hash embedder", exc)
            return self._fallback.embed_text(text)

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        return [self.embed_text(t) for t in texts]
