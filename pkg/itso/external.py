"""
External Evaluator
Line protocol to a black-box objective running in its own process: one line of
space-separated coordinates in, one line holding a single value out
"""

import logging
import math
import queue
import shlex
import subprocess
import threading
from typing import List, Optional, Union

import numpy as np

from .exceptions import ConfigError, EvaluatorError

logger = logging.getLogger(__name__)

_EOF = object()


def format_point(x) -> str:
    """Space-separated shortest round-trip decimals"""
    return " ".join(repr(float(v)) for v in np.asarray(x, dtype=float).ravel())


def parse_value(line: str) -> float:
    """Parse one protocol reply; raises ValueError unless it holds exactly one number"""
    fields = line.split()
    if len(fields) != 1:
        raise ValueError(f"expected one value, got {line.strip()!r}")
    return float(fields[0])


class ExternalEvaluator:
    """
    Objective backed by a subprocess speaking the line protocol

    The process is spawned once and serves every evaluation of a run, one
    request in flight at a time. Use as a context manager, or call close().
    """

    def __init__(self, cmd: Union[str, List[str]], timeout_ms: int = 10000):
        if timeout_ms <= 0:
            raise ConfigError("timeout_ms must be positive")
        self.args = shlex.split(cmd) if isinstance(cmd, str) else list(cmd)
        if not self.args:
            raise ConfigError("empty evaluator command")
        self.timeout = timeout_ms / 1000.0
        self.evaluations = 0
        self._lines: "queue.Queue" = queue.Queue()

        logger.info(f"Starting evaluator: {' '.join(self.args)}")
        self.process = subprocess.Popen(
            self.args,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )
        self._reader = threading.Thread(target=self._pump, name="evaluator-reader", daemon=True)
        self._reader.start()

    def _pump(self) -> None:
        for line in self.process.stdout:
            self._lines.put(line)
        self._lines.put(_EOF)

    def __call__(self, x) -> float:
        self.evaluations += 1
        index = self.evaluations
        try:
            self.process.stdin.write(format_point(x) + "\n")
            self.process.stdin.flush()
        except (BrokenPipeError, OSError, ValueError) as e:
            raise EvaluatorError(index, f"evaluator input closed ({e})") from e

        try:
            line = self._lines.get(timeout=self.timeout)
        except queue.Empty:
            self._kill()
            raise EvaluatorError(index, f"no reply within {self.timeout * 1000:.0f} ms")

        if line is _EOF:
            code = self.process.wait()
            raise EvaluatorError(index, f"evaluator exited early with status {code}")
        try:
            value = parse_value(line)
        except ValueError as e:
            raise EvaluatorError(index, f"non-numeric reply {line.strip()!r}") from e
        if math.isnan(value):
            raise EvaluatorError(index, "evaluator returned NaN")
        return value

    def _kill(self) -> None:
        if self.process.poll() is None:
            self.process.kill()
            self.process.wait()

    def close(self, wait_s: Optional[float] = 5.0) -> int:
        """Close the evaluator's input and wait for it to exit"""
        if self.process.stdin and not self.process.stdin.closed:
            try:
                self.process.stdin.close()
            except OSError:
                pass
        try:
            code = self.process.wait(timeout=wait_s)
        except subprocess.TimeoutExpired:
            logger.warning("Evaluator did not exit after its input closed; killing it")
            self._kill()
            code = self.process.returncode
        logger.info(f"Evaluator finished after {self.evaluations} evaluations (status {code})")
        return code

    def __enter__(self) -> "ExternalEvaluator":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if exc_type is None:
            self.close()
        else:
            self._kill()
