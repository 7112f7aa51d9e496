"""Loading IPASIR-conforming incremental SAT solver shared libraries.

The IPASIR calling convention is honored bit-exactly: clauses and assumption
literals stream in as zero-terminated ints, solve returns 10 for satisfiable,
20 for unsatisfiable and 0 for interrupted.  All entry points are resolved
up front, before the solver is touched; the first missing one is reported by
name.  Such backends have neither native push/pop nor prefix operations, so
the replayer drives them through selector emulation.
"""

from __future__ import annotations

import ctypes
import time
from typing import Optional

from .formula import Clause, normalize_clause
from .replay import SolveStatus, SolverSession

__all__ = [
    "LoadFailureError",
    "MissingSymbolError",
    "REQUIRED_SYMBOLS",
    "LoadedSolver",
    "load_solver",
    "IpasirSession",
]


class LoadFailureError(Exception):
    """The shared library could not be loaded at all."""


class MissingSymbolError(Exception):
    """The library loaded but lacks a required entry point."""

    def __init__(self, symbol: str, path: str):
        self.symbol = symbol
        super().__init__(f"{path}: missing required symbol {symbol!r}")


REQUIRED_SYMBOLS = (
    "ipasir_signature",
    "ipasir_init",
    "ipasir_release",
    "ipasir_add",
    "ipasir_assume",
    "ipasir_solve",
    "ipasir_val",
    "ipasir_failed",
    "ipasir_set_terminate",
)

_TERMINATE_CALLBACK = ctypes.CFUNCTYPE(ctypes.c_int, ctypes.c_void_p)


class LoadedSolver:
    """A resolved IPASIR library; a factory for sessions."""

    def __init__(self, path: str):
        self.path = path
        try:
            self._lib = ctypes.cdll.LoadLibrary(path)
        except OSError as exc:
            raise LoadFailureError(f"cannot load {path!r}: {exc}") from exc
        for symbol in REQUIRED_SYMBOLS:
            if not hasattr(self._lib, symbol):
                raise MissingSymbolError(symbol, path)
        self._lib.ipasir_signature.argtypes = []
        self._lib.ipasir_signature.restype = ctypes.c_char_p
        self._lib.ipasir_init.argtypes = []
        self._lib.ipasir_init.restype = ctypes.c_void_p
        self._lib.ipasir_release.argtypes = [ctypes.c_void_p]
        self._lib.ipasir_release.restype = None
        self._lib.ipasir_add.argtypes = [ctypes.c_void_p, ctypes.c_int]
        self._lib.ipasir_add.restype = None
        self._lib.ipasir_assume.argtypes = [ctypes.c_void_p, ctypes.c_int]
        self._lib.ipasir_assume.restype = None
        self._lib.ipasir_solve.argtypes = [ctypes.c_void_p]
        self._lib.ipasir_solve.restype = ctypes.c_int
        self._lib.ipasir_val.argtypes = [ctypes.c_void_p, ctypes.c_int]
        self._lib.ipasir_val.restype = ctypes.c_int
        self._lib.ipasir_failed.argtypes = [ctypes.c_void_p, ctypes.c_int]
        self._lib.ipasir_failed.restype = ctypes.c_int
        self._lib.ipasir_set_terminate.argtypes = [
            ctypes.c_void_p,
            ctypes.c_void_p,
            _TERMINATE_CALLBACK,
        ]
        self._lib.ipasir_set_terminate.restype = None
        self.signature = self._lib.ipasir_signature().decode("ascii", "replace")

    def session(self) -> "IpasirSession":
        return IpasirSession(self)


def load_solver(path: str) -> LoadedSolver:
    return LoadedSolver(path)


class IpasirSession(SolverSession):
    native_push_pop = False
    prefix_ops = False

    def __init__(self, solver: LoadedSolver):
        self._lib = solver._lib
        self._handle = self._lib.ipasir_init()
        if not self._handle:
            raise LoadFailureError(f"{solver.path}: ipasir_init returned NULL")
        self._deadline: Optional[float] = None
        self._released = False
        # the callback object must outlive the solver or ctypes frees the thunk
        self._terminate = _TERMINATE_CALLBACK(self._should_terminate)
        self._lib.ipasir_set_terminate(self._handle, None, self._terminate)

    def _should_terminate(self, _data) -> int:
        if self._deadline is not None and time.monotonic() >= self._deadline:
            return 1
        return 0

    def set_deadline(self, deadline: Optional[float]) -> None:
        self._deadline = deadline

    def add_clause(self, clause: Clause) -> None:
        for literal in normalize_clause(clause):
            self._lib.ipasir_add(self._handle, literal)
        self._lib.ipasir_add(self._handle, 0)

    def assume(self, literal: int) -> None:
        if literal == 0:
            raise ValueError("0 is not a literal")
        self._lib.ipasir_assume(self._handle, literal)

    def solve(self) -> SolveStatus:
        # a zero deadline must not even start the search
        if self._deadline is not None and time.monotonic() >= self._deadline:
            self._deadline = None
            return SolveStatus.UNKNOWN
        code = self._lib.ipasir_solve(self._handle)
        self._deadline = None
        if code == 10:
            return SolveStatus.SAT
        if code == 20:
            return SolveStatus.UNSAT
        if code == 0:
            return SolveStatus.UNKNOWN
        raise ValueError(f"ipasir_solve returned unexpected code {code}")

    def close(self) -> None:
        if not self._released:
            self._released = True
            self._lib.ipasir_release(self._handle)

    def __enter__(self) -> "IpasirSession":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
