/**
 * Dynamic loading of IPASIR-conforming incremental SAT solver libraries.
 *
 * The calling convention is honored bit-exactly: clauses and assumption
 * literals stream in as zero-terminated ints, solve returns 10 for
 * satisfiable, 20 for unsatisfiable and 0 for interrupted.  All entry points
 * are resolved up front, before the solver is touched; the first missing one
 * is reported by name.
 */

import koffi from "koffi";
import type { LibraryHandle } from "koffi";

import type { Clause } from "./script.js";
import { normalizeClause } from "./script.js";
import type { SolveStatus, SolverSession } from "./replay.js";

type NativeFunction = ReturnType<LibraryHandle["func"]>;

export class LoadFailureError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "LoadFailureError";
  }
}

export class MissingSymbolError extends Error {
  readonly symbol: string;

  constructor(symbol: string, path: string) {
    super(`${path}: missing required symbol '${symbol}'`);
    this.name = "MissingSymbolError";
    this.symbol = symbol;
  }
}

export const REQUIRED_SYMBOLS = [
  "ipasir_signature",
  "ipasir_init",
  "ipasir_release",
  "ipasir_add",
  "ipasir_assume",
  "ipasir_solve",
  "ipasir_val",
  "ipasir_failed",
  "ipasir_set_terminate",
] as const;

export type IpasirSymbol = (typeof REQUIRED_SYMBOLS)[number];

// registered once per process; koffi rejects duplicate prototype names
const TERMINATE_PROTO = koffi.proto("int IpasirTerminate(void *data)");

const DECLARATIONS: Record<IpasirSymbol, string> = {
  ipasir_signature: "const char *ipasir_signature(void)",
  ipasir_init: "void *ipasir_init(void)",
  ipasir_release: "void ipasir_release(void *solver)",
  ipasir_add: "void ipasir_add(void *solver, int lit_or_zero)",
  ipasir_assume: "void ipasir_assume(void *solver, int lit)",
  ipasir_solve: "int ipasir_solve(void *solver)",
  ipasir_val: "int ipasir_val(void *solver, int lit)",
  ipasir_failed: "int ipasir_failed(void *solver, int lit)",
  ipasir_set_terminate:
    "void ipasir_set_terminate(void *solver, void *data, IpasirTerminate *terminate)",
};

type EntryPoints = Record<IpasirSymbol, NativeFunction>;

/** A resolved IPASIR library; a factory for sessions. */
export class LoadedSolver {
  readonly path: string;
  readonly signature: string;
  readonly entryPoints: EntryPoints;

  constructor(path: string) {
    this.path = path;
    let lib: LibraryHandle;
    try {
      lib = koffi.load(path);
    } catch (exc) {
      throw new LoadFailureError(`cannot load '${path}': ${(exc as Error).message}`);
    }
    const resolved = {} as EntryPoints;
    for (const symbol of REQUIRED_SYMBOLS) {
      try {
        resolved[symbol] = lib.func(DECLARATIONS[symbol]);
      } catch {
        throw new MissingSymbolError(symbol, path);
      }
    }
    this.entryPoints = resolved;
    this.signature = resolved.ipasir_signature() as string;
  }

  session(): IpasirSession {
    return new IpasirSession(this);
  }
}

export function loadSolver(path: string): LoadedSolver {
  return new LoadedSolver(path);
}

export class IpasirSession implements SolverSession {
  readonly nativePushPop = false;
  readonly prefixOps = false;

  private readonly fns: EntryPoints;
  private readonly handle: unknown;
  private readonly terminate: bigint;
  private deadline: number | null = null;
  private released = false;

  constructor(solver: LoadedSolver) {
    this.fns = solver.entryPoints;
    const handle: unknown = this.fns.ipasir_init();
    if (handle === null) {
      throw new LoadFailureError(`${solver.path}: ipasir_init returned NULL`);
    }
    this.handle = handle;
    // the registration must outlive the solver or the thunk is freed under it
    this.terminate = koffi.register(
      () => (this.deadline !== null && performance.now() >= this.deadline ? 1 : 0),
      koffi.pointer(TERMINATE_PROTO),
    );
    this.fns.ipasir_set_terminate(handle, null, this.terminate);
  }

  setDeadline(deadlineMs: number | null): void {
    this.deadline = deadlineMs;
  }

  addClause(clause: Clause): void {
    for (const literal of normalizeClause(clause)) {
      this.fns.ipasir_add(this.handle, literal);
    }
    this.fns.ipasir_add(this.handle, 0);
  }

  assume(literal: number): void {
    if (literal === 0) throw new RangeError("0 is not a literal");
    this.fns.ipasir_assume(this.handle, literal);
  }

  solve(): SolveStatus {
    // a zero deadline must not even start the search
    if (this.deadline !== null && performance.now() >= this.deadline) {
      this.deadline = null;
      return "UNKNOWN";
    }
    const code = this.fns.ipasir_solve(this.handle) as number;
    this.deadline = null;
    if (code === 10) return "SAT";
    if (code === 20) return "UNSAT";
    if (code === 0) return "UNKNOWN";
    throw new RangeError(`ipasir_solve returned unexpected code ${code}`);
  }

  close(): void {
    if (!this.released) {
      this.released = true;
      this.fns.ipasir_release(this.handle);
      koffi.unregister(this.terminate);
    }
  }
}
