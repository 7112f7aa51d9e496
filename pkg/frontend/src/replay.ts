/**
 * Selector-variable replay of instruction scripts over assumption-only
 * solver sessions.
 *
 * IPASIR solvers have no clause stack, so pushed frames are emulated: every
 * clause of a frame is extended with a fresh selector variable s, each solve
 * assumes -s for every open frame, and popping adds the unit clause {s},
 * which permanently satisfies (retires) the frame's clauses.  Selector ids
 * start right above the script's declared max variable and are never reused.
 */

import type { Clause, InstructionScript, ScriptStep } from "./script.js";
import { normalizeClause } from "./script.js";

export type SolveStatus = "SAT" | "UNSAT" | "UNKNOWN";

export interface SolveResult {
  readonly stepIndex: number;
  readonly status: SolveStatus;
  readonly elapsedMs: number;
}

export class BackendFailureError extends Error {
  readonly stepIndex: number;

  constructor(stepIndex: number, message: string) {
    super(`step ${stepIndex}: ${message}`);
    this.name = "BackendFailureError";
    this.stepIndex = stepIndex;
  }
}

/**
 * One incremental solving session; a replay owns it exclusively.  Structural
 * so the tests can drive the replayer with scripted fakes.
 */
export interface SolverSession {
  addClause(clause: Clause): void;
  assume(literal: number): void;
  solve(): SolveStatus;
  /** Wall-clock deadline (performance.now() ms) for the next solve, if any. */
  setDeadline?(deadlineMs: number | null): void;
  close(): void;
}

/** Bookkeeping for the emulated stack. */
export interface SelectorState {
  nextSelector: number;
  openFrames: number[];
  retired: number[];
}

export function newSelectorState(nextSelector: number): SelectorState {
  if (nextSelector < 1) throw new RangeError("selectors must be positive variable ids");
  return { nextSelector, openFrames: [], retired: [] };
}

export type BackendCall =
  | { op: "add"; clause: Clause }
  | { op: "assume"; literal: number }
  | { op: "solve" };

/**
 * Compile one step into raw backend calls, advancing the selector state.
 * Every step allocates a selector for its frame even when the frame is
 * empty, mirroring what a native push would do.
 */
export function emulatePushPop(state: SelectorState, step: ScriptStep): BackendCall[] {
  const calls: BackendCall[] = [];
  if (step.pop) {
    const selector = state.openFrames.pop();
    if (selector === undefined) throw new RangeError("pop with no open frame");
    state.retired.push(selector);
    calls.push({ op: "add", clause: [selector] });
  }
  for (const clause of step.add) calls.push({ op: "add", clause });
  const selector = state.nextSelector++;
  state.openFrames.push(selector);
  for (const clause of step.push) {
    calls.push({ op: "add", clause: normalizeClause([...clause, selector]) });
  }
  if (step.solve) {
    for (const open of state.openFrames) calls.push({ op: "assume", literal: -open });
    calls.push({ op: "solve" });
  }
  return calls;
}

const STATUSES: readonly string[] = ["SAT", "UNSAT", "UNKNOWN"];

function timedSolve(
  session: SolverSession,
  stepIndex: number,
  deadline: number | null,
): SolveResult {
  session.setDeadline?.(deadline);
  const start = performance.now();
  let status: SolveStatus;
  try {
    status = session.solve();
  } catch (exc) {
    if (exc instanceof BackendFailureError) throw exc;
    throw new BackendFailureError(stepIndex, `backend raised ${(exc as Error).message}`);
  }
  const elapsedMs = performance.now() - start;
  if (!STATUSES.includes(status)) {
    throw new BackendFailureError(stepIndex, `backend returned '${status}'`);
  }
  return { stepIndex, status, elapsedMs };
}

/**
 * Drive a session through the whole script; one result per solved step.
 * Session exceptions come back as BackendFailureError carrying the step
 * index.  A timeout budget applies to each solve separately; an expired
 * solve reports UNKNOWN.
 */
export function replayScript(
  script: InstructionScript,
  session: SolverSession,
  options: { timeoutMs?: number } = {},
): SolveResult[] {
  const results: SolveResult[] = [];
  const state = newSelectorState(script.maxVar + 1);
  script.steps.forEach((step, i) => {
    const index = i + 1;
    const deadline = options.timeoutMs !== undefined ? performance.now() + options.timeoutMs : null;
    for (const call of emulatePushPop(state, step)) {
      try {
        if (call.op === "add") session.addClause(call.clause);
        else if (call.op === "assume") session.assume(call.literal);
        else results.push(timedSolve(session, index, deadline));
      } catch (exc) {
        if (exc instanceof BackendFailureError) throw exc;
        throw new BackendFailureError(index, `backend raised ${(exc as Error).message}`);
      }
    }
  });
  return results;
}

/** The textual replay report: one line per step plus a summary line. */
export function formatReport(results: readonly SolveResult[]): string {
  const lines = results.map((r) => `step ${r.stepIndex} ${r.status} ${Math.round(r.elapsedMs)}`);
  const counts = { SAT: 0, UNSAT: 0, UNKNOWN: 0 };
  let totalMs = 0;
  for (const r of results) {
    counts[r.status]++;
    totalMs += r.elapsedMs;
  }
  lines.push(
    `summary steps=${results.length} sat=${counts.SAT} unsat=${counts.UNSAT} ` +
      `unknown=${counts.UNKNOWN} total-ms=${Math.round(totalMs)}`,
  );
  return lines.join("\n") + "\n";
}
