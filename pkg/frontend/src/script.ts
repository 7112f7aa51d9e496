/**
 * Reader and writer for iseq instruction scripts.
 *
 * The format is line oriented ASCII with LF endings: a header
 * `p iseq <sat|qbf> <steps> <max-var>` followed by one block per step:
 *
 *     step <i>
 *     pop                     (every step except the first)
 *     add                     (omitted when there is nothing to add)
 *     <clause> 0
 *     0
 *     push                    (omitted when the volatile frame is empty)
 *     <clause> 0
 *     0
 *     solve
 *     end
 *
 * An omitted push section still means "push an empty frame" at replay time.
 * This package drives plain IPASIR solvers, which have no quantifier prefix
 * operations, so qbf scripts (and the a-set / a-vars instructions that only
 * they may carry) are rejected up front.
 */

export type Clause = readonly number[];

export class MalformedScriptError extends Error {
  readonly line: number;

  constructor(line: number, message: string) {
    super(`line ${line}: ${message}`);
    this.name = "MalformedScriptError";
    this.line = line;
  }
}

/** The script is well formed but needs capabilities IPASIR does not have. */
export class UnsupportedKindError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "UnsupportedKindError";
  }
}

export interface ScriptStep {
  readonly pop: boolean;
  readonly add: readonly Clause[];
  readonly push: readonly Clause[];
  readonly solve: boolean;
}

export interface InstructionScript {
  readonly kind: "sat";
  readonly steps: readonly ScriptStep[];
  /** Declared variable bound; selector numbering starts right above it. */
  readonly maxVar: number;
}

/**
 * Canonical clause form: duplicates dropped, literals sorted by variable id
 * with the positive polarity first.  Tautologies are kept verbatim.
 */
export function normalizeClause(raw: Clause): Clause {
  const seen = new Set<number>();
  const lits: number[] = [];
  for (const lit of raw) {
    if (lit === 0) {
      throw new RangeError("literal 0 is reserved as the clause terminator");
    }
    if (!seen.has(lit)) {
      seen.add(lit);
      lits.push(lit);
    }
  }
  lits.sort((a, b) => Math.abs(a) - Math.abs(b) || Number(a < 0) - Number(b < 0));
  return lits;
}

// deterministic clause ordering: variable id, then polarity, position by position
export function compareClauses(a: Clause, b: Clause): number {
  const n = Math.min(a.length, b.length);
  for (let i = 0; i < n; i++) {
    const la = a[i] as number;
    const lb = b[i] as number;
    const d = Math.abs(la) - Math.abs(lb) || Number(la < 0) - Number(lb < 0);
    if (d !== 0) return d;
  }
  return a.length - b.length;
}

function canonicalSection(clauses: readonly Clause[]): Clause[] {
  const byKey = new Map<string, Clause>();
  for (const raw of clauses) {
    const clause = normalizeClause(raw);
    if (clause.length === 0) {
      throw new RangeError("the empty clause is not representable in a script");
    }
    byKey.set(clause.join(" "), clause);
  }
  return [...byKey.values()].sort(compareClauses);
}

export function makeStep(init: {
  pop: boolean;
  add?: readonly Clause[];
  push?: readonly Clause[];
  solve?: boolean;
}): ScriptStep {
  return {
    pop: init.pop,
    add: canonicalSection(init.add ?? []),
    push: canonicalSection(init.push ?? []),
    solve: init.solve ?? true,
  };
}

function stepMaxVar(step: ScriptStep): number {
  let m = 0;
  for (const clause of [...step.add, ...step.push]) {
    for (const lit of clause) m = Math.max(m, Math.abs(lit));
  }
  return m;
}

export function makeScript(steps: readonly ScriptStep[], maxVar: number): InstructionScript {
  if (steps.length === 0) throw new RangeError("a script needs at least one step");
  if (steps[0]!.pop) throw new RangeError("step 1 must not pop");
  steps.slice(1).forEach((step, i) => {
    if (!step.pop) throw new RangeError(`step ${i + 2} must pop the previous frame`);
  });
  const contentMax = Math.max(0, ...steps.map(stepMaxVar));
  if (maxVar < contentMax) {
    throw new RangeError(`declared max variable ${maxVar} below occurring ${contentMax}`);
  }
  return { kind: "sat", steps: [...steps], maxVar };
}

/** Deterministic text form; value-equal scripts produce identical bytes. */
export function serializeScript(script: InstructionScript): string {
  const lines = [`p iseq ${script.kind} ${script.steps.length} ${script.maxVar}`];
  script.steps.forEach((step, index) => {
    lines.push(`step ${index + 1}`);
    if (step.pop) lines.push("pop");
    for (const [keyword, section] of [["add", step.add], ["push", step.push]] as const) {
      if (section.length > 0) {
        lines.push(keyword);
        for (const clause of section) lines.push(clause.join(" ") + " 0");
        lines.push("0");
      }
    }
    if (step.solve) lines.push("solve");
    lines.push("end");
  });
  return lines.join("\n") + "\n";
}

interface Line {
  no: number;
  tokens: string[];
}

function scriptLines(data: string | Uint8Array): Line[] {
  let text: string;
  if (typeof data === "string") {
    text = data;
  } else {
    for (let i = 0, line = 1; i < data.length; i++) {
      const byte = data[i] as number;
      if (byte >= 0x80) {
        throw new MalformedScriptError(line, `non-ASCII byte 0x${byte.toString(16)}`);
      }
      if (byte === 0x0a) line++;
    }
    text = Buffer.from(data).toString("ascii");
  }
  const out: Line[] = [];
  text.split("\n").forEach((raw, i) => {
    if (typeof data === "string" && /[^\x00-\x7f]/.test(raw)) {
      throw new MalformedScriptError(i + 1, "non-ASCII character");
    }
    const tokens = raw.split(/\s+/).filter((t) => t.length > 0);
    if (tokens.length > 0) out.push({ no: i + 1, tokens });
  });
  return out;
}

function parseClauseLine(line: Line): Clause {
  const lits = line.tokens.map((tok) => {
    const v = Number(tok);
    if (!Number.isInteger(v) || !/^-?\d+$/.test(tok)) {
      throw new MalformedScriptError(line.no, `expected an integer, got '${tok}'`);
    }
    return v;
  });
  if (lits[lits.length - 1] !== 0) {
    throw new MalformedScriptError(line.no, "clause line must end with 0");
  }
  const body = lits.slice(0, -1);
  if (body.length === 0) {
    throw new MalformedScriptError(line.no, "empty clause line (lone 0 ends the section)");
  }
  if (body.includes(0)) {
    throw new MalformedScriptError(line.no, "one clause per line; stray 0 inside the line");
  }
  return normalizeClause(body);
}

// section ranks enforce the fixed order inside a step block
const RANK: Record<string, number> = {
  pop: 0,
  add: 1,
  push: 2,
  "a-set": 3,
  "a-vars": 3,
  solve: 4,
};

export function parseScript(data: string | Uint8Array): InstructionScript {
  const lines = scriptLines(data);
  let pos = 0;

  if (lines.length === 0) throw new MalformedScriptError(1, "empty input");
  const header = lines[pos++]!;
  const fields = header.tokens;
  if (fields.length !== 5 || fields[0] !== "p" || fields[1] !== "iseq") {
    throw new MalformedScriptError(header.no, "expected header 'p iseq <sat|qbf> <steps> <max-var>'");
  }
  if (fields[2] !== "sat" && fields[2] !== "qbf") {
    throw new MalformedScriptError(header.no, `unknown kind '${fields[2]}'`);
  }
  if (fields[2] === "qbf") {
    throw new UnsupportedKindError(
      "qbf scripts need a backend with prefix operations; IPASIR solvers have none",
    );
  }
  if (!/^\d+$/.test(fields[3]!) || !/^\d+$/.test(fields[4]!)) {
    throw new MalformedScriptError(header.no, "step count and max-var must be nonnegative integers");
  }
  const declaredSteps = Number(fields[3]);
  const declaredMax = Number(fields[4]);

  const steps: ScriptStep[] = [];
  let lastNo = header.no;

  while (pos < lines.length) {
    let line = lines[pos++]!;
    const stepIndex = steps.length + 1;
    if (
      line.tokens[0] !== "step" ||
      line.tokens.length !== 2 ||
      String(stepIndex) !== line.tokens[1]
    ) {
      throw new MalformedScriptError(line.no, `expected 'step ${stepIndex}'`);
    }

    let pop = false;
    let solve = false;
    const add: Clause[] = [];
    const push: Clause[] = [];
    let rank = -1;
    let closed = false;
    while (!closed) {
      if (pos >= lines.length) {
        throw new MalformedScriptError(line.no, `step ${stepIndex} not closed by 'end'`);
      }
      line = lines[pos++]!;
      lastNo = line.no;
      const keyword = line.tokens[0]!;
      if (keyword === "end") {
        if (line.tokens.length !== 1) throw new MalformedScriptError(line.no, "junk after 'end'");
        closed = true;
        continue;
      }
      const newRank = RANK[keyword];
      if (newRank === undefined) {
        throw new MalformedScriptError(line.no, `unknown keyword '${keyword}'`);
      }
      if (newRank < rank || (newRank === rank && newRank !== 3)) {
        throw new MalformedScriptError(line.no, `'${keyword}' out of order or repeated`);
      }
      rank = newRank;

      if (keyword === "pop") {
        if (line.tokens.length !== 1) throw new MalformedScriptError(line.no, "junk after 'pop'");
        if (stepIndex === 1) throw new MalformedScriptError(line.no, "step 1 must not pop");
        pop = true;
      } else if (keyword === "add" || keyword === "push") {
        if (line.tokens.length !== 1) {
          throw new MalformedScriptError(line.no, `junk after '${keyword}'`);
        }
        const target = keyword === "add" ? add : push;
        for (;;) {
          if (pos >= lines.length) {
            throw new MalformedScriptError(line.no, `${keyword} section not closed by a lone 0`);
          }
          line = lines[pos++]!;
          lastNo = line.no;
          if (line.tokens.length === 1 && line.tokens[0] === "0") break;
          target.push(parseClauseLine(line));
        }
        if (target.length === 0) {
          throw new MalformedScriptError(line.no, `empty ${keyword} sections are omitted entirely`);
        }
      } else if (keyword === "a-set" || keyword === "a-vars") {
        throw new MalformedScriptError(line.no, "prefix instruction in a sat script");
      } else {
        if (line.tokens.length !== 1) throw new MalformedScriptError(line.no, "junk after 'solve'");
        solve = true;
      }
    }

    if (stepIndex > 1 && !pop) {
      throw new MalformedScriptError(lastNo, `step ${stepIndex} must pop the previous frame`);
    }
    try {
      steps.push(makeStep({ pop, add, push, solve }));
    } catch (exc) {
      throw new MalformedScriptError(lastNo, (exc as Error).message);
    }
  }

  if (steps.length !== declaredSteps) {
    throw new MalformedScriptError(
      steps.length > 0 ? lastNo : 1,
      `header declares ${declaredSteps} steps but ${steps.length} present`,
    );
  }
  try {
    return makeScript(steps, declaredMax);
  } catch (exc) {
    throw new MalformedScriptError(1, (exc as Error).message);
  }
}
