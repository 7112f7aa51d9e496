/** Shared test plumbing: native fixture builds, the reference CLI, corpora. */

import { execFileSync, spawnSync } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import type { Clause } from "../src/script.js";

export const NATIVE_DIR = fileURLToPath(new URL("../native", import.meta.url));
export const DATA_DIR = fileURLToPath(new URL("./data", import.meta.url));

const built = new Map<string, string>();
let buildDir: string | null = null;

/** Compile native/<name>.c into a shared library once per process. */
export function compileNative(name: string): string {
  const cached = built.get(name);
  if (cached) return cached;
  buildDir ??= mkdtempSync(join(tmpdir(), "iseq-ipasir-native-"));
  const out = join(buildDir, `${name}.so`);
  execFileSync("cc", ["-shared", "-fPIC", "-O2", "-o", out, join(NATIVE_DIR, `${name}.c`)]);
  built.set(name, out);
  return out;
}

export interface CliResult {
  status: number;
  stdout: string;
  stderr: string;
}

/** The analyzer/replayer CLI this adapter is the counterpart of. */
export function referenceCli(args: string[]): CliResult {
  const proc = spawnSync("python3", ["-m", "iseq.cli", ...args], { encoding: "utf8" });
  if (proc.error) throw proc.error;
  return { status: proc.status ?? -1, stdout: proc.stdout, stderr: proc.stderr };
}

export function newTempDir(label: string): string {
  return mkdtempSync(join(tmpdir(), `iseq-ipasir-${label}-`));
}

export function writeDimacs(path: string, maxVar: number, clauses: readonly Clause[]): void {
  const lines = [`p cnf ${maxVar} ${clauses.length}`];
  for (const clause of clauses) lines.push(clause.join(" ") + " 0");
  writeFileSync(path, lines.join("\n") + "\n");
}

/** Step statuses from a replay report, verified against its summary line. */
export function reportStatuses(report: string): string[] {
  const statuses: string[] = [];
  const lines = report.trimEnd().split("\n");
  const summary = lines.pop();
  lines.forEach((line, i) => {
    const m = /^step (\d+) (SAT|UNSAT|UNKNOWN) (\d+)$/.exec(line);
    if (!m || Number(m[1]) !== i + 1) throw new Error(`bad report line: '${line}'`);
    statuses.push(m[2]!);
  });
  const counts = { SAT: 0, UNSAT: 0, UNKNOWN: 0 };
  for (const s of statuses) counts[s as keyof typeof counts]++;
  const expected = `summary steps=${statuses.length} sat=${counts.SAT} unsat=${counts.UNSAT} unknown=${counts.UNKNOWN}`;
  if (!summary?.startsWith(expected)) {
    throw new Error(`summary '${summary}' does not match step lines`);
  }
  return statuses;
}

// Deterministic RNG so corpus failures reproduce exactly.
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function randInt(rng: () => number, lo: number, hi: number): number {
  return lo + Math.floor(rng() * (hi - lo + 1));
}

/**
 * A desk-scale CNF sequence: 2..8 steps over <= 10 variables, <= 30 clauses
 * per step, drawn from a shared pool so clauses persist, vanish and come
 * back across steps.  Complementary unit pairs get planted occasionally to
 * make some steps unsatisfiable.
 */
export function randomCnfSequence(rng: () => number): { maxVar: number; steps: Clause[][] } {
  const maxVar = randInt(rng, 3, 10);
  const stepCount = randInt(rng, 2, 8);
  const poolSize = randInt(rng, 8, 30);

  const pool: Clause[] = [];
  const seen = new Set<string>();
  while (pool.length < poolSize) {
    const width = randInt(rng, 1, 3);
    const lits = new Map<number, number>();
    for (let i = 0; i < width; i++) {
      const variable = randInt(rng, 1, maxVar);
      if (!lits.has(variable)) lits.set(variable, rng() < 0.5 ? variable : -variable);
    }
    const clause = [...lits.values()].sort((a, b) => Math.abs(a) - Math.abs(b));
    const key = clause.join(" ");
    if (!seen.has(key)) {
      seen.add(key);
      pool.push(clause);
    }
  }
  if (rng() < 0.4) {
    const variable = randInt(rng, 1, maxVar);
    pool.push([variable], [-variable]);
  }

  const steps: Clause[][] = [];
  for (let s = 0; s < stepCount; s++) {
    const chosen = pool.filter(() => rng() < 0.6);
    if (chosen.length === 0) chosen.push(pool[randInt(rng, 0, pool.length - 1)]!);
    steps.push(chosen.slice(0, 30));
  }
  return { maxVar, steps };
}
