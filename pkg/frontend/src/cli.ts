#!/usr/bin/env node
/**
 * Command line front end: replay one iseq script against an IPASIR library.
 *
 * Exit codes: 0 success, 2 unreadable or malformed script, 4 any step
 * reported UNKNOWN, 5 backend problems (load failure, missing symbol,
 * unexpected solver behavior, qbf input), 64 usage errors.
 */

import { existsSync, readFileSync, realpathSync, writeFileSync } from "node:fs";
import { delimiter, isAbsolute, join } from "node:path";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { MalformedScriptError, UnsupportedKindError, parseScript } from "./script.js";
import { BackendFailureError, formatReport, replayScript } from "./replay.js";
import { LoadFailureError, MissingSymbolError, loadSolver } from "./ipasir.js";

export const SOLVER_PATH_ENV = "ISEQ_SOLVER_PATH";

const USAGE = `usage: iseq-ipasir --library <solver.so> [options] <script.iseq>

options:
  -l, --library <path>   IPASIR shared library; bare names are searched in
                         the directories of \$${SOLVER_PATH_ENV}
      --timeout-ms <n>   per-solve wall clock budget in milliseconds
  -o, --output <file>    report file (default stdout)
  -h, --help             show this message
`;

export interface CliIo {
  stdout(text: string): void;
  stderr(text: string): void;
}

function resolveLibrary(spec: string): string {
  if (isAbsolute(spec) || existsSync(spec)) return spec;
  for (const directory of (process.env[SOLVER_PATH_ENV] ?? "").split(delimiter)) {
    if (directory && existsSync(join(directory, spec))) return join(directory, spec);
  }
  return spec;
}

export function run(argv: readonly string[], io: CliIo): number {
  let args;
  try {
    args = parseArgs({
      args: [...argv],
      allowPositionals: true,
      options: {
        library: { type: "string", short: "l" },
        "timeout-ms": { type: "string" },
        output: { type: "string", short: "o" },
        help: { type: "boolean", short: "h" },
      },
    });
  } catch (exc) {
    io.stderr(`error: ${(exc as Error).message}\n${USAGE}`);
    return 64;
  }
  if (args.values.help) {
    io.stdout(USAGE);
    return 0;
  }
  if (args.positionals.length !== 1 || !args.values.library) {
    io.stderr(USAGE);
    return 64;
  }
  let timeoutMs: number | undefined;
  if (args.values["timeout-ms"] !== undefined) {
    timeoutMs = Number(args.values["timeout-ms"]);
    if (!Number.isFinite(timeoutMs) || timeoutMs < 0) {
      io.stderr(`error: --timeout-ms must be a nonnegative number\n`);
      return 64;
    }
  }

  const scriptPath = args.positionals[0]!;
  let script;
  try {
    script = parseScript(readFileSync(scriptPath));
  } catch (exc) {
    if (exc instanceof UnsupportedKindError) {
      io.stderr(`error: ${scriptPath}: ${exc.message}\n`);
      return 5;
    }
    if (exc instanceof MalformedScriptError) {
      io.stderr(`error: ${scriptPath}: ${exc.message}\n`);
      return 2;
    }
    io.stderr(`error: ${(exc as Error).message}\n`);
    return 2;
  }

  let session;
  let signature: string;
  try {
    const solver = loadSolver(resolveLibrary(args.values.library));
    signature = solver.signature;
    session = solver.session();
  } catch (exc) {
    if (exc instanceof LoadFailureError || exc instanceof MissingSymbolError) {
      io.stderr(`error: ${exc.message}\n`);
      return 5;
    }
    throw exc;
  }

  try {
    io.stderr(`solver signature: ${signature}\n`);
    const results = replayScript(script, session, timeoutMs === undefined ? {} : { timeoutMs });
    const report = formatReport(results);
    if (args.values.output !== undefined) {
      writeFileSync(args.values.output, report);
    } else {
      io.stdout(report);
    }
    return results.some((r) => r.status === "UNKNOWN") ? 4 : 0;
  } catch (exc) {
    if (exc instanceof BackendFailureError) {
      io.stderr(`error: ${exc.message}\n`);
      return 5;
    }
    throw exc;
  } finally {
    session.close();
  }
}

export function main(): void {
  const code = run(process.argv.slice(2), {
    stdout: (text) => process.stdout.write(text),
    stderr: (text) => process.stderr.write(text),
  });
  process.exitCode = code;
}

// bin stubs are symlinks, so compare against the resolved module path
if (process.argv[1]) {
  let invoked = process.argv[1];
  try {
    invoked = realpathSync(invoked);
  } catch {
    // keep the raw path; the comparison below just fails to match
  }
  if (import.meta.url === pathToFileURL(invoked).href) main();
}
