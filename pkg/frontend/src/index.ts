export type { Clause, InstructionScript, ScriptStep } from "./script.js";
export {
  MalformedScriptError,
  UnsupportedKindError,
  compareClauses,
  makeScript,
  makeStep,
  normalizeClause,
  parseScript,
  serializeScript,
} from "./script.js";
export type {
  BackendCall,
  SelectorState,
  SolveResult,
  SolveStatus,
  SolverSession,
} from "./replay.js";
export {
  BackendFailureError,
  emulatePushPop,
  formatReport,
  newSelectorState,
  replayScript,
} from "./replay.js";
export type { IpasirSymbol } from "./ipasir.js";
export {
  IpasirSession,
  LoadFailureError,
  LoadedSolver,
  MissingSymbolError,
  REQUIRED_SYMBOLS,
  loadSolver,
} from "./ipasir.js";
export { SOLVER_PATH_ENV, run } from "./cli.js";
