// Payload shapes of the /v1 session API, mirrored field for field.
// The client renders these; it never recomputes truth values locally.

export type Truth = "true" | "false" | "undefined";
export type BehaviorKind = "good" | "bad" | "dontCare";
export type Value = number | boolean | number[];
export type Valuation = Record<string, Value>;

export interface WitnessJson {
  input: Valuation;
  output?: Valuation;
}

export interface BasicActionJson {
  op: "basic";
  kind: "skip" | "weaken" | "strengthen" | "reviseImpl" | "makeWellDefined";
  target?: "P" | "Q";
  witness?: WitnessJson;
  note?: string;
}

export interface CompositeActionJson {
  op: "and" | "or";
  parts: ActionJson[];
}

export type ActionJson = BasicActionJson | CompositeActionJson;

export interface VerdictJson {
  behaviorIndex: number;
  kind: BehaviorKind;
  phase: "pre" | "post";
  action: ActionJson;
  pTruth?: Truth;
  pFault?: string;
  requiredP?: boolean;
  qTruth?: Truth;
  qFault?: string;
  requiredQ?: boolean;
  g?: boolean;
  gSource?: "behaviors" | "oracle";
  execOutput?: Valuation;
  execNote?: string;
  warnings?: string[];
  rendered: string;
}

export interface OracleQueryJson {
  behaviorIndex: number;
  input: Valuation;
  output: Valuation;
  prompt: string;
}

export interface DoneJson {
  done: true;
  behaviorCount: number;
}

export type StepResult =
  | ({ type: "verdict" } & VerdictJson)
  | ({ type: "oracleQuery" } & OracleQueryJson)
  | ({ type: "done" } & DoneJson);

export interface DiagnosticJson {
  severity: "error" | "warning";
  message: string;
  loc: { line: number; col: number } | null;
}

export interface SettingsJson {
  stepBudget: number;
  depthBudget: number;
}

export interface Panes {
  pre: string;
  post: string;
  body: string;
  behaviors: string;
}

/** A step pause as it appears in the event log (no `type` tag there). */
export type LoggedStepResult = VerdictJson | { query: OracleQueryJson } | DoneJson;

export type EventJson =
  | { kind: "created"; source: string }
  | { kind: "step"; result: LoggedStepResult }
  | { kind: "oracle"; answer: boolean; result: VerdictJson }
  | { kind: "choice"; behaviorIndex: number; branch: number; chosen: string }
  | { kind: "edit"; editKind: string; text: string }
  | { kind: "restart" };

export interface SessionState {
  id: string;
  source: string;
  panes: Panes;
  entry: string;
  cursor: number;
  phase: "pre" | "post";
  specOnly: boolean;
  behaviorCount: number;
  done: boolean;
  pendingQuery: OracleQueryJson | null;
  latestVerdict: VerdictJson | null;
  choiceOpen: boolean;
  settings: SettingsJson;
  warnings: string[];
  logTail: EventJson[];
}

export interface WitnessBehaviorJson {
  kind: BehaviorKind;
  input: Valuation;
  output: Valuation;
}

export interface AccuracyReportJson {
  verdict: string;
  underCount: number;
  overCount: number;
  undefinedCount: number;
  checkedCount: number;
  witnessCap: number;
  truncated: boolean;
  underWitnesses: WitnessBehaviorJson[];
  overWitnesses: WitnessBehaviorJson[];
  undefinedWitnesses: WitnessBehaviorJson[];
}

export type EditKind =
  | "pre"
  | "post"
  | "body"
  | "behaviors-append"
  | "full-source";

export interface EditResponse {
  ok: boolean;
  diagnostics: DiagnosticJson[];
  state: SessionState;
}

export interface StepResponse {
  result: StepResult;
  state: SessionState;
}

export interface ChoiceResponse {
  chosen: string;
  state: SessionState;
}

export interface CreateResponse {
  id: string;
  state: SessionState;
}

export interface ApiErrorBody {
  error: string;
  diagnostics?: DiagnosticJson[];
  count?: number;
  cap?: number;
}

export interface DomainJson {
  vars: Record<string, unknown>;
  filter?: string;
  cap?: number;
  labels?: { source: string; name?: string };
}
