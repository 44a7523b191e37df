/**
 * Pure view-model layer. render() maps a server session state (plus
 * transient client facts like in-flight errors) to a DocumentState that
 * the DOM applier can paint with no further decisions.
 *
 * No semantics are computed here. Truth badges come from the verdict's
 * pTruth/qTruth strings as-is, required values from requiredP/requiredQ,
 * and the one-line summary is the server's `rendered` string verbatim.
 * The only formatting done locally is turning action/witness JSON into
 * display text, and that text is cross-checked against the tail of
 * `rendered`; a mismatch is surfaced as a schema error rather than shown.
 */

import type {
  ActionJson,
  AccuracyReportJson,
  DiagnosticJson,
  EventJson,
  LoggedStepResult,
  SessionState,
  StepResult,
  Truth,
  Valuation,
  Value,
  VerdictJson,
  WitnessJson,
} from "./types.js";

export interface Badge {
  label: "P" | "Q";
  actual: Truth;
  required: "true" | "false" | null;
  fault: string | null;
  /** true when actual matches required; null when no requirement applies */
  ok: boolean | null;
}

export interface ActionNode {
  text: string;
  kind: string;
  /** 1-based branch number when this node is a direct child of an Or,
      matching what the choice endpoint expects */
  branch: number | null;
  children: ActionNode[];
}

export interface VerdictView {
  title: string;
  behaviorIndex: number;
  kind: string;
  phase: string;
  badges: Badge[];
  g: { value: boolean; source: string } | null;
  execOutput: string | null;
  execNote: string | null;
  action: ActionNode;
  rendered: string;
  warnings: string[];
}

export interface OracleView {
  prompt: string;
  behaviorIndex: number;
  input: string;
  output: string;
}

export interface PaneView {
  name: "pre" | "post" | "body" | "behaviors";
  title: string;
  text: string;
}

export interface AccuracyView {
  verdict: string;
  rows: { label: string; count: number }[];
  witnesses: { kind: string; input: string; output: string | null }[];
  truncated: boolean;
  summary: string;
}

export interface DocumentState {
  title: string;
  banner: string;
  progress: string;
  panes: PaneView[];
  verdict: VerdictView | null;
  oracle: OracleView | null;
  done: { behaviorCount: number; message: string } | null;
  choiceOpen: boolean;
  diagnostics: { severity: string; message: string; where: string | null }[];
  accuracy: AccuracyView | null;
  warnings: string[];
  logTail: string[];
  error: string | null;
  /** commands that make sense right now; the DOM disables the rest */
  canStep: boolean;
  canAnswer: boolean;
  canChoose: boolean;
}

/** Client-side facts that live outside the server state. */
export interface ClientContext {
  error?: string | null;
  diagnostics?: DiagnosticJson[];
  accuracy?: AccuracyReportJson | null;
}

export function formatValue(v: Value): string {
  if (typeof v === "boolean") return v ? "true" : "false";
  if (typeof v === "number") return String(v);
  return "{" + v.map(String).join(", ") + "}";
}

export function formatValuation(m: Valuation): string {
  return "{" + Object.entries(m).map(([k, v]) => `${k}=${formatValue(v)}`).join(", ") + "}";
}

export function formatWitness(w: WitnessJson): string {
  if (w.output === undefined) return formatValuation(w.input);
  return `(${formatValuation(w.input)}, ${formatValuation(w.output)})`;
}

function basicText(a: { kind: string; target?: string; witness?: WitnessJson }): string {
  if (a.kind === "skip") return "skip";
  if (a.kind === "reviseImpl") return `reviseImpl(${formatWitness(a.witness!)})`;
  return `${a.kind}(${a.target}, ${formatWitness(a.witness!)})`;
}

export function actionText(a: ActionJson): string {
  if (a.op === "basic") return basicText(a);
  const sep = a.op === "and" ? " AND " : " OR ";
  return a.parts.map(actionText).join(sep);
}

export function actionTree(a: ActionJson): ActionNode {
  if (a.op === "basic") {
    return { text: basicText(a), kind: a.kind, branch: null, children: [] };
  }
  const children = a.parts.map((p, i) => {
    const node = actionTree(p);
    if (a.op === "or") node.branch = i + 1;
    return node;
  });
  return { text: actionText(a), kind: a.op, branch: null, children };
}

function badge(label: "P" | "Q", actual: Truth, required: boolean | null | undefined,
               fault: string | null | undefined): Badge {
  const req = required === undefined || required === null
    ? null
    : required ? "true" as const : "false" as const;
  return {
    label,
    actual,
    required: req,
    fault: fault ?? null,
    ok: req === null ? null : actual === req,
  };
}

export function verdictView(v: VerdictJson): VerdictView {
  const badges: Badge[] = [];
  if (v.pTruth !== undefined) {
    badges.push(badge("P", v.pTruth, v.requiredP, v.pFault));
  }
  if (v.qTruth !== undefined) {
    badges.push(badge("Q", v.qTruth, v.requiredQ, v.qFault));
  }
  return {
    title: `behavior ${v.behaviorIndex + 1} (${v.kind}) ${v.phase}`,
    behaviorIndex: v.behaviorIndex,
    kind: v.kind,
    phase: v.phase,
    badges,
    g: v.g === undefined ? null : { value: v.g, source: v.gSource ?? "" },
    execOutput: v.execOutput === undefined ? null : formatValuation(v.execOutput),
    execNote: v.execNote ?? null,
    action: actionTree(v.action),
    rendered: v.rendered,
    warnings: v.warnings ?? [],
  };
}

/**
 * The rendered line always ends with the action's own text; if our
 * reconstruction of the action JSON disagrees, the payload and this
 * client are out of sync and the view must say so instead of guessing.
 */
export function checkRenderedAgreement(v: VerdictJson): string | null {
  const tail = " -> " + actionText(v.action);
  if (!v.rendered.endsWith(tail)) {
    return `payload mismatch: action ${JSON.stringify(v.action)} does not match "${v.rendered}"`;
  }
  return null;
}

function locText(d: DiagnosticJson): string | null {
  return d.loc ? `line ${d.loc.line}, col ${d.loc.col}` : null;
}

function loggedStepLine(r: LoggedStepResult): string {
  if ("query" in r) return r.query.prompt;
  if ("rendered" in r) return r.rendered;
  return `done: ${r.behaviorCount} behaviors`;
}

export function eventLine(e: EventJson): string {
  switch (e.kind) {
    case "created":
      return "created";
    case "step":
      return loggedStepLine(e.result);
    case "oracle":
      return `oracle ${e.answer ? "yes" : "no"}: ${e.result.rendered}`;
    case "choice":
      return `chose: ${e.chosen}`;
    case "edit":
      return `edited ${e.editKind}`;
    case "restart":
      return "restarted";
  }
}

export function accuracyView(r: AccuracyReportJson): AccuracyView {
  const witnesses = [
    ...r.underWitnesses.map((w) => ({
      kind: w.kind, input: formatValuation(w.input),
      output: w.output ? formatValuation(w.output) : null,
    })),
    ...r.overWitnesses.map((w) => ({
      kind: w.kind, input: formatValuation(w.input),
      output: w.output ? formatValuation(w.output) : null,
    })),
    ...r.undefinedWitnesses.map((w) => ({
      kind: w.kind, input: formatValuation(w.input),
      output: w.output ? formatValuation(w.output) : null,
    })),
  ];
  return {
    verdict: r.verdict,
    rows: [
      { label: "checked", count: r.checkedCount },
      { label: "admitted bad behaviors", count: r.underCount },
      { label: "rejected good behaviors", count: r.overCount },
      { label: "undefined", count: r.undefinedCount },
    ],
    witnesses,
    truncated: r.truncated,
    summary: `${r.verdict} over ${r.checkedCount} behaviors`,
  };
}

const PANE_TITLES: Record<PaneView["name"], string> = {
  pre: "precondition",
  post: "postcondition",
  body: "implementation",
  behaviors: "behaviors",
};

export function render(state: SessionState, ctx: ClientContext = {}): DocumentState {
  const panes: PaneView[] = (["pre", "post", "body", "behaviors"] as const).map((name) => ({
    name,
    title: PANE_TITLES[name],
    text: state.panes[name],
  }));

  let verdict: VerdictView | null = null;
  let error: string | null = ctx.error ?? null;
  if (state.latestVerdict) {
    const mismatch = checkRenderedAgreement(state.latestVerdict);
    if (mismatch) {
      error = error ?? mismatch;
    } else {
      verdict = verdictView(state.latestVerdict);
    }
  }

  const oracle: OracleView | null = state.pendingQuery
    ? {
        prompt: state.pendingQuery.prompt,
        behaviorIndex: state.pendingQuery.behaviorIndex,
        input: formatValuation(state.pendingQuery.input),
        output: formatValuation(state.pendingQuery.output),
      }
    : null;

  const done = state.done
    ? {
        behaviorCount: state.behaviorCount,
        message: `all ${state.behaviorCount} behaviors visited`,
      }
    : null;

  const progress = state.done
    ? "done"
    : `behavior ${state.cursor + 1}/${state.behaviorCount}, phase ${state.phase}`;

  const mode = state.specOnly ? "interface only" : "with implementation";

  return {
    title: `speccheck: ${state.entry}`,
    banner: `entry ${state.entry}, ${state.behaviorCount} behaviors, ${mode}`,
    progress,
    panes,
    verdict,
    oracle,
    done,
    choiceOpen: state.choiceOpen,
    diagnostics: (ctx.diagnostics ?? []).map((d) => ({
      severity: d.severity,
      message: d.message,
      where: locText(d),
    })),
    accuracy: ctx.accuracy ? accuracyView(ctx.accuracy) : null,
    warnings: state.warnings,
    logTail: state.logTail.map(eventLine),
    error,
    canStep: !state.done && !state.pendingQuery && !state.choiceOpen && !error,
    canAnswer: !!state.pendingQuery && !error,
    canChoose: state.choiceOpen && !error,
  };
}

/** View of a bare step result, used by the activity feed. */
export function stepResultLine(r: StepResult): string {
  if (r.type === "verdict") return r.rendered;
  if (r.type === "oracleQuery") return r.prompt;
  return `done: ${r.behaviorCount} behaviors`;
}
