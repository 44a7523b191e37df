/**
 * Unit tests for the pure view-model layer. Every fixture below is a
 * payload captured verbatim from the HTTP service, so these tests pin
 * the client to the real wire format.
 */

import { describe, expect, it } from "vitest";

import {
  actionText,
  actionTree,
  accuracyView,
  checkRenderedAgreement,
  eventLine,
  formatValuation,
  formatValue,
  formatWitness,
  render,
  stepResultLine,
  verdictView,
} from "../src/render.js";
import type {
  AccuracyReportJson,
  EventJson,
  SessionState,
  VerdictJson,
} from "../src/types.js";

const SKIP_POST: VerdictJson = {
  behaviorIndex: 0,
  kind: "good",
  phase: "post",
  action: { op: "basic", kind: "skip" },
  pTruth: "true",
  qTruth: "true",
  g: true,
  gSource: "behaviors",
  execOutput: { rv: -1 },
  rendered: "behavior 1 (good) post: S(i) = {rv=-1} g = true (behaviors) Q = true -> skip",
};

const WEAKEN_PRE: VerdictJson = {
  behaviorIndex: 2,
  kind: "bad",
  phase: "pre",
  action: {
    op: "basic",
    kind: "weaken",
    target: "P",
    witness: { input: { a: [1, 3, 5, 4, 2], l: 0, r: 4, e: 2 } },
  },
  pTruth: "false",
  requiredP: true,
  rendered:
    "behavior 3 (bad) pre: P = false (required true) -> weaken(P, {a={1, 3, 5, 4, 2}, l=0, r=4, e=2})",
};

const OR_POST: VerdictJson = {
  behaviorIndex: 2,
  kind: "bad",
  phase: "post",
  action: {
    op: "or",
    parts: [
      {
        op: "basic",
        kind: "strengthen",
        target: "P",
        witness: { input: { a: [1, 3, 5, 4, 2], l: 0, r: 4, e: 2 } },
      },
      {
        op: "basic",
        kind: "reviseImpl",
        witness: {
          input: { a: [1, 3, 5, 4, 2], l: 0, r: 4, e: 2 },
          output: { rv: 4 },
        },
      },
    ],
  },
  pTruth: "false",
  qTruth: "true",
  g: false,
  gSource: "oracle",
  execOutput: { rv: 4 },
  rendered:
    "behavior 3 (bad) post: S(i) = {rv=4} g = false (oracle) Q = true -> strengthen(P, {a={1, 3, 5, 4, 2}, l=0, r=4, e=2}) OR reviseImpl(({a={1, 3, 5, 4, 2}, l=0, r=4, e=2}, {rv=4}))",
};

const QUERY = {
  behaviorIndex: 2,
  input: { a: [1, 3, 5, 4, 2], l: 0, r: 4, e: 2 },
  output: { rv: 4 },
  prompt: "is {rv=4} acceptable for input {a={1, 3, 5, 4, 2}, l=0, r=4, e=2}? [y/n]",
};

function stateFixture(over: Partial<SessionState> = {}): SessionState {
  return {
    id: "917429fdbb7f",
    source: "int search(int [] a, int l, int r, int e) { ... }",
    panes: {
      pre: "0 <= l && l <= r && r < scasize(a);",
      post: "rv != -1 => a[rv] == e;",
      body: "int i = l;\nreturn -1;",
      behaviors: "good { input = {a = {1, 2, 3}, l = 0, r = 2, e = 4} output = {rv = -1} }",
    },
    entry: "search",
    cursor: 3,
    phase: "pre",
    specOnly: false,
    behaviorCount: 3,
    done: true,
    pendingQuery: null,
    latestVerdict: OR_POST,
    choiceOpen: true,
    settings: { stepBudget: 1000000, depthBudget: 10000 },
    warnings: [],
    logTail: [
      { kind: "created", source: "int search..." },
      { kind: "step", result: SKIP_POST },
      { kind: "step", result: { query: QUERY } },
      { kind: "oracle", answer: false, result: OR_POST },
    ],
    ...over,
  };
}

describe("value formatting matches the service's own renders", () => {
  it("formats scalars and arrays", () => {
    expect(formatValue(4)).toBe("4");
    expect(formatValue(true)).toBe("true");
    expect(formatValue([1, 3, 5, 4, 2])).toBe("{1, 3, 5, 4, 2}");
  });

  it("formats valuations in key order", () => {
    expect(formatValuation({ a: [1, 3, 5, 4, 2], l: 0, r: 4, e: 2 }))
      .toBe("{a={1, 3, 5, 4, 2}, l=0, r=4, e=2}");
  });

  it("formats witnesses with and without outputs", () => {
    expect(formatWitness({ input: { x: 1 } })).toBe("{x=1}");
    expect(formatWitness({ input: { x: 1 }, output: { rv: 2 } }))
      .toBe("({x=1}, {rv=2})");
  });
});

describe("action rendering agrees with the service", () => {
  it.each([SKIP_POST, WEAKEN_PRE, OR_POST])(
    "reconstructs the rendered tail for %#",
    (v) => {
      expect(v.rendered.endsWith(" -> " + actionText(v.action))).toBe(true);
      expect(checkRenderedAgreement(v)).toBeNull();
    },
  );

  it("flags a payload whose rendered line disagrees with its action", () => {
    const tampered = { ...OR_POST, rendered: "behavior 3 (bad) post: ... -> skip" };
    expect(checkRenderedAgreement(tampered)).toMatch(/payload mismatch/);
  });

  it("marks or-branches with 1-based choice numbers", () => {
    const tree = actionTree(OR_POST.action);
    expect(tree.kind).toBe("or");
    expect(tree.children.map((c) => c.branch)).toEqual([1, 2]);
    expect(tree.children[0]!.text).toBe(
      "strengthen(P, {a={1, 3, 5, 4, 2}, l=0, r=4, e=2})",
    );
    expect(tree.children[1]!.text).toBe(
      "reviseImpl(({a={1, 3, 5, 4, 2}, l=0, r=4, e=2}, {rv=4}))",
    );
  });

  it("leaves and-parts unnumbered", () => {
    const tree = actionTree({
      op: "and",
      parts: [
        { op: "basic", kind: "strengthen", target: "Q", witness: { input: { x: 1 }, output: { rv: 2 } } },
        { op: "basic", kind: "reviseImpl", witness: { input: { x: 1 }, output: { rv: 2 } } },
      ],
    });
    expect(tree.children.map((c) => c.branch)).toEqual([null, null]);
    expect(tree.text).toBe(
      "strengthen(Q, ({x=1}, {rv=2})) AND reviseImpl(({x=1}, {rv=2}))",
    );
  });
});

describe("verdict views take every truth from the payload", () => {
  it("shows P and Q badges with requirements", () => {
    const v = verdictView(OR_POST);
    expect(v.title).toBe("behavior 3 (bad) post");
    expect(v.badges).toEqual([
      { label: "P", actual: "false", required: null, fault: null, ok: null },
      { label: "Q", actual: "true", required: null, fault: null, ok: null },
    ]);
    expect(v.g).toEqual({ value: false, source: "oracle" });
    expect(v.execOutput).toBe("{rv=4}");
    expect(v.rendered).toBe(OR_POST.rendered);
  });

  it("marks a failed requirement", () => {
    const v = verdictView(WEAKEN_PRE);
    expect(v.badges).toEqual([
      { label: "P", actual: "false", required: "true", fault: null, ok: false },
    ]);
  });

  it("marks a met requirement", () => {
    const v = verdictView({ ...WEAKEN_PRE, pTruth: "true", rendered: "x -> skip", action: { op: "basic", kind: "skip" } });
    expect(v.badges[0]).toEqual(
      { label: "P", actual: "true", required: "true", fault: null, ok: true },
    );
  });

  it("keeps an undefined truth and its fault", () => {
    const v = verdictView({
      ...WEAKEN_PRE,
      pTruth: "undefined",
      pFault: "index out of range",
      action: { op: "basic", kind: "makeWellDefined", target: "P", witness: { input: { x: 1 } } },
      rendered: "x -> makeWellDefined(P, {x=1})",
    });
    expect(v.badges[0]).toEqual(
      { label: "P", actual: "undefined", required: "true", fault: "index out of range", ok: false },
    );
  });
});

describe("render builds the whole document from server state", () => {
  it("renders a finished session with an open choice", () => {
    const doc = render(stateFixture());
    expect(doc.banner).toBe("entry search, 3 behaviors, with implementation");
    expect(doc.progress).toBe("done");
    expect(doc.panes.map((p) => p.name)).toEqual(["pre", "post", "body", "behaviors"]);
    expect(doc.panes[0]!.text).toBe("0 <= l && l <= r && r < scasize(a);");
    expect(doc.verdict?.rendered).toBe(OR_POST.rendered);
    expect(doc.done).toEqual({ behaviorCount: 3, message: "all 3 behaviors visited" });
    expect(doc.choiceOpen).toBe(true);
    expect(doc.canStep).toBe(false);
    expect(doc.canChoose).toBe(true);
    expect(doc.canAnswer).toBe(false);
    expect(doc.error).toBeNull();
    expect(doc.logTail).toEqual([
      "created",
      SKIP_POST.rendered,
      QUERY.prompt,
      `oracle no: ${OR_POST.rendered}`,
    ]);
  });

  it("renders a pending oracle question as a modal", () => {
    const doc = render(stateFixture({
      done: false,
      cursor: 2,
      phase: "post",
      pendingQuery: QUERY,
      latestVerdict: WEAKEN_PRE,
      choiceOpen: false,
    }));
    expect(doc.oracle).toEqual({
      prompt: QUERY.prompt,
      behaviorIndex: 2,
      input: "{a={1, 3, 5, 4, 2}, l=0, r=4, e=2}",
      output: "{rv=4}",
    });
    expect(doc.progress).toBe("behavior 3/3, phase post");
    expect(doc.canAnswer).toBe(true);
    expect(doc.canStep).toBe(false);
  });

  it("suppresses the verdict and raises an error on a payload mismatch", () => {
    const bad = { ...OR_POST, rendered: "behavior 3 (bad) post: ... -> skip" };
    const doc = render(stateFixture({ latestVerdict: bad }));
    expect(doc.verdict).toBeNull();
    expect(doc.error).toMatch(/payload mismatch/);
    expect(doc.canStep).toBe(false);
    expect(doc.canChoose).toBe(false);
  });

  it("shows a client error banner without dropping the verdict", () => {
    const doc = render(stateFixture(), { error: "step failed: server error (500)" });
    expect(doc.error).toBe("step failed: server error (500)");
    expect(doc.verdict?.rendered).toBe(OR_POST.rendered);
  });

  it("carries edit diagnostics with their locations", () => {
    const doc = render(stateFixture(), {
      diagnostics: [
        { severity: "error", message: "unknown identifier rvv", loc: { line: 2, col: 7 } },
        { severity: "warning", message: "input variable 'e' is not free", loc: null },
      ],
    });
    expect(doc.diagnostics).toEqual([
      { severity: "error", message: "unknown identifier rvv", where: "line 2, col 7" },
      { severity: "warning", message: "input variable 'e' is not free", where: null },
    ]);
  });
});

describe("accuracy reports", () => {
  const BOTH: AccuracyReportJson = {
    verdict: "both",
    underCount: 16,
    overCount: 16,
    undefinedCount: 0,
    checkedCount: 84,
    witnessCap: 100,
    truncated: false,
    underWitnesses: [
      { kind: "bad", input: { a: [0], l: 0, r: 0, e: 0 }, output: { rv: -1 } },
    ],
    overWitnesses: [
      { kind: "good", input: { a: [0], l: 0, r: 0, e: 0 }, output: { rv: 0 } },
    ],
    undefinedWitnesses: [],
  };

  it("tabulates counts and formats witnesses", () => {
    const view = accuracyView(BOTH);
    expect(view.verdict).toBe("both");
    expect(view.rows).toEqual([
      { label: "checked", count: 84 },
      { label: "admitted bad behaviors", count: 16 },
      { label: "rejected good behaviors", count: 16 },
      { label: "undefined", count: 0 },
    ]);
    expect(view.witnesses).toEqual([
      { kind: "bad", input: "{a={0}, l=0, r=0, e=0}", output: "{rv=-1}" },
      { kind: "good", input: "{a={0}, l=0, r=0, e=0}", output: "{rv=0}" },
    ]);
    expect(view.summary).toBe("both over 84 behaviors");
  });

  it("appears in the document when supplied", () => {
    const doc = render(stateFixture(), { accuracy: BOTH });
    expect(doc.accuracy?.verdict).toBe("both");
  });
});

describe("event and step lines", () => {
  it("describes every event kind", () => {
    const events: EventJson[] = [
      { kind: "created", source: "..." },
      { kind: "step", result: { done: true, behaviorCount: 3 } },
      { kind: "choice", behaviorIndex: 2, branch: 1, chosen: "strengthen(P, {x=1})" },
      { kind: "edit", editKind: "post", text: "rv == -1;" },
      { kind: "restart" },
    ];
    expect(events.map(eventLine)).toEqual([
      "created",
      "done: 3 behaviors",
      "chose: strengthen(P, {x=1})",
      "edited post",
      "restarted",
    ]);
  });

  it("describes step results from the step route", () => {
    expect(stepResultLine({ type: "verdict", ...OR_POST })).toBe(OR_POST.rendered);
    expect(stepResultLine({ type: "oracleQuery", ...QUERY })).toBe(QUERY.prompt);
    expect(stepResultLine({ type: "done", done: true, behaviorCount: 7 }))
      .toBe("done: 7 behaviors");
  });
});
