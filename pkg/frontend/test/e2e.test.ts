/**
 * End-to-end tests against the real HTTP service. A server process is
 * spawned once for the file; each test drives it through the App layer
 * exactly as the browser would, then cross-checks the view against a
 * fresh GET of the authoritative session state at every pause point.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { Client } from "../src/api.js";
import { App } from "../src/app.js";
import { render } from "../src/render.js";
import type { DocumentState } from "../src/render.js";
import type { EditKind, SessionState } from "../src/types.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const REPO = resolve(HERE, "..", "..");
const CORPUS = join(REPO, "src", "speccheck", "corpus");

const PORT = 18000 + Math.floor(Math.random() * 2000);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
let serverLog = "";

async function waitForServer(): Promise<void> {
  const deadline = Date.now() + 20_000;
  while (Date.now() < deadline) {
    try {
      const r = await fetch(`${BASE}/v1/sessions/probe`);
      if (r.status === 404) return;
    } catch {
      // not listening yet
    }
    await new Promise((f) => setTimeout(f, 150));
  }
  throw new Error(`service did not come up on ${BASE}\n${serverLog}`);
}

beforeAll(async () => {
  server = spawn("python3", ["-m", "speccheck", "serve", "--host", "127.0.0.1", "--port", String(PORT)], {
    cwd: REPO,
    stdio: ["ignore", "pipe", "pipe"],
  });
  server.stdout!.on("data", (d) => { serverLog += String(d); });
  server.stderr!.on("data", (d) => { serverLog += String(d); });
  await waitForServer();
}, 30_000);

afterAll(() => {
  server.kill();
});

interface TraceStep {
  do: "step" | "edit";
  expect?: string[];
  kind?: string;
  text?: string;
}

interface Trace {
  program: string;
  steps: TraceStep[];
}

const TRACE: Trace = JSON.parse(
  readFileSync(join(CORPUS, "linear_search_edits.json"), "utf-8"),
);
// the trace names its starting program rather than inlining it
const TRACE_SOURCE = readFileSync(join(CORPUS, TRACE.program), "utf-8");

function rawClient(): Client {
  return new Client(BASE);
}

/** Panels that live only in this client, not in the session. */
function persistent(doc: DocumentState): Omit<DocumentState, "diagnostics" | "accuracy"> {
  const { diagnostics, accuracy, ...rest } = doc;
  return rest;
}

/**
 * The view must agree with the service's own record of the pause: the
 * rendered line verbatim, every truth badge, and the action tree text.
 */
function expectServerIdentical(doc: DocumentState, state: SessionState): void {
  const sv = state.latestVerdict;
  expect(sv).not.toBeNull();
  expect(doc.error).toBeNull();
  expect(doc.verdict).not.toBeNull();
  const v = doc.verdict!;

  expect(v.rendered).toBe(sv!.rendered);

  const p = v.badges.find((b) => b.label === "P");
  if (sv!.pTruth === undefined) {
    expect(p).toBeUndefined();
  } else {
    expect(p!.actual).toBe(sv!.pTruth);
    const req = sv!.requiredP === undefined || sv!.requiredP === null
      ? null : sv!.requiredP ? "true" : "false";
    expect(p!.required).toBe(req);
  }

  const q = v.badges.find((b) => b.label === "Q");
  if (sv!.qTruth === undefined) {
    expect(q).toBeUndefined();
  } else {
    expect(q!.actual).toBe(sv!.qTruth);
    const req = sv!.requiredQ === undefined || sv!.requiredQ === null
      ? null : sv!.requiredQ ? "true" : "false";
    expect(q!.required).toBe(req);
  }

  if (sv!.g === undefined) {
    expect(v.g).toBeNull();
  } else {
    expect(v.g).toEqual({ value: sv!.g, source: sv!.gSource ?? "" });
  }

  // the tree is rebuilt from action JSON; its text must be the tail of
  // the server's own one-line render
  expect(sv!.rendered.endsWith(" -> " + v.action.text)).toBe(true);
}

describe("golden trace replay", () => {
  it("shows server-identical badges and actions at every pause, and a reload mid-trace reconstructs the view", async () => {
    const app = new App(rawClient());
    await app.create(TRACE_SOURCE);
    const id = app.sessionId!;
    const check = rawClient();

    let pauses = 0;
    let reloaded = false;

    for (const [i, step] of TRACE.steps.entries()) {
      if (step.do === "edit") {
        await app.editPane(step.kind as EditKind, step.text!);
        const doc = app.view();
        expect(doc.error).toBeNull();
        const state = await check.getState(id);
        for (const pane of doc.panes) {
          expect(pane.text).toBe(state.panes[pane.name]);
        }
        continue;
      }

      await app.step();
      const doc = app.view();
      const state = await check.getState(id);
      const wantsDone = step.expect!.some((s) => s.startsWith("done:"));

      if (wantsDone) {
        expect(state.done).toBe(true);
        expect(doc.done).toEqual({
          behaviorCount: state.behaviorCount,
          message: `all ${state.behaviorCount} behaviors visited`,
        });
        expect(doc.progress).toBe("done");
        continue;
      }

      pauses += 1;
      expectServerIdentical(doc, state);
      for (const want of step.expect!) {
        expect(doc.verdict!.rendered).toContain(want);
      }

      // halfway through, open the session in a second client as a
      // page reload would and compare the rebuilt document
      if (i === 12 && !reloaded) {
        reloaded = true;
        const again = new App(rawClient());
        await again.resume(id);
        expect(persistent(again.view())).toEqual(persistent(doc));
      }
    }

    expect(reloaded).toBe(true);
    expect(pauses).toBeGreaterThanOrEqual(20);

    // reload at the end as well: the finished view must survive too
    const again = new App(rawClient());
    await again.resume(id);
    expect(persistent(again.view())).toEqual(persistent(app.view()));

    // the session log the service kept matches what the app displayed
    const events = await app.log();
    expect(events[0]!.kind).toBe("created");
    expect(events.filter((e) => e.kind === "edit").length).toBe(
      TRACE.steps.filter((s) => s.do === "edit").length,
    );
  }, 60_000);
});

describe("oracle and choice flow", () => {
  it("asks the developer about an executed output and records the chosen branch", async () => {
    const source = readFileSync(join(CORPUS, "search_sorted.sc"), "utf-8");
    const app = new App(rawClient());
    await app.create(source);
    const check = rawClient();
    const id = app.sessionId!;

    for (let i = 0; i < 6; i++) await app.step();

    let doc = app.view();
    let state = await check.getState(id);
    expect(state.pendingQuery).not.toBeNull();
    expect(doc.oracle).not.toBeNull();
    expect(doc.oracle!.prompt).toBe(state.pendingQuery!.prompt);
    expect(doc.canAnswer).toBe(true);
    expect(doc.canStep).toBe(false);

    await app.answerOracle(false);
    doc = app.view();
    state = await check.getState(id);
    expectServerIdentical(doc, state);
    expect(doc.verdict!.g).toEqual({ value: false, source: "oracle" });
    expect(doc.choiceOpen).toBe(true);
    expect(doc.canChoose).toBe(true);

    const branches = doc.verdict!.action.children;
    expect(branches.map((b) => b.branch)).toEqual([1, 2]);
    expect(branches[0]!.text.startsWith("strengthen(P")).toBe(true);

    await app.choose(branches[0]!.branch!);
    doc = app.view();
    expect(doc.error).toBeNull();
    expect(doc.choiceOpen).toBe(false);
    expect(app.feed.at(-1)).toMatch(/^chose: strengthen\(P/);

    const events = await app.log();
    const choice = events.find((e) => e.kind === "choice");
    expect(choice).toMatchObject({ branch: 1 });
  }, 30_000);
});

describe("edits and accuracy", () => {
  it("rejects a bad edit with diagnostics and keeps the panes", async () => {
    const source = readFileSync(join(CORPUS, "linear_search_rightmost.sc"), "utf-8");
    const app = new App(rawClient());
    await app.create(source);
    const before = app.view().panes.find((p) => p.name === "pre")!.text;

    await app.editPane("pre", "rvv >");
    const doc = app.view();
    expect(doc.error).toBeNull();
    expect(doc.diagnostics.length).toBeGreaterThan(0);
    expect(doc.diagnostics[0]!.severity).toBe("error");
    expect(doc.panes.find((p) => p.name === "pre")!.text).toBe(before);
    expect(app.feed.at(-1)).toBe("edit pre rejected");
  }, 30_000);

  it("runs a bounded accuracy check and tabulates the report", async () => {
    const source = readFileSync(join(CORPUS, "linear_search_rightmost.sc"), "utf-8");
    const app = new App(rawClient());
    await app.create(source);

    await app.runAccuracy({
      vars: {
        a: { lenRange: [1, 2], elemRange: [0, 1] },
        l: { range: [0, 1] },
        r: { range: [0, 1] },
        e: { set: [0, 1] },
        rv: { range: [-1, 1] },
      },
      filter: "l <= r && r < scasize(a)",
      labels: { source: "entry" },
    });

    const doc = app.view();
    expect(doc.error).toBeNull();
    expect(doc.accuracy).not.toBeNull();
    expect(doc.accuracy!.verdict).toBe("accurate");
    expect(doc.accuracy!.rows[0]).toEqual({ label: "checked", count: 84 });
    expect(app.feed.at(-1)).toBe("accuracy: accurate");
  }, 30_000);

  it("surfaces a failed mutation as an error banner and recovers on the next step", async () => {
    const source = readFileSync(join(CORPUS, "linear_search_rightmost.sc"), "utf-8");
    const app = new App(rawClient());
    await app.create(source);

    // stepping is legal, answering with no pending question is not
    await app.answerOracle(true);
    let doc = app.view();
    expect(doc.error).toMatch(/^answer failed/);

    await app.step();
    doc = app.view();
    expect(doc.error).toBeNull();
    expect(doc.verdict).not.toBeNull();
  }, 30_000);

  it("rejects resuming a session the service does not know", async () => {
    const app = new App(rawClient());
    await expect(app.resume("deadbeef")).rejects.toThrow(/no such session/);
  }, 30_000);
});

describe("render purity against live payloads", () => {
  it("view() is a pure function of the fetched state", async () => {
    const source = readFileSync(join(CORPUS, "search_sorted.sc"), "utf-8");
    const app = new App(rawClient());
    await app.create(source);
    await app.step();

    const state = await rawClient().getState(app.sessionId!);
    expect(persistent(app.view())).toEqual(persistent(render(state)));
  }, 30_000);
});
