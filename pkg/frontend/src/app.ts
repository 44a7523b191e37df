/**
 * Application state machine. Owns one server session, serializes all
 * mutating calls through a queue so at most one request is in flight,
 * and refreshes the authoritative state from the server after every
 * call. Nothing is predicted locally; the view is always a pure
 * function of the last server payload plus transient client facts.
 */

import { ApiError, Client } from "./api.js";
import { render, stepResultLine } from "./render.js";
import type { DocumentState } from "./render.js";
import type {
  AccuracyReportJson,
  DiagnosticJson,
  DomainJson,
  EditKind,
  EventJson,
  SessionState,
} from "./types.js";

export type Listener = (doc: DocumentState) => void;

function describeError(e: unknown): string {
  if (e instanceof ApiError) {
    const body = e.body as { error?: string } | null;
    if (body && typeof body.error === "string") return body.error;
    return `server error (${e.status})`;
  }
  if (e instanceof Error) return e.message;
  return String(e);
}

export class App {
  private state: SessionState | null = null;
  private diagnostics: DiagnosticJson[] = [];
  private accuracy: AccuracyReportJson | null = null;
  private error: string | null = null;
  private queue: Promise<void> = Promise.resolve();
  private listeners: Listener[] = [];
  /** feed of one-line descriptions of what happened, newest last */
  readonly feed: string[] = [];

  constructor(readonly client: Client) {}

  get sessionId(): string | null {
    return this.state ? this.state.id : null;
  }

  onChange(fn: Listener): void {
    this.listeners.push(fn);
  }

  view(): DocumentState {
    if (!this.state) {
      throw new Error("no session yet");
    }
    return render(this.state, {
      error: this.error,
      diagnostics: this.diagnostics,
      accuracy: this.accuracy,
    });
  }

  private notify(): void {
    if (!this.state) return;
    const doc = this.view();
    for (const fn of this.listeners) fn(doc);
  }

  /**
   * Every mutation funnels through here: actions run strictly in the
   * order they were requested, and a failure marks the view with an
   * error banner instead of rejecting through to the caller.
   */
  private dispatch(label: string, body: () => Promise<void>): Promise<void> {
    const run = this.queue.then(async () => {
      this.error = null;
      try {
        await body();
      } catch (e) {
        this.error = `${label} failed: ${describeError(e)}`;
      }
      this.notify();
    });
    this.queue = run;
    return run;
  }

  /** Wait for everything already queued to settle. */
  idle(): Promise<void> {
    return this.queue;
  }

  async create(source: string, budgets?: { stepBudget?: number; depthBudget?: number }): Promise<void> {
    await this.dispatch("create", async () => {
      const res = await this.client.createSession(source, budgets);
      this.state = res.state;
      this.feed.push(`loaded ${res.state.entry}`);
    });
    if (!this.state) {
      throw new Error(this.error ?? "create failed");
    }
  }

  /** Rebuild the view for an existing session, e.g. after a page reload. */
  async resume(id: string): Promise<void> {
    await this.dispatch("resume", async () => {
      this.state = await this.client.getState(id);
      this.feed.push(`resumed ${this.state.entry}`);
    });
    if (!this.state) {
      throw new Error(this.error ?? "resume failed");
    }
  }

  step(): Promise<void> {
    return this.dispatch("step", async () => {
      const res = await this.client.step(this.id());
      this.state = res.state;
      this.feed.push(stepResultLine(res.result));
    });
  }

  answerOracle(answer: boolean): Promise<void> {
    return this.dispatch("answer", async () => {
      const res = await this.client.answerOracle(this.id(), answer);
      this.state = res.state;
      this.feed.push(stepResultLine(res.result));
    });
  }

  choose(branch: number): Promise<void> {
    return this.dispatch("choose", async () => {
      const res = await this.client.choose(this.id(), branch);
      this.state = res.state;
      this.feed.push(`chose: ${res.chosen}`);
    });
  }

  editPane(kind: EditKind, text: string): Promise<void> {
    return this.dispatch("edit", async () => {
      const res = await this.client.edit(this.id(), kind, text);
      this.diagnostics = res.diagnostics;
      this.state = res.state;
      this.feed.push(res.ok ? `edited ${kind}` : `edit ${kind} rejected`);
    });
  }

  appendBehaviors(text: string): Promise<void> {
    return this.editPane("behaviors-append", text);
  }

  runAccuracy(domain: DomainJson, earlyExit = false): Promise<void> {
    return this.dispatch("accuracy", async () => {
      this.accuracy = await this.client.runAccuracy(this.id(), domain, earlyExit);
      this.feed.push(`accuracy: ${this.accuracy.verdict}`);
    });
  }

  /** Refetch state without mutating anything server-side. */
  refresh(): Promise<void> {
    return this.dispatch("refresh", async () => {
      this.state = await this.client.getState(this.id());
    });
  }

  async log(): Promise<EventJson[]> {
    return this.client.getLog(this.id());
  }

  private id(): string {
    if (!this.state) throw new Error("no session");
    return this.state.id;
  }
}
