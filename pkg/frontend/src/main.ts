/**
 * Browser entry point. Wires the static page to an App instance and
 * keeps the session id in the URL hash so a reload reconstructs the
 * same view from the server.
 */

import { Client } from "./api.js";
import { App } from "./app.js";
import { apply } from "./dom.js";
import type { EditKind } from "./types.js";

const DEFAULT_BASE = "http://127.0.0.1:8765";

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function baseUrl(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("api") ?? DEFAULT_BASE;
}

async function boot(): Promise<void> {
  const client = new Client(baseUrl());
  const app = new App(client);

  app.onChange((doc) => apply(doc, {
    onChoose: (branch) => void app.choose(branch),
  }));

  byId("btn-step").addEventListener("click", () => void app.step());
  byId("btn-yes").addEventListener("click", () => void app.answerOracle(true));
  byId("btn-no").addEventListener("click", () => void app.answerOracle(false));

  for (const kind of ["pre", "post", "body", "behaviors"] as const) {
    byId(`save-${kind}`).addEventListener("click", () => {
      const area = byId<HTMLTextAreaElement>(`pane-${kind}`);
      const editKind: EditKind = kind === "behaviors" ? "behaviors-append" : kind;
      void app.editPane(editKind, area.value);
    });
  }

  byId("btn-accuracy").addEventListener("click", () => {
    const text = byId<HTMLTextAreaElement>("domain-input").value;
    let domain: unknown;
    try {
      domain = JSON.parse(text);
    } catch {
      return;
    }
    void app.runAccuracy(domain as Parameters<App["runAccuracy"]>[0]);
  });

  byId("btn-load").addEventListener("click", () => {
    const source = byId<HTMLTextAreaElement>("source-input").value;
    void app.create(source).then(() => {
      if (app.sessionId) window.location.hash = app.sessionId;
    });
  });

  const existing = window.location.hash.replace(/^#/, "");
  if (existing) {
    try {
      await app.resume(existing);
    } catch {
      window.location.hash = "";
    }
  }
}

void boot();
