/**
 * Thin DOM applier. Takes a DocumentState and paints it into the page.
 * All decisions were made by render(); this file only creates elements,
 * sets text, and toggles disabled flags. Event wiring happens once in
 * main.ts against stable element ids.
 */

import type { ActionNode, DocumentState } from "./render.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, cls?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function badgeClass(actual: string, ok: boolean | null): string {
  const truth = actual === "true" ? "t" : actual === "false" ? "f" : "u";
  const agree = ok === null ? "na" : ok ? "ok" : "bad";
  return `badge truth-${truth} req-${agree}`;
}

function actionInto(parent: HTMLElement, node: ActionNode, choiceOpen: boolean,
                    onChoose: (branch: number) => void): void {
  const li = el("li", `action action-${node.kind}`);
  if (node.branch !== null && choiceOpen) {
    const btn = el("button", "choose", `pick: ${node.text}`);
    btn.addEventListener("click", () => onChoose(node.branch!));
    li.appendChild(btn);
  } else {
    li.appendChild(el("span", "action-text", node.text));
  }
  if (node.children.length) {
    const ul = el("ul", "action-children");
    for (const child of node.children) actionInto(ul, child, choiceOpen, onChoose);
    li.appendChild(ul);
  }
  parent.appendChild(li);
}

export interface Handlers {
  onChoose: (branch: number) => void;
}

export function apply(doc: DocumentState, handlers: Handlers): void {
  document.title = doc.title;
  byId("banner").textContent = doc.banner;
  byId("progress").textContent = doc.progress;

  for (const pane of doc.panes) {
    const area = byId<HTMLTextAreaElement>(`pane-${pane.name}`);
    // keep the developer's in-progress typing; only follow the server
    // when the pane is not focused
    if (document.activeElement !== area) area.value = pane.text;
  }

  const errBox = byId("error");
  errBox.textContent = doc.error ?? "";
  errBox.style.display = doc.error ? "block" : "none";

  const verdictBox = byId("verdict");
  verdictBox.replaceChildren();
  if (doc.verdict) {
    const v = doc.verdict;
    verdictBox.appendChild(el("h3", undefined, v.title));
    const badges = el("div", "badges");
    for (const b of v.badges) {
      const span = el("span", badgeClass(b.actual, b.ok),
        `${b.label} = ${b.actual}` + (b.required ? ` (required ${b.required})` : ""));
      if (b.fault) span.title = b.fault;
      badges.appendChild(span);
    }
    if (v.g) {
      badges.appendChild(el("span", "badge g", `g = ${v.g.value} (${v.g.source})`));
    }
    verdictBox.appendChild(badges);
    if (v.execOutput) verdictBox.appendChild(el("div", "exec", `S(i) = ${v.execOutput}`));
    if (v.execNote) verdictBox.appendChild(el("div", "exec note", v.execNote));
    const tree = el("ul", "action-tree");
    actionInto(tree, v.action, doc.choiceOpen, handlers.onChoose);
    verdictBox.appendChild(tree);
    verdictBox.appendChild(el("pre", "rendered", v.rendered));
    for (const w of v.warnings) verdictBox.appendChild(el("div", "warning", w));
  }

  const oracleBox = byId("oracle");
  oracleBox.style.display = doc.oracle ? "block" : "none";
  byId("oracle-prompt").textContent = doc.oracle ? doc.oracle.prompt : "";

  const doneBox = byId("done");
  doneBox.textContent = doc.done ? doc.done.message : "";
  doneBox.style.display = doc.done ? "block" : "none";

  const diagBox = byId("diagnostics");
  diagBox.replaceChildren();
  for (const d of doc.diagnostics) {
    const where = d.where ? ` (${d.where})` : "";
    diagBox.appendChild(el("div", `diag diag-${d.severity}`, `${d.severity}: ${d.message}${where}`));
  }

  const accBox = byId("accuracy");
  accBox.replaceChildren();
  if (doc.accuracy) {
    accBox.appendChild(el("h3", undefined, `accuracy: ${doc.accuracy.verdict}`));
    const table = el("table");
    for (const row of doc.accuracy.rows) {
      const tr = el("tr");
      tr.appendChild(el("td", undefined, row.label));
      tr.appendChild(el("td", undefined, String(row.count)));
      table.appendChild(tr);
    }
    accBox.appendChild(table);
    if (doc.accuracy.witnesses.length) {
      const list = el("ul", "witnesses");
      for (const w of doc.accuracy.witnesses) {
        const out = w.output ? ` -> ${w.output}` : "";
        list.appendChild(el("li", undefined, `${w.kind}: ${w.input}${out}`));
      }
      accBox.appendChild(list);
    }
    if (doc.accuracy.truncated) {
      accBox.appendChild(el("div", "note", "witness list truncated"));
    }
  }

  const warnBox = byId("warnings");
  warnBox.replaceChildren();
  for (const w of doc.warnings) warnBox.appendChild(el("div", "warning", w));

  const feed = byId("log");
  feed.replaceChildren();
  for (const line of doc.logTail) feed.appendChild(el("div", "log-line", line));

  byId<HTMLButtonElement>("btn-step").disabled = !doc.canStep;
  byId<HTMLButtonElement>("btn-yes").disabled = !doc.canAnswer;
  byId<HTMLButtonElement>("btn-no").disabled = !doc.canAnswer;
}
