/** Browser wiring: session setup, chat view with four panes, mapping panel.
 *
 * The app only renders what the gateway reports. One turn may be in flight
 * per session at a time: the send control stays disabled until the gateway
 * answers, matching the server's per-session serialization.
 */

import { GatewayClient, MapEntry } from "./api.js";
import { buildTurnView, paneSegments, TurnView } from "./turnview.js";

const AVAILABLE_TYPES = ["name", "location"];

interface AppState {
  client: GatewayClient;
  sessionId: string | null;
  pending: boolean;
  entries: MapEntry[];
  views: TurnView[];
  failedMessage: string | null;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderPane(view: TurnView, key: "typed" | "transmitted" | "rawReply" | "restoredReply") {
  const pane = view[key];
  const box = el("div", "pane");
  box.appendChild(el("h4", "pane-label", pane.label));
  const body = el("div", "pane-body");
  for (const segment of paneSegments(pane)) {
    if (segment.entryIndex === null) {
      body.appendChild(document.createTextNode(segment.text));
    } else {
      const mark = el("mark", "subst", segment.text);
      mark.dataset.entry = String(segment.entryIndex);
      mark.title = `mapping row ${segment.entryIndex + 1}`;
      body.appendChild(mark);
    }
  }
  box.appendChild(body);
  return box;
}

function renderTurn(view: TurnView): HTMLElement {
  const card = el("section", "turn");
  card.appendChild(el("h3", "turn-title", `turn ${view.turnIndex + 1}`));
  if (view.conflictsFixed > 0) {
    card.appendChild(el("p", "fixes", `${view.conflictsFixed} clue(s) generalized`));
  }
  const grid = el("div", "panes");
  grid.appendChild(renderPane(view, "typed"));
  grid.appendChild(renderPane(view, "transmitted"));
  grid.appendChild(renderPane(view, "rawReply"));
  grid.appendChild(renderPane(view, "restoredReply"));
  card.appendChild(grid);
  return card;
}

function renderMappingPanel(entries: MapEntry[]): HTMLElement {
  const panel = el("aside", "mapping-panel");
  panel.appendChild(el("h3", undefined, `mapping (${entries.length})`));
  const table = el("table");
  const head = el("tr");
  for (const title of ["#", "original", "sent as", "type"]) head.appendChild(el("th", undefined, title));
  table.appendChild(head);
  entries.forEach((entry, index) => {
    const row = el("tr");
    row.dataset.entry = String(index);
    row.appendChild(el("td", undefined, String(index + 1)));
    row.appendChild(el("td", undefined, entry.plaintext));
    row.appendChild(el("td", undefined, entry.ciphertext));
    row.appendChild(el("td", undefined, entry.type));
    table.appendChild(row);
  });
  panel.appendChild(table);
  return panel;
}

export class App {
  private state: AppState;
  private root: HTMLElement;

  constructor(root: HTMLElement, baseUrl: string) {
    this.root = root;
    this.state = {
      client: new GatewayClient(baseUrl),
      sessionId: null,
      pending: false,
      entries: [],
      views: [],
      failedMessage: null,
    };
    void this.showSetup();
  }

  private async showSetup(): Promise<void> {
    this.root.replaceChildren();
    const reachable = await this.state.client.reachable();
    if (!reachable) {
      const banner = el("div", "banner error", "Gateway unreachable — is it running?");
      const retry = el("button", undefined, "Retry");
      retry.onclick = () => void this.showSetup();
      banner.appendChild(retry);
      this.root.appendChild(banner);
      return;
    }

    const form = el("section", "setup");
    form.appendChild(el("h2", undefined, "Start a protected conversation"));
    form.appendChild(el("p", undefined, "Choose which privacy types to filter:"));
    const boxes: HTMLInputElement[] = [];
    for (const typeName of AVAILABLE_TYPES) {
      const label = el("label");
      const box = el("input");
      box.type = "checkbox";
      box.value = typeName;
      box.checked = true;
      boxes.push(box);
      label.appendChild(box);
      label.appendChild(document.createTextNode(` ${typeName}`));
      form.appendChild(label);
    }
    const warning = el("p", "warning");
    const start = el("button", undefined, "Create session");
    start.onclick = async () => {
      const chosen = boxes.filter((b) => b.checked).map((b) => b.value);
      if (chosen.length === 0) {
        warning.textContent = "No types selected: nothing will be sanitized.";
      }
      try {
        this.state.sessionId = await this.state.client.createSession(chosen);
        this.renderChat();
      } catch (error) {
        warning.textContent = `Could not create session: ${String(error)}`;
      }
    };
    form.appendChild(start);
    form.appendChild(warning);
    this.root.appendChild(form);
  }

  private renderChat(): void {
    this.root.replaceChildren();
    const layout = el("div", "layout");
    const main = el("main", "chat");
    main.appendChild(el("h2", undefined, "Privacy-filtered chat"));

    const turns = el("div", "turns");
    for (const view of this.state.views) turns.appendChild(renderTurn(view));
    main.appendChild(turns);

    if (this.state.failedMessage !== null) {
      const failed = el("div", "banner error", "Turn failed upstream.");
      const resend = el("button", undefined, "Resend");
      resend.onclick = () => void this.send(this.state.failedMessage ?? "");
      failed.appendChild(resend);
      main.appendChild(failed);
    }

    const composer = el("form", "composer");
    const input = el("input");
    input.type = "text";
    input.placeholder = "Type a message…";
    input.disabled = this.state.pending;
    const send = el("button", undefined, this.state.pending ? "Sending…" : "Send");
    send.disabled = this.state.pending;
    composer.onsubmit = (event) => {
      event.preventDefault();
      if (input.value.trim()) void this.send(input.value);
    };
    composer.appendChild(input);
    composer.appendChild(send);
    main.appendChild(composer);

    layout.appendChild(main);
    layout.appendChild(renderMappingPanel(this.state.entries));
    this.root.appendChild(layout);
  }

  private async send(content: string): Promise<void> {
    if (this.state.pending || !this.state.sessionId) return;
    this.state.pending = true;
    this.state.failedMessage = null;
    this.renderChat();
    const sid = this.state.sessionId;
    try {
      const reply = await this.state.client.chat(sid, content);
      const [turns, entries] = await Promise.all([
        this.state.client.audit(sid),
        this.state.client.mapping(sid),
      ]);
      this.state.entries = entries;
      const record = turns.find((t) => t.turn_index === reply.turnIndex) ?? turns[turns.length - 1];
      if (record) this.state.views.push(buildTurnView(record, entries));
    } catch {
      this.state.failedMessage = content;
    } finally {
      this.state.pending = false;
      this.renderChat();
    }
  }
}

declare global {
  interface Window {
    ppts?: App;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  window.ppts = new App(
    document.getElementById("app") as HTMLElement,
    window.location.origin.replace(/:\d+$/, ":8788"),
  );
}
