/** Application shell: topic form → live graph view with a detail panel. */

import { renderGraph } from "./canvas.js";
import { parseStylesheet, type StyleRule } from "./cascade.js";
import {
  browserSocketFactory,
  createSession,
  EventFeed,
  fetchNodeDetail,
  fetchSnapshot,
  wsUrlFor,
  type SocketFactory,
} from "./client.js";
import { EMOTION_ICONS, formatTimestamp, scoreRows } from "./detail.js";
import type { GraphState } from "./reducer.js";
import { isValid, validateTopics } from "./validate.js";
import type { DetailRecord } from "./wire.js";

export interface AppOptions {
  socketFactory?: SocketFactory;
}

function h<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text) {
    node.textContent = text;
  }
  return node;
}

function detailPanelContent(panel: HTMLElement, detail: DetailRecord): void {
  panel.replaceChildren();
  if (detail.kind === "tweet") {
    panel.appendChild(h("h2", "", `${EMOTION_ICONS[detail.finalEmotion]} ${detail.finalEmotion}`));
    panel.appendChild(h("p", "detail-text", detail.text));
    panel.appendChild(h("p", "detail-meta", `@${detail.author} · ${formatTimestamp(detail.created_at)}`));
    const table = h("table", "score-table");
    for (const row of scoreRows(detail)) {
      const tr = h("tr");
      tr.appendChild(h("td", "", `${row.glyph} ${row.emotion}`));
      tr.appendChild(h("td", "score-value", row.score));
      table.appendChild(tr);
    }
    panel.appendChild(table);
    return;
  }
  if (detail.kind === "emotion") {
    panel.appendChild(h("h2", "", `${EMOTION_ICONS[detail.emotion]} ${detail.emotion}`));
    panel.appendChild(h("p", "detail-meta", detail.id));
    const table = h("table", "score-table");
    for (const [name, value] of [
      ["matched in total", detail.total_count],
      ["shown now", detail.live_count],
    ] as const) {
      const tr = h("tr");
      tr.appendChild(h("td", "", name));
      tr.appendChild(h("td", "score-value", String(value)));
      table.appendChild(tr);
    }
    panel.appendChild(table);
    return;
  }
  panel.appendChild(h("h2", "", detail.phrase));
  panel.appendChild(h("p", "detail-meta", detail.id));
  panel.appendChild(h("p", "", `${detail.skipped} matching posts carried no emotion signal`));
}

export function mountApp(root: HTMLElement, apiBase: string, options: AppOptions = {}): void {
  const socketFactory = options.socketFactory ?? browserSocketFactory;
  let feed: EventFeed | null = null;

  const showForm = (): void => {
    if (feed) {
      feed.stop();
      feed = null;
    }
    root.replaceChildren();
    const card = h("div", "topic-card");
    card.appendChild(h("h1", "", "Watch two topics argue"));
    card.appendChild(h("p", "detail-meta",
      "Posts matching each phrase are scored for anger, disgust, fear, joy, and sadness, then attached to the winning emotion hub."));
    const form = h("form", "topic-form");
    const inputs: Record<"a" | "b", HTMLInputElement> = {
      a: h("input"),
      b: h("input"),
    };
    const errors: Record<"a" | "b", HTMLElement> = {
      a: h("div", "field-error"),
      b: h("div", "field-error"),
    };
    inputs.a.placeholder = "first topic, e.g. iPhone 7";
    inputs.b.placeholder = "second topic, e.g. Samsung S7";
    const submit = h("button", "", "Start session");
    submit.type = "submit";
    const formError = h("div", "field-error");

    const refresh = (): void => {
      const result = validateTopics(inputs.a.value, inputs.b.value);
      errors.a.textContent = result.a ?? "";
      errors.b.textContent = result.b ?? "";
      submit.disabled = !isValid(result);
    };
    inputs.a.addEventListener("input", refresh);
    inputs.b.addEventListener("input", refresh);

    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      const result = validateTopics(inputs.a.value, inputs.b.value);
      if (!isValid(result)) {
        refresh();
        return;
      }
      submit.disabled = true;
      formError.textContent = "";
      createSession(apiBase, {
        topic_a: inputs.a.value.trim(),
        topic_b: inputs.b.value.trim(),
      }).then(
        (sessionId) => showGraph(sessionId),
        (err: unknown) => {
          formError.textContent = err instanceof Error ? err.message : String(err);
          submit.disabled = false;
        },
      );
    });

    for (const field of ["a", "b"] as const) {
      const label = h("label", "", field === "a" ? "Topic A" : "Topic B");
      label.appendChild(inputs[field]);
      label.appendChild(errors[field]);
      form.appendChild(label);
    }
    form.appendChild(submit);
    form.appendChild(formError);
    card.appendChild(form);
    root.appendChild(card);
    refresh();
  };

  const showGraph = (sessionId: string): void => {
    root.replaceChildren();
    const bar = h("div", "status-bar");
    const backButton = h("button", "", "New session");
    backButton.addEventListener("click", showForm);
    const status = h("span", "status-text", `session ${sessionId} · connecting…`);
    bar.appendChild(backButton);
    bar.appendChild(status);
    root.appendChild(bar);

    const main = h("div", "graph-row");
    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.classList.add("graph-canvas");
    const panel = h("div", "detail-panel");
    panel.appendChild(h("p", "detail-meta", "Click a node for details."));
    main.appendChild(svg);
    main.appendChild(panel);
    root.appendChild(main);

    let rules: StyleRule[] = [];
    let selected: string | null = null;
    let latest: GraphState | null = null;
    let streamNote = "";
    let framePending = false;

    const draw = (): void => {
      framePending = false;
      if (!latest) {
        return;
      }
      status.textContent =
        `session ${sessionId} · seq ${latest.lastSeq} · ${latest.nodes.size} nodes · ` +
        `${latest.edges.size} edges${streamNote}`;
      renderGraph(svg, latest, rules, {
        selected,
        onNodeClick: (nodeId) => {
          selected = nodeId;
          scheduleDraw();
          fetchNodeDetail(apiBase, sessionId, nodeId).then(
            (detail) => detailPanelContent(panel, detail),
            (err: unknown) => {
              selected = null;
              scheduleDraw();
              panel.replaceChildren(h("div", "field-error",
                err instanceof Error ? err.message : String(err)));
            },
          );
        },
        onBackgroundClick: () => {
          selected = null;
          panel.replaceChildren(h("p", "detail-meta", "Click a node for details."));
          scheduleDraw();
        },
      });
    };
    const scheduleDraw = (): void => {
      if (!framePending) {
        framePending = true;
        requestAnimationFrame(draw);
      }
    };

    fetchSnapshot(apiBase, sessionId).then(
      (snapshot) => {
        rules = parseStylesheet(snapshot.stylesheet);
        scheduleDraw();
      },
      (err: unknown) => {
        status.textContent = err instanceof Error ? err.message : String(err);
      },
    );

    feed = new EventFeed(wsUrlFor(apiBase, sessionId), socketFactory, {
      onChange: (state) => {
        latest = state;
        scheduleDraw();
      },
      onReconnect: (reason) => {
        streamNote = ` · resynced (${reason})`;
        scheduleDraw();
      },
      onClose: () => {
        streamNote = " · stream complete";
        scheduleDraw();
      },
    });
    feed.start();
  };

  showForm();
}
