/** SVG renderer for the graph state.
 *
 * Layout positions are unbounded (forces can push nodes outside the
 * initial frame), so every render fits the current bounding box into a
 * fixed viewBox instead of assuming an extent.
 */

import type { ComputedStyle, StyleRule } from "./cascade.js";
import { resolveStyle } from "./cascade.js";
import { iconGlyph } from "./detail.js";
import type { GraphState } from "./reducer.js";

const SVG_NS = "http://www.w3.org/2000/svg";
export const VIEW_SIZE = 1000;
const PAD = 60;

export interface RenderOptions {
  selected?: string | null;
  onNodeClick?: (nodeId: string) => void;
  onBackgroundClick?: () => void;
}

interface Projection {
  x(worldX: number): number;
  y(worldY: number): number;
}

function fitProjection(positions: ReadonlyMap<string, readonly [number, number]>): Projection {
  let minX = Infinity;
  let minY = Infinity;
  let maxX = -Infinity;
  let maxY = -Infinity;
  for (const [x, y] of positions.values()) {
    minX = Math.min(minX, x);
    minY = Math.min(minY, y);
    maxX = Math.max(maxX, x);
    maxY = Math.max(maxY, y);
  }
  if (!Number.isFinite(minX)) {
    return { x: (v) => v, y: (v) => v };
  }
  const span = Math.max(maxX - minX, maxY - minY, 1);
  const scale = (VIEW_SIZE - 2 * PAD) / span;
  // Center the shorter axis inside the square viewBox.
  const offsetX = PAD + (VIEW_SIZE - 2 * PAD - (maxX - minX) * scale) / 2;
  const offsetY = PAD + (VIEW_SIZE - 2 * PAD - (maxY - minY) * scale) / 2;
  return {
    x: (v) => offsetX + (v - minX) * scale,
    y: (v) => offsetY + (v - minY) * scale,
  };
}

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  return node;
}

function nodeShape(style: ComputedStyle, cx: number, cy: number): SVGElement {
  const size = style.size;
  if (style.shape === "box") {
    return el("rect", {
      x: String(cx - size / 2),
      y: String(cy - size / 2),
      width: String(size),
      height: String(size),
      rx: "3",
      fill: style["fill-color"],
      stroke: style["stroke-color"],
      "stroke-width": String(style["stroke-width"]),
    });
  }
  if (style.shape === "icon") {
    const glyph = iconGlyph(style.icon);
    if (glyph !== null) {
      const text = el("text", {
        x: String(cx),
        y: String(cy),
        "font-size": String(size * 1.5),
        "text-anchor": "middle",
        "dominant-baseline": "central",
      });
      text.textContent = glyph;
      return text;
    }
    // Unknown icon name: fall through to a plain circle.
  }
  return el("circle", {
    cx: String(cx),
    cy: String(cy),
    r: String(size / 2),
    fill: style["fill-color"],
    stroke: style["stroke-color"],
    "stroke-width": String(style["stroke-width"]),
  });
}

export function renderGraph(
  svg: SVGSVGElement,
  state: GraphState,
  rules: StyleRule[],
  options: RenderOptions = {},
): void {
  const selected = options.selected ?? null;
  svg.setAttribute("viewBox", `0 0 ${VIEW_SIZE} ${VIEW_SIZE}`);
  while (svg.firstChild) {
    svg.removeChild(svg.firstChild);
  }

  const graphStyle = resolveStyle(rules, "graph");
  const backdrop = el("rect", {
    x: "0",
    y: "0",
    width: String(VIEW_SIZE),
    height: String(VIEW_SIZE),
    fill: graphStyle.background,
  });
  backdrop.addEventListener("click", () => options.onBackgroundClick?.());
  svg.appendChild(backdrop);

  const project = fitProjection(state.positions);

  for (const edge of state.edges.values()) {
    const from = state.positions.get(edge.from);
    const to = state.positions.get(edge.to);
    if (!from || !to) {
      continue; // endpoint not placed yet (or mid-eviction)
    }
    const style = resolveStyle(rules, "edge");
    svg.appendChild(el("line", {
      x1: String(project.x(from[0])),
      y1: String(project.y(from[1])),
      x2: String(project.x(to[0])),
      y2: String(project.y(to[1])),
      stroke: style["stroke-color"],
      "stroke-width": String(style["stroke-width"]),
    }));
  }

  for (const node of state.nodes.values()) {
    const position = state.positions.get(node.id);
    if (!position) {
      continue;
    }
    const cx = project.x(position[0]);
    const cy = project.y(position[1]);
    const style = resolveStyle(rules, "node", node.classes, selected === node.id);
    const group = el("g", { cursor: "pointer" });
    group.addEventListener("click", (ev) => {
      ev.stopPropagation();
      options.onNodeClick?.(node.id);
    });
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = node.label;
    group.appendChild(title);
    group.appendChild(nodeShape(style, cx, cy));
    if (style["label-visible"]) {
      const label = el("text", {
        x: String(cx),
        y: String(cy + style.size / 2 + 16),
        "font-size": "15",
        "text-anchor": "middle",
        fill: "#212529",
      });
      label.textContent = node.label;
      group.appendChild(label);
    }
    svg.appendChild(group);
  }
}
