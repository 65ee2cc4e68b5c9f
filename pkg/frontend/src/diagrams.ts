/** Three linked node-link diagrams (past / present / future markers).
 *
 * Positions come from a small deterministic spring simulation seeded by
 * the snapshot timestamp, so re-opening the same timestamp reproduces the
 * same picture.  Selection is synchronized with the barcode through the
 * shared view state.
 */

import { SnapshotPayload } from "./api.js";
import { ViewState, colorFor, mulberry32 } from "./state.js";

const SVGNS = "http://www.w3.org/2000/svg";
const SIZE = 240;

export function forceLayout(
  payload: SnapshotPayload,
  iterations = 80,
): Map<number, [number, number]> {
  const rnd = mulberry32(payload.index * 2654435761 + payload.resolution);
  const ids = payload.nodes.map((n) => n.id);
  const pos = new Map<number, [number, number]>();
  for (const id of ids) {
    pos.set(id, [SIZE / 2 + (rnd() - 0.5) * SIZE * 0.8, SIZE / 2 + (rnd() - 0.5) * SIZE * 0.8]);
  }
  const rest = 30;
  for (let it = 0; it < iterations; it++) {
    const force = new Map<number, [number, number]>(ids.map((id) => [id, [0, 0]]));
    // repulsion
    for (let i = 0; i < ids.length; i++) {
      for (let j = i + 1; j < ids.length; j++) {
        const [ax, ay] = pos.get(ids[i])!;
        const [bx, by] = pos.get(ids[j])!;
        let dx = ax - bx;
        let dy = ay - by;
        const d2 = Math.max(25, dx * dx + dy * dy);
        const f = 600 / d2;
        const d = Math.sqrt(d2);
        dx /= d;
        dy /= d;
        const fa = force.get(ids[i])!;
        const fb = force.get(ids[j])!;
        fa[0] += dx * f;
        fa[1] += dy * f;
        fb[0] -= dx * f;
        fb[1] -= dy * f;
      }
    }
    // springs
    for (const [u, v] of payload.edges) {
      const [ax, ay] = pos.get(u)!;
      const [bx, by] = pos.get(v)!;
      let dx = bx - ax;
      let dy = by - ay;
      const d = Math.max(1, Math.hypot(dx, dy));
      const f = 0.05 * (d - rest);
      dx /= d;
      dy /= d;
      const fu = force.get(u)!;
      const fv = force.get(v)!;
      fu[0] += dx * f;
      fu[1] += dy * f;
      fv[0] -= dx * f;
      fv[1] -= dy * f;
    }
    const cool = 1 - it / iterations;
    for (const id of ids) {
      const p = pos.get(id)!;
      const f = force.get(id)!;
      p[0] += Math.max(-8, Math.min(8, f[0])) * cool;
      p[1] += Math.max(-8, Math.min(8, f[1])) * cool;
      // soft centering
      p[0] += (SIZE / 2 - p[0]) * 0.01;
      p[1] += (SIZE / 2 - p[1]) * 0.01;
    }
  }
  return pos;
}

export class DiagramPanel {
  readonly containers: HTMLDivElement[] = [];
  private payloads: (SnapshotPayload | null)[] = [null, null, null];
  private tooltip: HTMLDivElement;
  labels: string[] = [];
  barOfNode: Map<number, number> = new Map();

  constructor(
    private root: HTMLElement,
    private state: ViewState,
    private onTypedTimestamp: (index: 0 | 1 | 2, t: number) => void,
  ) {
    this.tooltip = document.createElement("div");
    this.tooltip.className = "tooltip";
    this.tooltip.style.display = "none";
    root.appendChild(this.tooltip);
    for (let i = 0; i < 3; i++) {
      const div = document.createElement("div");
      div.className = "diagram";
      div.dataset.slot = String(i);
      const head = document.createElement("div");
      head.className = "diagram-head";
      const input = document.createElement("input");
      input.type = "number";
      input.className = "timestamp-input";
      input.addEventListener("change", () => {
        const v = Number(input.value);
        if (Number.isFinite(v) && v >= 0 && v <= state.maxTime) {
          input.setCustomValidity("");
          this.onTypedTimestamp(i as 0 | 1 | 2, v);
        } else {
          input.setCustomValidity("timestamp out of range");
        }
      });
      const expand = document.createElement("button");
      expand.className = "expand";
      expand.textContent = "⤢";
      expand.addEventListener("click", () => {
        div.classList.toggle("expanded");
        if (div.classList.contains("expanded")) state.expanded.add(i);
        else state.expanded.delete(i);
      });
      head.append(input, expand);
      const svg = document.createElementNS(SVGNS, "svg");
      svg.setAttribute("viewBox", `0 0 ${SIZE} ${SIZE}`);
      svg.setAttribute("class", "nodelink");
      div.append(head, svg);
      root.appendChild(div);
      this.containers.push(div);
    }
    state.subscribe((what) => {
      if (what === "selection") this.applySelection();
    });
  }

  setPayload(slot: 0 | 1 | 2, payload: SnapshotPayload | null): void {
    this.payloads[slot] = payload;
    this.renderSlot(slot);
  }

  private renderSlot(slot: number): void {
    const div = this.containers[slot];
    const svg = div.querySelector("svg")!;
    const input = div.querySelector("input") as HTMLInputElement;
    svg.textContent = "";
    const payload = this.payloads[slot];
    if (!payload) return;
    input.value = String(payload.index);
    const pos = forceLayout(payload);
    for (const [u, v] of payload.edges) {
      const [ax, ay] = pos.get(u)!;
      const [bx, by] = pos.get(v)!;
      const line = document.createElementNS(SVGNS, "line");
      line.setAttribute("x1", String(ax));
      line.setAttribute("y1", String(ay));
      line.setAttribute("x2", String(bx));
      line.setAttribute("y2", String(by));
      line.setAttribute("stroke", "#bbb");
      svg.appendChild(line);
    }
    for (const node of payload.nodes) {
      const [x, y] = pos.get(node.id)!;
      const c = document.createElementNS(SVGNS, "circle");
      c.setAttribute("cx", String(x));
      c.setAttribute("cy", String(y));
      c.setAttribute("r", "5");
      c.setAttribute("fill", colorFor(node.label, this.labels, this.state.colorblind));
      c.dataset.nodeId = String(node.id);
      c.dataset.label = node.label;
      c.dataset.component = String(node.component);
      c.addEventListener("mouseenter", (ev) => {
        this.tooltip.textContent = `${node.name} (${node.label})`;
        this.tooltip.style.display = "block";
      });
      c.addEventListener("mouseleave", () => {
        this.tooltip.style.display = "none";
      });
      c.addEventListener("click", (ev) => {
        if (this.state.selectMode === "labels") {
          this.state.toggleLabel(node.label, (ev as MouseEvent).ctrlKey);
        } else {
          const barId = this.barOfNode.get(node.component) ?? node.component;
          this.state.select({ kind: "component", barId });
        }
      });
      c.addEventListener("contextmenu", (ev) => {
        ev.preventDefault();
        this.state.clearSelection();
      });
      svg.appendChild(c);
    }
    this.applySelection();
  }

  applySelection(): void {
    const sel = this.state.selection;
    for (const div of this.containers) {
      div.querySelectorAll("circle").forEach((el) => {
        const c = el as SVGCircleElement;
        let active = true;
        if (sel.kind === "labels") active = sel.labels.includes(c.dataset.label ?? "");
        if (sel.kind === "component") {
          const barId = this.barOfNode.get(Number(c.dataset.component));
          active = (barId ?? Number(c.dataset.component)) === sel.barId;
        }
        c.setAttribute("opacity", active ? "1" : "0.15");
      });
    }
  }
}
