/** Colored-barcode view: stacked per-track area bars with label-colored
 * segments, hover/click selection, flow overlays, and timestamp markers.
 */

import { ApiClient, FlowSet, LayoutSpec } from "./api.js";
import { ViewState, colorFor } from "./state.js";

const SVGNS = "http://www.w3.org/2000/svg";

export interface BarcodeHandlers {
  onMarkerPlace?: (t: number) => void;
  onMarkerDrag?: (index: 0 | 1 | 2, t: number) => void;
}

export class BarcodeView {
  readonly svg: SVGSVGElement;
  private spec: LayoutSpec | null = null;
  private flows: FlowSet | null = null;
  private labels: string[] = [];
  private hovered: number | null = null;
  private unitX = 8;
  private unitY = 10;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private state: ViewState,
    private handlers: BarcodeHandlers = {},
  ) {
    this.svg = document.createElementNS(SVGNS, "svg") as SVGSVGElement;
    this.svg.setAttribute("class", "barcode");
    root.appendChild(this.svg);
    this.svg.addEventListener("contextmenu", (ev) => {
      ev.preventDefault();
      this.state.clearSelection();
    });
    this.svg.addEventListener("dblclick", (ev) => {
      const t = this.timeAt(ev);
      if (t !== null) this.handlers.onMarkerPlace?.(t);
    });
    state.subscribe((what) => {
      if (what === "selection") this.applySelection();
      if (what === "markers") this.drawMarkers();
    });
  }

  setLabels(labels: string[]): void {
    this.labels = labels;
  }

  private timeAt(ev: MouseEvent): number | null {
    if (!this.spec) return null;
    const rect = this.svg.getBoundingClientRect();
    const x = ev.clientX - rect.left;
    const frac = rect.width > 0 ? x / rect.width : 0;
    return Math.round(frac * this.spec.snapshots);
  }

  async load(): Promise<LayoutSpec> {
    const spec = await this.api.layout(
      this.state.resolution,
      this.state.ordering,
      this.state.minNodes,
      this.state.minDuration,
    );
    this.spec = spec;
    this.flows = null;
    this.render();
    return spec;
  }

  async loadFlows(): Promise<void> {
    if (!this.spec || !this.state.showFlows) {
      this.flows = null;
      this.drawFlows();
      return;
    }
    const sel = this.state.selection;
    if (sel.kind === "component") {
      this.flows = await this.api.flows(this.spec.resolution, "component", String(sel.barId));
    } else if (sel.kind === "labels") {
      this.flows = await this.api.flows(this.spec.resolution, "label", sel.labels.join(","));
    } else {
      this.flows = null;
    }
    this.drawFlows();
  }

  barElements(): SVGGElement[] {
    return Array.from(this.svg.querySelectorAll("g.bar")) as SVGGElement[];
  }

  render(): void {
    const spec = this.spec;
    if (!spec) return;
    this.svg.textContent = "";
    const totalH = spec.track_heights.reduce((a, b) => a + b, 0) + spec.tracks;
    this.svg.setAttribute(
      "viewBox",
      `0 0 ${spec.snapshots * this.unitX} ${Math.max(1, totalH) * this.unitY}`,
    );
    const flipY = (y: number) => (totalH - y) * this.unitY;

    for (const bar of spec.bars) {
      const g = document.createElementNS(SVGNS, "g");
      g.setAttribute("class", "bar");
      g.dataset.barId = String(bar.id);
      g.dataset.track = String(bar.track);
      const labelsHere = new Set<string>();
      for (let i = 0; i <= bar.death_index - bar.birth_index; i++) {
        const k = bar.birth_index + i;
        let y = bar.offsets[i] + bar.track; // +track: one unit of track gap
        const width = this.unitX * (bar.birth_index === bar.death_index ? 0.9 : 1);
        for (const seg of bar.segments[i]) {
          labelsHere.add(seg.label);
          const rect = document.createElementNS(SVGNS, "rect");
          rect.setAttribute("x", String(k * this.unitX));
          rect.setAttribute("width", String(width));
          rect.setAttribute("y", String(flipY(y + seg.count)));
          rect.setAttribute("height", String(seg.count * this.unitY));
          rect.setAttribute("fill", colorFor(seg.label, this.labels, this.state.colorblind));
          rect.dataset.label = seg.label;
          rect.dataset.index = String(k);
          g.appendChild(rect);
          y += seg.count;
        }
      }
      g.dataset.labels = [...labelsHere].sort().join(",");
      g.addEventListener("mouseenter", () => this.hover(bar.id));
      g.addEventListener("mouseleave", () => this.hover(null));
      g.addEventListener("click", (ev) => {
        if (this.state.selectMode === "component") {
          this.state.select({ kind: "component", barId: bar.id });
        } else {
          const label = (ev.target as SVGElement).dataset?.label;
          if (label) this.state.toggleLabel(label, ev.ctrlKey);
        }
      });
      this.svg.appendChild(g);
    }
    this.applySelection();
    this.drawMarkers();
    this.drawFlows();
  }

  hover(barId: number | null): void {
    this.hovered = barId;
    this.applySelection();
  }

  /** Dim everything that is not hovered/selected; restore fully otherwise. */
  applySelection(): void {
    const sel = this.state.selection;
    for (const g of this.barElements()) {
      const id = Number(g.dataset.barId);
      let active = true;
      if (this.hovered !== null) {
        active = this.state.selectMode === "component"
          ? id === this.hovered
          : this.sharesHoverLabel(g);
      } else if (sel.kind === "component") {
        active = id === sel.barId;
      } else if (sel.kind === "labels") {
        const labels = (g.dataset.labels ?? "").split(",");
        active = sel.labels.some((l) => labels.includes(l));
      }
      g.setAttribute("opacity", active ? "1" : "0.15");
      g.classList.toggle("dimmed", !active);
    }
  }

  private sharesHoverLabel(g: SVGGElement): boolean {
    if (this.hovered === null) return true;
    const hoveredEl = this.svg.querySelector(`g.bar[data-bar-id="${this.hovered}"]`);
    const hovLabels = (hoveredEl as SVGGElement | null)?.dataset.labels?.split(",") ?? [];
    const labels = (g.dataset.labels ?? "").split(",");
    return hovLabels.some((l) => labels.includes(l));
  }

  private drawMarkers(): void {
    if (!this.spec) return;
    this.svg.querySelectorAll("line.marker").forEach((el) => el.remove());
    const markers = this.state.markers;
    if (!markers) return;
    const viewBox = (this.svg.getAttribute("viewBox") ?? "0 0 1 1").split(" ");
    const height = Number(viewBox[3]);
    markers.forEach((t, i) => {
      const line = document.createElementNS(SVGNS, "line");
      line.setAttribute("class", "marker");
      line.dataset.markerIndex = String(i);
      const x = (t / Math.max(1, this.spec!.snapshots - 1)) * this.spec!.snapshots * this.unitX;
      line.setAttribute("x1", String(x));
      line.setAttribute("x2", String(x));
      line.setAttribute("y1", "0");
      line.setAttribute("y2", String(height));
      line.setAttribute("stroke", "#333");
      line.setAttribute("stroke-dasharray", "4 3");
      line.addEventListener("mousedown", () => {
        const move = (ev: MouseEvent) => {
          const t2 = this.timeAt(ev);
          if (t2 !== null) this.handlers.onMarkerDrag?.(i as 0 | 1 | 2, t2);
        };
        const up = () => {
          this.svg.removeEventListener("mousemove", move);
          this.svg.removeEventListener("mouseup", up);
        };
        this.svg.addEventListener("mousemove", move);
        this.svg.addEventListener("mouseup", up);
      });
      this.svg.appendChild(line);
    });
  }

  private drawFlows(): void {
    this.svg.querySelectorAll("line.flow").forEach((el) => el.remove());
    const flows = this.flows;
    const spec = this.spec;
    if (!flows || !spec || !this.state.showFlows) return;
    const byId = new Map(spec.bars.map((b) => [b.id, b]));
    const viewBoxH = Number((this.svg.getAttribute("viewBox") ?? "0 0 1 1").split(" ")[3]);
    const mid = (barId: number, k: number): [number, number] | null => {
      const bar = byId.get(barId);
      if (!bar || k < bar.birth_index || k > bar.death_index) return null;
      const i = k - bar.birth_index;
      const y = bar.offsets[i] + bar.track + bar.heights[i] / 2;
      return [k * this.unitX + this.unitX / 2, viewBoxH - y * this.unitY];
    };
    const draw = (a: [number, number] | null, b: [number, number] | null, cls: string) => {
      if (!a || !b) return;
      const line = document.createElementNS(SVGNS, "line");
      line.setAttribute("class", `flow ${cls}`);
      line.setAttribute("x1", String(a[0]));
      line.setAttribute("y1", String(a[1]));
      line.setAttribute("x2", String(b[0]));
      line.setAttribute("y2", String(b[1]));
      line.setAttribute("stroke", "#555");
      this.svg.appendChild(line);
    };
    for (const f of flows.merges) {
      draw(mid(f.source, f.at_index), mid(f.target, Math.min(f.at_index + 1, spec.snapshots - 1)), "merge");
    }
    for (const f of flows.splits) {
      draw(mid(f.source, Math.max(f.at_index - 1, 0)), mid(f.target, f.at_index), "split");
    }
    for (const f of flows.label_flows) {
      draw(mid(f.source, f.from_index), mid(f.target, f.from_index + 1), "label");
    }
  }
}
