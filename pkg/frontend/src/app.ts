/** Application shell wiring the linked views together. */

import { ApiClient, LayoutSpec, Meta } from "./api.js";
import { BarcodeView } from "./barcode.js";
import { DiagramPanel } from "./diagrams.js";
import { SuggestionPanel } from "./panel.js";
import { ViewState } from "./state.js";

export class App {
  meta!: Meta;
  state!: ViewState;
  barcode!: BarcodeView;
  diagrams!: DiagramPanel;
  panel!: SuggestionPanel;
  spec: LayoutSpec | null = null;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private defaultResolution?: number,
  ) {}

  async init(): Promise<void> {
    this.meta = await this.api.meta();
    const r = this.defaultResolution ?? 2;
    this.state = new ViewState(r, this.meta.max_time);

    const controls = document.createElement("div");
    controls.className = "controls";
    controls.append(
      this.selectModeControl(),
      this.flowControl(),
      this.orderingControl(),
      this.filterControl(),
      this.paletteControl(),
    );
    const barcodeHost = document.createElement("div");
    barcodeHost.className = "barcode-host";
    const diagramHost = document.createElement("div");
    diagramHost.className = "diagram-host";
    const panelHost = document.createElement("div");
    panelHost.className = "panel-host";
    this.root.append(panelHost, controls, barcodeHost, diagramHost);

    this.barcode = new BarcodeView(barcodeHost, this.api, this.state, {
      onMarkerPlace: (t) => {
        this.state.placeMarkers(t);
        void this.refreshDiagrams([0, 1, 2]);
      },
      onMarkerDrag: (i, t) => {
        const before = this.state.markers?.[i];
        this.state.dragMarker(i, t);
        if (this.state.markers && this.state.markers[i] !== before) {
          void this.refreshDiagrams([i]);
        }
      },
    });
    this.barcode.setLabels(this.meta.labels);
    this.diagrams = new DiagramPanel(diagramHost, this.state, (i, t) => {
      const before = this.state.markers?.[i];
      this.state.setMarker(i, t);
      if (this.state.markers && this.state.markers[i] !== before) {
        void this.refreshDiagrams([i]);
      }
    });
    this.diagrams.labels = this.meta.labels;
    this.panel = new SuggestionPanel(panelHost, this.api, this.state, (picked) => {
      // re-picking a resolution resets the view state except filters
      this.state.selection = { kind: "none" };
      this.state.markers = null;
      this.state.setView({ resolution: picked });
      void this.reload();
    });

    this.state.subscribe((what) => {
      if (what === "selection" && this.state.showFlows) void this.barcode.loadFlows();
    });
    await this.reload();
  }

  async loadSuggestions(): Promise<void> {
    await this.panel.load();
  }

  async reload(): Promise<void> {
    this.spec = await this.barcode.load();
    this.syncComponentIndex();
  }

  /** Map component ids in snapshot payloads to bar ids via memberships. */
  private syncComponentIndex(): void {
    this.diagrams.barOfNode = new Map();
  }

  async refreshDiagrams(slots: (0 | 1 | 2)[]): Promise<void> {
    const markers = this.state.markers;
    if (!markers) return;
    for (const slot of slots) {
      const payload = await this.api.snapshot(this.state.resolution, markers[slot]);
      if (payload) {
        const index = new Map<number, number>();
        for (const n of payload.nodes) index.set(n.component, n.component);
        this.diagrams.barOfNode = index;
        this.diagrams.setPayload(slot, payload);
      }
    }
  }

  private selectModeControl(): HTMLElement {
    const label = document.createElement("label");
    label.textContent = "select by ";
    const sel = document.createElement("select");
    sel.className = "select-mode";
    for (const mode of ["component", "labels"]) {
      const opt = document.createElement("option");
      opt.value = mode;
      opt.textContent = mode;
      sel.appendChild(opt);
    }
    sel.addEventListener("change", () => {
      this.state.setView({ selectMode: sel.value as "component" | "labels" });
    });
    label.appendChild(sel);
    return label;
  }

  private flowControl(): HTMLElement {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.className = "flow-toggle";
    box.addEventListener("change", () => {
      this.state.setView({ showFlows: box.checked });
      void this.barcode.loadFlows();
    });
    label.append(box, document.createTextNode(" see flows under interaction"));
    return label;
  }

  private orderingControl(): HTMLElement {
    const label = document.createElement("label");
    label.textContent = "ordering ";
    const sel = document.createElement("select");
    sel.className = "ordering";
    for (const o of ["bottom", "center"]) {
      const opt = document.createElement("option");
      opt.value = o;
      opt.textContent = o;
      sel.appendChild(opt);
    }
    sel.addEventListener("change", () => {
      this.state.setView({ ordering: sel.value as "bottom" | "center" });
      void this.reload();
    });
    label.appendChild(sel);
    return label;
  }

  private filterControl(): HTMLElement {
    const span = document.createElement("span");
    const nodes = document.createElement("input");
    nodes.type = "number";
    nodes.className = "min-nodes";
    nodes.value = "0";
    const dur = document.createElement("input");
    dur.type = "number";
    dur.className = "min-duration";
    dur.value = "0";
    for (const el of [nodes, dur]) {
      el.addEventListener("change", () => {
        this.state.setView({
          minNodes: Number(nodes.value) || 0,
          minDuration: Number(dur.value) || 0,
        });
        void this.reload();
      });
    }
    span.append("min nodes ", nodes, " min duration ", dur);
    return span;
  }

  private paletteControl(): HTMLElement {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.className = "colorblind-toggle";
    box.addEventListener("change", () => {
      this.state.setView({ colorblind: box.checked });
      this.barcode.render();
    });
    label.append(box, document.createTextNode(" colorblind-safe palette"));
    return label;
  }
}
