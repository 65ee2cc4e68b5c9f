/** Shared view state for the linked views.
 *
 * Invariants: the three timestamp markers stay ordered t1 <= t2 <= t3 and
 * inside [0, maxTime]; clearing a selection restores the exact unselected
 * state.  Views subscribe to change notifications; they never compute
 * persistence client-side.
 */

export type Selection =
  | { kind: "none" }
  | { kind: "labels"; labels: string[] }
  | { kind: "component"; barId: number };

export const MARKER_SPREAD = 10;

export type Listener = (what: "selection" | "markers" | "view") => void;

export class ViewState {
  resolution: number;
  ordering: "bottom" | "center" = "bottom";
  minNodes = 0;
  minDuration = 0;
  selection: Selection = { kind: "none" };
  selectMode: "component" | "labels" = "component";
  showFlows = false;
  colorblind = false;
  markers: [number, number, number] | null = null;
  expanded = new Set<number>();
  maxTime: number;

  private listeners: Listener[] = [];

  constructor(resolution: number, maxTime: number) {
    this.resolution = resolution;
    this.maxTime = maxTime;
  }

  subscribe(fn: Listener): void {
    this.listeners.push(fn);
  }

  private emit(what: "selection" | "markers" | "view"): void {
    for (const fn of this.listeners) fn(what);
  }

  private clamp(t: number): number {
    return Math.max(0, Math.min(this.maxTime, Math.round(t)));
  }

  /** Double-click near t: center marker there, companions at t -/+ 10. */
  placeMarkers(t2: number): void {
    const c = this.clamp(t2);
    this.markers = [this.clamp(c - MARKER_SPREAD), c, this.clamp(c + MARKER_SPREAD)];
    this.emit("markers");
  }

  /** Drag one marker; the ordering invariant clamps it between its
   * neighbours rather than letting markers cross. */
  dragMarker(index: 0 | 1 | 2, t: number): void {
    if (!this.markers) return;
    let v = this.clamp(t);
    const [a, b, c] = this.markers;
    if (index === 0) v = Math.min(v, b);
    if (index === 1) v = Math.max(a, Math.min(v, c));
    if (index === 2) v = Math.max(v, b);
    const next: [number, number, number] = [...this.markers];
    next[index] = v;
    this.markers = next;
    this.emit("markers");
  }

  setMarker(index: 0 | 1 | 2, t: number): void {
    this.dragMarker(index, t);
  }

  select(sel: Selection): void {
    this.selection = sel;
    this.emit("selection");
  }

  toggleLabel(label: string, additive: boolean): void {
    if (!additive || this.selection.kind !== "labels") {
      this.select({ kind: "labels", labels: [label] });
      return;
    }
    const labels = new Set(this.selection.labels);
    if (labels.has(label)) labels.delete(label);
    else labels.add(label);
    this.select(
      labels.size ? { kind: "labels", labels: [...labels].sort() } : { kind: "none" },
    );
  }

  clearSelection(): void {
    this.select({ kind: "none" });
  }

  setView(patch: Partial<Pick<ViewState, "resolution" | "ordering" | "minNodes" | "minDuration" | "showFlows" | "colorblind" | "selectMode">>): void {
    Object.assign(this, patch);
    this.emit("view");
  }
}

/** Deterministic small RNG so node-link layouts are stable per timestamp. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const PALETTE = [
  "#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2",
  "#eeca3b", "#b279a2", "#ff9da6", "#9d755d", "#bab0ac",
];

const PALETTE_CB = [
  "#0072b2", "#e69f00", "#009e73", "#cc79a7", "#56b4e9",
  "#d55e00", "#f0e442", "#999999", "#000000", "#7f3c8d",
];

export function colorFor(label: string, labels: string[], colorblind: boolean): string {
  const palette = colorblind ? PALETTE_CB : PALETTE;
  const idx = Math.max(0, labels.indexOf(label));
  return palette[idx % palette.length];
}
