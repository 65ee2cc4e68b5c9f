/** Suggestion picker plus the per-resolution feature table. */

import { ApiClient, FeatureTable, Suggestions } from "./api.js";
import { ViewState } from "./state.js";

export class SuggestionPanel {
  readonly element: HTMLDivElement;
  private list: HTMLUListElement;
  private table: HTMLTableElement;
  private status: HTMLSpanElement;

  constructor(
    root: HTMLElement,
    private api: ApiClient,
    private state: ViewState,
    private onPick: (r: number) => void,
  ) {
    this.element = document.createElement("div");
    this.element.className = "panel";
    this.status = document.createElement("span");
    this.status.className = "status";
    this.list = document.createElement("ul");
    this.list.className = "suggestions";
    this.table = document.createElement("table");
    this.table.className = "features";
    this.element.append(this.status, this.list, this.table);
    root.appendChild(this.element);
  }

  async load(): Promise<Suggestions> {
    this.status.textContent = "computing suggestions…";
    const suggestions = await this.api.suggest();
    this.status.textContent = suggestions.resolutions.length
      ? ""
      : "no structural changes detected";
    this.list.textContent = "";
    for (const peak of suggestions.peaks) {
      const li = document.createElement("li");
      const btn = document.createElement("button");
      btn.textContent = `r = ${peak.resolution}`;
      btn.title = `${peak.classification}; prominence ${peak.prominence.toFixed(2)}`;
      btn.dataset.resolution = String(peak.resolution);
      btn.addEventListener("click", () => this.onPick(peak.resolution));
      li.appendChild(btn);
      this.list.appendChild(li);
    }
    if (suggestions.resolutions.length) {
      const features = await this.api.features(suggestions.resolutions);
      this.renderFeatures(features);
    }
    return suggestions;
  }

  private renderFeatures(f: FeatureTable): void {
    const fmt = (x: number | null) => (x === null ? "–" : x.toPrecision(3));
    const rows: [string, (number | null)[]][] = [
      ["burstiness", f.burstiness],
      ["edge lifetime", f.edge_lifetime],
      ["stability (norm.)", normalize(f.stability)],
      ["1 − fidelity (norm.)", inverseNormalized(f.fidelity)],
    ];
    this.table.textContent = "";
    const head = this.table.insertRow();
    head.insertCell().textContent = "feature";
    for (const r of f.resolutions) {
      head.insertCell().textContent = `r=${r}`;
    }
    for (const [name, values] of rows) {
      const tr = this.table.insertRow();
      tr.insertCell().textContent = name;
      for (const v of values) tr.insertCell().textContent = fmt(v);
    }
  }
}

function normalize(xs: (number | null)[]): (number | null)[] {
  const vals = xs.filter((x): x is number => x !== null);
  const max = Math.max(...vals, 0);
  return xs.map((x) => (x === null || max === 0 ? x : x / max));
}

function inverseNormalized(xs: (number | null)[]): (number | null)[] {
  return normalize(xs).map((x) => (x === null ? null : 1 - x));
}
