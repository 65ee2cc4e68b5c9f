import { describe, expect, it } from "vitest";

import { ViewState, colorFor, mulberry32 } from "../src/state.js";

describe("marker invariants", () => {
  it("places companions at t2 -/+ 10 clamped to range", () => {
    const s = new ViewState(2, 100);
    s.placeMarkers(50);
    expect(s.markers).toEqual([40, 50, 60]);
    s.placeMarkers(3);
    expect(s.markers).toEqual([0, 3, 13]);
    s.placeMarkers(99);
    expect(s.markers).toEqual([89, 99, 100]);
  });

  it("keeps t1 <= t2 <= t3 under drags", () => {
    const s = new ViewState(2, 100);
    s.placeMarkers(50);
    s.dragMarker(0, 80); // cannot cross t2
    expect(s.markers).toEqual([50, 50, 60]);
    s.dragMarker(2, 10);
    expect(s.markers).toEqual([50, 50, 50]);
    s.dragMarker(1, 0);
    expect(s.markers).toEqual([50, 50, 50]);
    s.dragMarker(1, 200);
    expect(s.markers).toEqual([50, 50, 50]);
    s.dragMarker(2, 70);
    s.dragMarker(1, 65);
    expect(s.markers).toEqual([50, 65, 70]);
  });
});

describe("selection", () => {
  it("round-trips to the exact unselected state", () => {
    const s = new ViewState(2, 10);
    const before = JSON.stringify(s.selection);
    s.select({ kind: "component", barId: 3 });
    s.clearSelection();
    expect(JSON.stringify(s.selection)).toBe(before);
  });

  it("supports multi-label toggling", () => {
    const s = new ViewState(2, 10);
    s.toggleLabel("a", false);
    s.toggleLabel("b", true);
    expect(s.selection).toEqual({ kind: "labels", labels: ["a", "b"] });
    s.toggleLabel("a", true);
    expect(s.selection).toEqual({ kind: "labels", labels: ["b"] });
    s.toggleLabel("b", true);
    expect(s.selection).toEqual({ kind: "none" });
  });

  it("notifies subscribers", () => {
    const s = new ViewState(2, 10);
    const events: string[] = [];
    s.subscribe((what) => events.push(what));
    s.select({ kind: "labels", labels: ["x"] });
    s.placeMarkers(5);
    s.setView({ showFlows: true });
    expect(events).toEqual(["selection", "markers", "view"]);
  });
});

describe("deterministic helpers", () => {
  it("mulberry32 reproduces sequences per seed", () => {
    const a = mulberry32(42);
    const b = mulberry32(42);
    const c = mulberry32(43);
    const sa = [a(), a(), a()];
    const sb = [b(), b(), b()];
    expect(sa).toEqual(sb);
    expect(sa).not.toEqual([c(), c(), c()]);
  });

  it("palette is stable per label and differs for colorblind mode", () => {
    const labels = ["red", "blue"];
    expect(colorFor("red", labels, false)).toBe(colorFor("red", labels, false));
    expect(colorFor("red", labels, false)).not.toBe(colorFor("blue", labels, false));
    expect(colorFor("red", labels, true)).not.toBe(colorFor("red", labels, false));
  });
});
