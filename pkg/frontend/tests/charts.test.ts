import { describe, expect, it } from "vitest";

import { Snapshot } from "../src/api.js";
import { CURVES_HEADER, buildCurvesCsv, fmtG12, linePoints } from "../src/charts.js";
import { SessionStore } from "../src/state.js";

describe("fmtG12", () => {
  it("matches the simulator's %.12g formatting on typical values", () => {
    expect(fmtG12(0)).toBe("0");
    expect(fmtG12(40)).toBe("40");
    expect(fmtG12(0.5)).toBe("0.5");
    expect(fmtG12(32.285714285714285)).toBe("32.2857142857");
    expect(fmtG12(1e-13)).toBe("1e-13");
    expect(fmtG12(1e-7)).toBe("1e-07");
  });
});

describe("curves CSV export", () => {
  it("reproduces the documented header and row shape", () => {
    const store = new SessionStore();
    const snap: Snapshot = {
      session: "s1",
      tick: 0,
      status: "paused",
      levels: ["membrane", "cytoplasm"],
      agents: {
        EGFR: { kind: "receptor", compartment: "membrane", ss: 0, ps: 0, as: 0, bound: false },
        Grb2: { kind: "protein", compartment: "cytoplasm", aac: 0, iac: 40, iic: 40 },
      },
      signals: {},
      trace: [],
    };
    store.applySnapshot(snap);
    store.applyDelta({
      tick: 1,
      changed_agents: {
        Grb2: { kind: "protein", compartment: "cytoplasm", aac: 2.5, iac: 37.5, iic: 40 },
      },
      removed_agents: [],
      new_trace: [{
        tick: 1, agent: "Grb2", rule: "Grb2/ipv/Sos",
        consumed: [], produced: [], level_span: [2, 2], error: null,
      }],
      new_signals: [],
    });

    const lines = buildCurvesCsv(store).trimEnd().split("\r\n");
    expect(lines[0]).toBe(CURVES_HEADER.join(","));
    expect(lines[1]).toBe("0,EGFR,membrane,,,0,0,0,0");
    expect(lines[2]).toBe("0,Grb2,cytoplasm,0,40,,,,0");
    expect(lines[3]).toBe("1,EGFR,membrane,,,0,0,0,0");
    expect(lines[4]).toBe("1,Grb2,cytoplasm,2.5,37.5,,,,1");
    expect(lines).toHaveLength(5);
  });
});

describe("chart geometry", () => {
  it("scales a series into the viewport", () => {
    expect(linePoints([0, 10], 100, 50, 10)).toBe("0.00,50.00 100.00,0.00");
    expect(linePoints([], 100, 50, 10)).toBe("");
  });
});
