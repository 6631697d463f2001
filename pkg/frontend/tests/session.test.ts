import { describe, expect, it } from "vitest";

import { parseCsv, toCsv } from "../src/csv.js";
import { MemoryStorage, ScreeningSession } from "../src/session.js";

function makeSession(storage = new MemoryStorage()) {
  let tick = 0;
  const session = new ScreeningSession(storage, "test-session", () => {
    tick += 1;
    return `2026-08-10T12:00:0${tick}Z`;
  });
  return { session, storage };
}

describe("csv helpers", () => {
  it("round-trips quoting", () => {
    const rows = [
      ["id", "note"],
      ['a,"b"', "line\nbreak"],
      ["plain", "x"],
    ];
    expect(parseCsv(toCsv(rows))).toEqual(rows);
  });
});

describe("screening session", () => {
  it("persists decisions across re-open", () => {
    const storage = new MemoryStorage();
    const { session } = makeSession(storage);
    session.addAbstract("pm1", "Sixty patients were enrolled.");
    session.recordDecision("pm1", "INCLUDE");

    const reopened = new ScreeningSession(storage, "test-session");
    expect(reopened.decisionFor("pm1")).toBe("INCLUDE");
    expect(reopened.queue).toHaveLength(1);
  });

  it("rejects decisions for unknown abstracts", () => {
    const { session } = makeSession();
    expect(() => session.recordDecision("nope", "INCLUDE")).toThrow(/unknown/);
  });

  it("undo restores UNDECIDED", () => {
    const { session } = makeSession();
    session.addAbstract("pm1", "text.");
    session.recordDecision("pm1", "EXCLUDE");
    session.undoDecision("pm1");
    expect(session.decisionFor("pm1")).toBe("UNDECIDED");
  });

  it("records the threshold active at decision time", () => {
    const { session } = makeSession();
    session.addAbstract("pm1", "text.");
    session.setThreshold(0.8);
    const record = session.recordDecision("pm1", "UNSURE");
    expect(record.threshold).toBe(0.8);
  });

  it("exports three decisions as header plus three rows", () => {
    const { session } = makeSession();
    for (const id of ["pm1", "pm2", "pm3"]) {
      session.addAbstract(id, `${id} text.`);
    }
    session.recordDecision("pm1", "INCLUDE");
    session.recordDecision("pm2", "EXCLUDE");
    session.recordDecision("pm3", "UNSURE");
    const rows = parseCsv(session.exportCsv());
    expect(rows[0]).toEqual(["id", "decision", "threshold", "timestamp"]);
    expect(rows).toHaveLength(4);
  });

  it("round-trips decisions through CSV export/import", () => {
    const { session } = makeSession();
    for (const id of ["pm1", "pm2", "pm3"]) {
      session.addAbstract(id, `${id} text.`);
    }
    session.setThreshold(0.35);
    session.recordDecision("pm1", "INCLUDE");
    session.recordDecision("pm2", "EXCLUDE");
    session.recordDecision("pm3", "UNSURE");
    const exported = session.exportCsv();

    const { session: fresh } = makeSession();
    expect(fresh.importCsv(exported)).toBe(3);
    expect(fresh.decidedRecords()).toEqual(session.decidedRecords());
    expect(fresh.exportCsv()).toBe(exported);
  });

  it("rejects a foreign CSV header", () => {
    const { session } = makeSession();
    expect(() => session.importCsv("a,b,c\n1,2,3\r\n")).toThrow(/header/);
  });

  it("class toggles persist in class order", () => {
    const storage = new MemoryStorage();
    const { session } = makeSession(storage);
    session.toggleClass("P", false);
    session.toggleClass("P", true);
    session.toggleClass("M", false);
    const reopened = new ScreeningSession(storage, "test-session");
    expect(reopened.enabledClasses).toEqual(["P", "I", "O", "A", "R", "C"]);
  });
});
