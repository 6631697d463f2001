import { parseCsv, toCsv } from "./csv.js";
import { ClassLetter, CLASS_ORDER, Decision, DecisionRecord, HighlightResponse } from "./types.js";

export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

export interface QueueItem {
  id: string;
  text: string;
}

interface PersistedState {
  queue: QueueItem[];
  decisions: Record<string, DecisionRecord>;
  threshold: number;
  enabledClasses: ClassLetter[];
}

function defaultState(): PersistedState {
  return { queue: [], decisions: {}, threshold: 0.5, enabledClasses: [...CLASS_ORDER] };
}

/**
 * Reviewer session: the abstract queue, include/exclude decisions and the
 * UI state (threshold, enabled classes). Persisted locally; cached
 * classifier responses are kept in memory only, since they can always be
 * re-fetched.
 */
export class ScreeningSession {
  private state: PersistedState;
  private responses = new Map<string, HighlightResponse>();

  constructor(
    private storage: StorageLike,
    private key: string = "picoscreen-session",
    private now: () => string = () => new Date().toISOString(),
  ) {
    const raw = storage.getItem(key);
    this.state = raw ? { ...defaultState(), ...JSON.parse(raw) } : defaultState();
  }

  private save(): void {
    this.storage.setItem(this.key, JSON.stringify(this.state));
  }

  get queue(): readonly QueueItem[] {
    return this.state.queue;
  }

  get threshold(): number {
    return this.state.threshold;
  }

  get enabledClasses(): ClassLetter[] {
    return [...this.state.enabledClasses];
  }

  addAbstract(id: string, text: string): void {
    if (this.state.queue.some((item) => item.id === id)) {
      throw new Error(`abstract ${id} already queued`);
    }
    this.state.queue.push({ id, text });
    this.save();
  }

  cacheResponse(id: string, response: HighlightResponse): void {
    this.responses.set(id, response);
  }

  cachedResponse(id: string): HighlightResponse | undefined {
    return this.responses.get(id);
  }

  setThreshold(threshold: number): void {
    if (!(threshold >= 0 && threshold <= 1)) {
      throw new Error(`threshold must lie in [0, 1], got ${threshold}`);
    }
    this.state.threshold = threshold;
    this.save();
  }

  toggleClass(cls: ClassLetter, enabled: boolean): void {
    const set = new Set(this.state.enabledClasses);
    if (enabled) {
      set.add(cls);
    } else {
      set.delete(cls);
    }
    this.state.enabledClasses = CLASS_ORDER.filter((c) => set.has(c));
    this.save();
  }

  decisionFor(id: string): Decision {
    return this.state.decisions[id]?.decision ?? "UNDECIDED";
  }

  recordDecision(id: string, decision: Decision): DecisionRecord {
    if (!this.state.queue.some((item) => item.id === id)) {
      throw new Error(`unknown abstract ${id}`);
    }
    const record: DecisionRecord = {
      abstractId: id,
      decision,
      threshold: this.state.threshold,
      timestamp: this.now(),
    };
    this.state.decisions[id] = record;
    this.save();
    return record;
  }

  undoDecision(id: string): void {
    delete this.state.decisions[id];
    this.save();
  }

  decidedRecords(): DecisionRecord[] {
    return Object.values(this.state.decisions);
  }

  exportCsv(): string {
    const rows: string[][] = [["id", "decision", "threshold", "timestamp"]];
    for (const record of this.decidedRecords()) {
      rows.push([
        record.abstractId,
        record.decision,
        String(record.threshold),
        record.timestamp,
      ]);
    }
    return toCsv(rows);
  }

  importCsv(text: string): number {
    const rows = parseCsv(text);
    if (rows.length === 0) {
      return 0;
    }
    const [header, ...body] = rows;
    if (header.join(",") !== "id,decision,threshold,timestamp") {
      throw new Error("unrecognized decision CSV header");
    }
    let imported = 0;
    for (const [id, decision, threshold, timestamp] of body) {
      this.state.decisions[id] = {
        abstractId: id,
        decision: decision as Decision,
        threshold: Number(threshold),
        timestamp,
      };
      imported += 1;
    }
    this.save();
    return imported;
  }
}

/** In-memory stand-in for window.localStorage (tests, SSR). */
export class MemoryStorage implements StorageLike {
  private data = new Map<string, string>();

  getItem(key: string): string | null {
    return this.data.has(key) ? (this.data.get(key) as string) : null;
  }

  setItem(key: string, value: string): void {
    this.data.set(key, value);
  }
}
