import { ApiClient } from "./api.js";
import { buildHighlightView, SentenceView } from "./highlights.js";
import { ScreeningSession } from "./session.js";
import { ClassLetter, Decision, ExtractResponse } from "./types.js";

/**
 * DOM-free orchestration between the session store, the API client and
 * the highlight view. The browser layer only forwards events here and
 * paints the returned view models.
 *
 * Classification happens once per abstract (on selection); threshold and
 * class-toggle changes re-render from the cached response.
 */
export class ScreeningController {
  private currentId: string | null = null;
  private extracts = new Map<string, ExtractResponse>();

  constructor(
    readonly session: ScreeningSession,
    private client: ApiClient,
  ) {}

  async selectAbstract(id: string): Promise<SentenceView[]> {
    const item = this.session.queue.find((q) => q.id === id);
    if (!item) {
      throw new Error(`unknown abstract ${id}`);
    }
    this.currentId = id;
    if (!this.session.cachedResponse(id)) {
      const response = await this.client.classify(item.text, {
        threshold: this.session.threshold,
      });
      this.session.cacheResponse(id, response);
    }
    return this.render();
  }

  /** Slider move: pure local recomputation from the cached probabilities. */
  setThreshold(threshold: number): SentenceView[] {
    this.session.setThreshold(threshold);
    return this.render();
  }

  toggleClass(cls: ClassLetter, enabled: boolean): SentenceView[] {
    this.session.toggleClass(cls, enabled);
    return this.render();
  }

  async loadSpans(classes?: ClassLetter[]): Promise<SentenceView[]> {
    if (this.currentId === null) {
      throw new Error("no abstract selected");
    }
    const item = this.session.queue.find((q) => q.id === this.currentId)!;
    if (!this.extracts.has(item.id)) {
      this.extracts.set(item.id, await this.client.extract(item.text, classes));
    }
    return this.render();
  }

  render(): SentenceView[] {
    if (this.currentId === null) {
      return [];
    }
    const response = this.session.cachedResponse(this.currentId);
    if (!response) {
      return [];
    }
    return buildHighlightView(
      response,
      this.session.threshold,
      this.session.enabledClasses,
      "threshold",
      this.extracts.get(this.currentId),
    );
  }

  decide(decision: Decision): void {
    if (this.currentId === null) {
      throw new Error("no abstract selected");
    }
    this.session.recordDecision(this.currentId, decision);
  }

  undo(): void {
    if (this.currentId !== null) {
      this.session.undoDecision(this.currentId);
    }
  }

  requestCounts(): Record<string, number> {
    return { ...this.client.counts };
  }
}
