import { assign } from "./assignment.js";
import { ClassLetter, ExtractResponse, HighlightResponse, SpanEntry } from "./types.js";

/** Colorblind-safe per-class tints (kept in sync with the report figures). */
export const CLASS_COLORS: Record<ClassLetter, string> = {
  P: "#0072B2",
  I: "#D55E00",
  O: "#009E73",
  A: "#CC79A7",
  M: "#56B4E9",
  R: "#E69F00",
  C: "#999999",
};

export interface SentenceView {
  text: string;
  charStart: number;
  classes: ClassLetter[]; // assigned ∩ enabled, recomputed client-side
  spans: SpanEntry[];
}

/**
 * Build the annotated document view from a *cached* response. This is a
 * pure function of (response, threshold, enabledClasses): moving the
 * threshold slider re-runs it locally and must not trigger any request.
 */
export function buildHighlightView(
  response: HighlightResponse,
  threshold: number,
  enabledClasses: ClassLetter[],
  policy: "threshold" | "argmax" = "threshold",
  extract?: ExtractResponse,
): SentenceView[] {
  const enabled = new Set(enabledClasses);
  return response.sentences.map((sentence, index) => {
    const assigned = assign(sentence.probabilities, policy, threshold);
    const spans: SpanEntry[] = [];
    if (extract) {
      for (const [cls, entries] of Object.entries(extract.spans)) {
        if (!enabled.has(cls as ClassLetter)) continue;
        for (const entry of entries ?? []) {
          if (entry.sentence_index === index && !entry.is_no_answer) {
            spans.push(entry);
          }
        }
      }
    }
    return {
      text: sentence.text,
      charStart: sentence.char_start,
      classes: assigned.filter((c) => enabled.has(c)),
      spans,
    };
  });
}

/** Render a view into a container element (browser only). */
export function renderToElement(container: HTMLElement, views: SentenceView[]): void {
  container.textContent = "";
  for (const view of views) {
    const el = document.createElement("span");
    el.className = "sentence";
    if (view.classes.length > 0) {
      el.style.backgroundColor = `${CLASS_COLORS[view.classes[0]]}33`;
      el.style.boxShadow = view.classes
        .slice(1)
        .map((c, i) => `0 ${2 * (i + 1)}px 0 ${CLASS_COLORS[c]}`)
        .join(", ");
      el.title = view.classes.join(", ");
    }
    if (view.spans.length === 0) {
      el.textContent = view.text + " ";
    } else {
      // underline extracted spans inside the sentence
      let cursor = 0;
      const ordered = [...view.spans].sort((a, b) => a.start_char - b.start_char);
      for (const span of ordered) {
        if (span.start_char > cursor) {
          el.appendChild(document.createTextNode(view.text.slice(cursor, span.start_char)));
        }
        const mark = document.createElement("u");
        mark.textContent = view.text.slice(span.start_char, span.end_char);
        el.appendChild(mark);
        cursor = Math.max(cursor, span.end_char);
      }
      el.appendChild(document.createTextNode(view.text.slice(cursor) + " "));
    }
    container.appendChild(el);
  }
}
