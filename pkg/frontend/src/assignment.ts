import { CLASS_ORDER, ClassLetter, Probabilities } from "./types.js";

/**
 * Client-side label assignment. Must agree exactly with the server's
 * assignment for the same probabilities and threshold, so the threshold
 * slider can re-assign labels from cached responses without a round-trip.
 */
export function assignThreshold(probs: Probabilities, threshold: number): ClassLetter[] {
  if (!(threshold >= 0 && threshold <= 1)) {
    throw new Error(`threshold must lie in [0, 1], got ${threshold}`);
  }
  return CLASS_ORDER.filter((c) => (probs[c] ?? 0) >= threshold);
}

/** Singleton set of the most probable class; ties break by class order. */
export function assignArgmax(probs: Probabilities): ClassLetter[] {
  let best: ClassLetter = CLASS_ORDER[0];
  for (const c of CLASS_ORDER) {
    if ((probs[c] ?? 0) > (probs[best] ?? 0)) {
      best = c;
    }
  }
  return [best];
}

export function assign(
  probs: Probabilities,
  policy: "threshold" | "argmax",
  threshold: number,
): ClassLetter[] {
  return policy === "argmax" ? assignArgmax(probs) : assignThreshold(probs, threshold);
}
