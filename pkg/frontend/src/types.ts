export type ClassLetter = "P" | "I" | "O" | "A" | "M" | "R" | "C";

export const CLASS_ORDER: ClassLetter[] = ["P", "I", "O", "A", "M", "R", "C"];

export type Probabilities = Record<ClassLetter, number>;

export interface SentencePayload {
  text: string;
  char_start: number;
  probabilities: Probabilities;
  assigned: ClassLetter[];
}

export interface HighlightResponse {
  sentences: SentencePayload[];
  model: { lineage: string; kind: string };
  policy: { policy: string; threshold: number | null };
}

export interface SpanEntry {
  sentence_index: number;
  is_no_answer: boolean;
  text: string;
  start_char: number;
  end_char: number;
  doc_start: number;
  doc_end: number;
  span_score: number;
  no_answer_score: number;
}

export interface ExtractResponse {
  sentences: { text: string; char_start: number; probabilities: Probabilities | null }[];
  spans: Partial<Record<ClassLetter, SpanEntry[]>>;
  model: { qa: Record<string, string> };
}

export type Decision = "INCLUDE" | "EXCLUDE" | "UNSURE" | "UNDECIDED";

export interface DecisionRecord {
  abstractId: string;
  decision: Decision;
  threshold: number;
  timestamp: string;
}
