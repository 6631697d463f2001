import { ClassLetter, ExtractResponse, HighlightResponse } from "./types.js";

export interface ClassifyOptions {
  threshold?: number;
  policy?: "threshold" | "argmax";
  classes?: ClassLetter[];
}

export interface HealthPayload {
  status: string;
  loaded_models: { classifier: string | null; qa: Record<string, string> };
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/**
 * Thin client for the highlighting service. Requests are counted per
 * endpoint so the UI tests can prove that slider interaction never calls
 * the classifier.
 */
export class ApiClient {
  readonly counts: Record<string, number> = { classify: 0, extract: 0, health: 0 };

  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      const detail = await response.text();
      throw new Error(`${path} failed (${response.status}): ${detail}`);
    }
    return (await response.json()) as T;
  }

  async classify(text: string, options: ClassifyOptions = {}): Promise<HighlightResponse> {
    this.counts.classify += 1;
    return this.post<HighlightResponse>("/classify", { text, ...options });
  }

  async extract(text: string, classes?: ClassLetter[]): Promise<ExtractResponse> {
    this.counts.extract += 1;
    return this.post<ExtractResponse>("/extract", { text, classes });
  }

  async health(): Promise<HealthPayload> {
    this.counts.health += 1;
    const response = await this.fetchFn(`${this.baseUrl}/health`);
    return (await response.json()) as HealthPayload;
  }
}
