import type { FontInfo, RecommendResponse } from './types';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

/** Thin JSON client for the recommendation service. */
export class ApiClient {
  constructor(readonly baseUrl: string) {}

  async fonts(): Promise<FontInfo[]> {
    return this.get('/api/fonts');
  }

  async health(): Promise<{ status: string; model_id: string }> {
    return this.get('/healthz');
  }

  async recommend(text: string, k: number): Promise<RecommendResponse> {
    const response = await fetch(`${this.baseUrl}/api/recommend`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ text, k }),
    });
    return this.parse(response);
  }

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`);
    return this.parse(response);
  }

  private async parse<T>(response: Response): Promise<T> {
    const payload = await response.json();
    if (!response.ok) {
      const code = typeof payload?.error === 'string' ? payload.error : 'http_error';
      throw new ApiError(response.status, code, payload?.message ?? `HTTP ${response.status}`);
    }
    return payload as T;
  }
}
