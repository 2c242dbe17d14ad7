import type { RecommendResponse, TopEntry } from '../src/types';

export function entry(font_id: number, name: string, score: number): TopEntry {
  return { font_id, name, css: name.toLowerCase().replace(/ /g, '-'), score };
}

/** A plausible k=3 response with a boundary tie expanding it to 4 fonts. */
export function tiedResponse(): RecommendResponse {
  return {
    distribution: [0.25, 0.2, 0.15, 0.15, 0.05, 0.05, 0.05, 0.04, 0.03, 0.03],
    top: [
      entry(0, 'Source Sans Pro', 0.25),
      entry(1, 'Blakely', 0.2),
      entry(2, 'FF Ernestine Pro', 0.15),
      entry(3, 'FF Market Web', 0.15),
    ],
    k: 3,
    model_id: 'test-model',
  };
}

export function simpleResponse(topFont = 0): RecommendResponse {
  const distribution = new Array(10).fill(0.05);
  distribution[topFont] = 0.55;
  return {
    distribution,
    top: [entry(topFont, `Font ${topFont}`, 0.55)],
    k: 1,
    model_id: 'test-model',
  };
}

/** Controllable fake service: every call is recorded and resolved by hand. */
export class FakeApi {
  calls: { text: string; k: number }[] = [];
  private pending: {
    resolve: (r: RecommendResponse) => void;
    reject: (e: Error) => void;
  }[] = [];

  recommend(text: string, k: number): Promise<RecommendResponse> {
    this.calls.push({ text, k });
    return new Promise((resolve, reject) => {
      this.pending.push({ resolve, reject });
    });
  }

  resolveCall(index: number, response: RecommendResponse): void {
    this.pending[index].resolve(response);
  }

  rejectCall(index: number, message: string): void {
    this.pending[index].reject(new Error(message));
  }
}

/** Drain microtasks (and due 0 ms timers) under vi fake timers. */
export async function flush(): Promise<void> {
  await vi.advanceTimersByTimeAsync(0);
}
