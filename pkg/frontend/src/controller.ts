import type { K, RecommendResponse } from './types';
import type { UiState } from './state';
import { applyResponse, editText, initialState, lockFont } from './state';

export const DEBOUNCE_MS = 300;

/** The one service call the controller needs; ApiClient satisfies it. */
export interface RecommendApi {
  recommend(text: string, k: number): Promise<RecommendResponse>;
}

type Listener = (state: UiState) => void;

/**
 * Drives the recommendation flow: keystrokes are debounced (300 ms), at most
 * one request is in flight at a time, and a response is applied only when it
 * still matches the latest input revision; anything stale is discarded.
 */
export class RecommendController {
  state: UiState = initialState();

  private revision = 0;
  private firedRevision = -1;
  private appliedRevision = -1;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private inFlight = false;

  constructor(
    private readonly api: RecommendApi,
    private readonly listener: Listener,
    private readonly debounceMs: number = DEBOUNCE_MS,
  ) {}

  setText(text: string): void {
    this.revision += 1;
    this.update(editText(this.state, text));
    if (this.timer !== null) clearTimeout(this.timer);
    if (text.trim() === '') {
      this.timer = null; // previews cleared by editText; nothing to request
      return;
    }
    const revision = this.revision;
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.fire(revision);
    }, this.debounceMs);
  }

  setK(k: K): void {
    if (k === this.state.k) return;
    this.revision += 1;
    this.update({ ...this.state, k });
    if (this.state.draftText.trim() !== '') {
      void this.fire(this.revision);
    }
  }

  lock(fontId: number): void {
    this.update(lockFont(this.state, fontId));
  }

  private async fire(revision: number): Promise<void> {
    if (revision !== this.revision) return; // superseded before it started
    if (this.inFlight) return; // completion handler re-fires for the latest revision
    this.inFlight = true;
    this.firedRevision = revision;
    this.update({ ...this.state, requestInFlight: true });
    try {
      const response = await this.api.recommend(this.state.draftText, this.state.k);
      if (this.firedRevision === this.revision && this.revision > this.appliedRevision) {
        this.appliedRevision = this.revision;
        this.update({ ...applyResponse(this.state, response), requestInFlight: false });
      } else {
        this.update({ ...this.state, requestInFlight: false });
      }
    } catch (error) {
      this.update({
        ...this.state,
        requestInFlight: false,
        banner: `Recommendation request failed: ${error instanceof Error ? error.message : error}`,
      });
    } finally {
      this.inFlight = false;
      // input moved on while we were busy: fetch once more for the newest text
      if (this.revision !== this.firedRevision && this.state.draftText.trim() !== '') {
        void this.fire(this.revision);
      }
    }
  }

  private update(state: UiState): void {
    this.state = state;
    this.listener(state);
  }
}
