import type { K, LockExport, RecommendResponse } from './types';

/** Displayed distributions must sum to 1 within this tolerance. */
export const SUM_TOLERANCE = 0.01;

export interface UiState {
  draftText: string;
  k: K;
  lastResponse: RecommendResponse | null;
  lockedFont: number | null;
  requestInFlight: boolean;
  /** Non-blocking notice (network trouble, cleared locks, bad payloads). */
  banner: string | null;
}

export function initialState(): UiState {
  return {
    draftText: '',
    k: 3,
    lastResponse: null,
    lockedFont: null,
    requestInFlight: false,
    banner: null,
  };
}

export function distributionValid(distribution: number[], tolerance = SUM_TOLERANCE): boolean {
  const sum = distribution.reduce((a, b) => a + b, 0);
  return Math.abs(sum - 1) <= tolerance && distribution.every((p) => p >= 0);
}

/**
 * Apply a fresh response. Invalid distributions are rejected (the last good
 * preview stays); a lock whose font left the top list is cleared with a
 * notice.
 */
export function applyResponse(state: UiState, response: RecommendResponse): UiState {
  if (!distributionValid(response.distribution)) {
    return {
      ...state,
      banner: 'Service returned an invalid distribution; keeping the last preview.',
    };
  }
  const stillListed =
    state.lockedFont !== null && response.top.some((t) => t.font_id === state.lockedFont);
  return {
    ...state,
    lastResponse: response,
    lockedFont: stillListed ? state.lockedFont : null,
    banner:
      state.lockedFont !== null && !stillListed
        ? 'Your locked font is no longer recommended; lock cleared.'
        : state.banner,
  };
}

/** Editing invalidates a lock: the choice was made for different text. */
export function editText(state: UiState, text: string): UiState {
  const cleared = state.lockedFont !== null && text !== state.draftText;
  return {
    ...state,
    draftText: text,
    lockedFont: cleared ? null : state.lockedFont,
    banner: cleared ? 'Text changed; lock cleared.' : state.banner,
    lastResponse: text.trim() === '' ? null : state.lastResponse,
  };
}

export function lockFont(state: UiState, fontId: number): UiState {
  const inTop = state.lastResponse?.top.some((t) => t.font_id === fontId) ?? false;
  if (!inTop) {
    return { ...state, banner: `Font ${fontId} is not in the current recommendation list.` };
  }
  return { ...state, lockedFont: fontId, banner: null };
}

/** Payload offered for copy-to-clipboard once a font is locked. */
export function exportLock(state: UiState): LockExport | null {
  if (state.lockedFont === null || !state.lastResponse) return null;
  const entry = state.lastResponse.top.find((t) => t.font_id === state.lockedFont);
  if (!entry) return null;
  return { text: state.draftText, font_id: entry.font_id, font_name: entry.name };
}
