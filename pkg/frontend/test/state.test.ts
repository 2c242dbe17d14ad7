import { describe, expect, it } from 'vitest';

import {
  applyResponse,
  distributionValid,
  editText,
  exportLock,
  initialState,
  lockFont,
} from '../src/state';
import { simpleResponse, tiedResponse } from './helpers';

describe('distributionValid', () => {
  it('accepts sums within 0.01', () => {
    expect(distributionValid([0.5, 0.5])).toBe(true);
    expect(distributionValid([0.5, 0.505])).toBe(true);
  });

  it('rejects bad sums and negative entries', () => {
    expect(distributionValid([0.5, 0.6])).toBe(false);
    expect(distributionValid([1.2, -0.2])).toBe(false);
  });
});

describe('applyResponse', () => {
  it('stores a valid response', () => {
    const state = applyResponse(initialState(), tiedResponse());
    expect(state.lastResponse?.top).toHaveLength(4);
    expect(state.banner).toBeNull();
  });

  it('never displays an invalid distribution', () => {
    const seeded = applyResponse(initialState(), tiedResponse());
    const bad = { ...simpleResponse(), distribution: new Array(10).fill(0.2) };
    const state = applyResponse(seeded, bad);
    expect(state.lastResponse).toBe(seeded.lastResponse); // last good kept
    expect(state.banner).toMatch(/invalid distribution/);
  });

  it('clears a lock whose font left the list, with a notice', () => {
    let state = applyResponse(initialState(), tiedResponse());
    state = lockFont(state, 3);
    state = applyResponse(state, simpleResponse(0));
    expect(state.lockedFont).toBeNull();
    expect(state.banner).toMatch(/no longer recommended/);
  });

  it('keeps a lock whose font is still listed', () => {
    let state = applyResponse(initialState(), tiedResponse());
    state = lockFont(state, 0);
    state = applyResponse(state, simpleResponse(0));
    expect(state.lockedFont).toBe(0);
  });
});

describe('lock and export', () => {
  it('export carries text, id, and matching name', () => {
    let state = editText(initialState(), 'Grand Opening Sale');
    state = applyResponse(state, tiedResponse());
    state = lockFont(state, 1);
    expect(exportLock(state)).toEqual({
      text: 'Grand Opening Sale',
      font_id: 1,
      font_name: 'Blakely',
    });
  });

  it('no export without a lock', () => {
    expect(exportLock(initialState())).toBeNull();
  });

  it('lock requires membership in the top list', () => {
    const state = lockFont(applyResponse(initialState(), simpleResponse(4)), 5);
    expect(state.lockedFont).toBeNull();
  });
});
