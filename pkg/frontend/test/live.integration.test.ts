/**
 * Contract test against a live service. Skipped unless FONTSENSE_API_URL
 * points at a running `fontsense serve` instance with a trained model, e.g.
 *
 *   FONTSENSE_API_URL=http://127.0.0.1:8321 npm test
 */
import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api';
import { RecommendController } from '../src/controller';
import { distributionValid } from '../src/state';

const BASE = process.env.FONTSENSE_API_URL;

describe.skipIf(!BASE)('live service contract', () => {
  const api = new ApiClient(BASE!);

  it('reports healthy with a model id', async () => {
    const health = await api.health();
    expect(health.status).toBe('ok');
    expect(health.model_id).toBeTruthy();
  });

  it('serves the ten-font catalog', async () => {
    const fonts = await api.fonts();
    expect(fonts).toHaveLength(10);
    expect(fonts[0]).toMatchObject({ id: 0 });
  });

  it('typing and pausing yields one applied response with valid scores', async () => {
    const states: unknown[] = [];
    const controller = new RecommendController(api, (s) => states.push(s), 50);
    controller.setText('Grand Opening Sale');
    await new Promise((resolve) => setTimeout(resolve, 600));

    const response = controller.state.lastResponse;
    expect(response).not.toBeNull();
    expect(distributionValid(response!.distribution)).toBe(true);
    expect(response!.top.length).toBeGreaterThanOrEqual(3);
    for (const entry of response!.top) {
      expect(entry.score).toBeCloseTo(response!.distribution[entry.font_id], 10);
    }
  });
});
