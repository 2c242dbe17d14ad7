import { ApiClient } from './api';
import { RecommendController } from './controller';
import type { K } from './types';
import type { FontInfo } from './types';
import { render } from './view';

const DEFAULT_BASE_URL = 'http://127.0.0.1:8321';

function baseUrl(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get('api') ?? localStorage.getItem('fontsense-api') ?? DEFAULT_BASE_URL;
}

async function boot(): Promise<void> {
  const root = document.getElementById('app')!;
  const api = new ApiClient(baseUrl());

  let fonts: FontInfo[] = [];
  const controller = new RecommendController(api, (state) => {
    render(root, state, fonts, { onLock: (fontId) => controller.lock(fontId) });
  });

  try {
    fonts = await api.fonts();
    const health = await api.health();
    document.getElementById('model-id')!.textContent = `model ${health.model_id}`;
  } catch {
    root.querySelector('.banner')!.textContent =
      `Cannot reach the recommendation service at ${api.baseUrl}. ` +
      'Start it with: fontsense serve --cors-origin <this origin>';
    (root.querySelector('.banner') as HTMLElement).style.display = 'block';
  }

  const input = document.getElementById('draft') as HTMLTextAreaElement;
  input.addEventListener('input', () => controller.setText(input.value));

  for (const radio of document.querySelectorAll<HTMLInputElement>('input[name="k"]')) {
    radio.addEventListener('change', () => {
      if (radio.checked) controller.setK(Number(radio.value) as K);
    });
  }
}

void boot();
