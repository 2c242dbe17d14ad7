/** Shapes shared with the recommendation service. */

export interface FontInfo {
  id: number;
  name: string;
  css: string;
}

export interface TopEntry {
  font_id: number;
  name: string;
  css: string;
  score: number;
}

export interface RecommendResponse {
  distribution: number[];
  top: TopEntry[];
  k: number;
  model_id: string;
}

/** The evaluation ks; the selector is fixed to these. */
export type K = 1 | 3 | 5;

export interface LockExport {
  text: string;
  font_id: number;
  font_name: string;
}
