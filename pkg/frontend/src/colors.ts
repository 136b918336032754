/** Color scales: probabilities run blue (0) to red (1); domain labels get
 * fixed categorical colors. */

import { DomainLabel } from "./csv";

export type RGB = readonly [number, number, number];

export const PROBABILITY_LOW: RGB = [20, 30, 200];   // P = 0, blue
export const PROBABILITY_HIGH: RGB = [210, 20, 25];  // P = 1, red

export function probabilityColor(p: number): RGB {
  const t = Math.min(1, Math.max(0, p));
  return [
    Math.round(PROBABILITY_LOW[0] + t * (PROBABILITY_HIGH[0] - PROBABILITY_LOW[0])),
    Math.round(PROBABILITY_LOW[1] + t * (PROBABILITY_HIGH[1] - PROBABILITY_LOW[1])),
    Math.round(PROBABILITY_LOW[2] + t * (PROBABILITY_HIGH[2] - PROBABILITY_LOW[2])),
  ];
}

export const DOMAIN_COLORS: Record<DomainLabel, RGB> = {
  D1: [46, 134, 71],    // green
  D2: [232, 193, 46],   // yellow
  D3: [224, 114, 40],   // orange
  D4: [122, 71, 181],   // purple
  B: [150, 150, 150],   // gray
};
