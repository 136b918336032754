/** Minimal RGBA raster with a 5x7 bitmap font, encoded to PNG via pngjs. */

import { PNG } from "pngjs";
import { RGB } from "./colors";

const GLYPH_W = 5;
const GLYPH_H = 7;

const FONT: Record<string, string[]> = {
  "0": [".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."],
  "1": ["..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###."],
  "2": [".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"],
  "3": [".###.", "#...#", "....#", "..##.", "....#", "#...#", ".###."],
  "4": ["...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."],
  "5": ["#####", "#....", "####.", "....#", "....#", "#...#", ".###."],
  "6": [".###.", "#....", "#....", "####.", "#...#", "#...#", ".###."],
  "7": ["#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."],
  "8": [".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."],
  "9": [".###.", "#...#", "#...#", ".####", "....#", "....#", ".###."],
  "/": ["....#", "...#.", "...#.", "..#..", ".#...", ".#...", "#...."],
  ".": [".....", ".....", ".....", ".....", ".....", "..##.", "..##."],
  "-": [".....", ".....", ".....", "#####", ".....", ".....", "....."],
  "=": [".....", ".....", "#####", ".....", "#####", ".....", "....."],
  " ": [".....", ".....", ".....", ".....", ".....", ".....", "....."],
  a: [".....", ".....", ".###.", "....#", ".####", "#...#", ".####"],
  d: ["....#", "....#", ".####", "#...#", "#...#", "#...#", ".####"],
  h: ["#....", "#....", "####.", "#...#", "#...#", "#...#", "#...#"],
  i: ["..#..", ".....", ".##..", "..#..", "..#..", "..#..", ".###."],
  m: [".....", ".....", "##.#.", "#.#.#", "#.#.#", "#.#.#", "#.#.#"],
  n: [".....", ".....", "####.", "#...#", "#...#", "#...#", "#...#"],
  o: [".....", ".....", ".###.", "#...#", "#...#", "#...#", ".###."],
  p: [".....", ".....", "####.", "#...#", "####.", "#....", "#...."],
  s: [".....", ".....", ".####", "#....", ".###.", "....#", "####."],
  B: ["####.", "#...#", "#...#", "####.", "#...#", "#...#", "####."],
  D: ["####.", "#...#", "#...#", "#...#", "#...#", "#...#", "####."],
  J: ["..###", "...#.", "...#.", "...#.", "...#.", "#..#.", ".##.."],
  P: ["####.", "#...#", "#...#", "####.", "#....", "#....", "#...."],
  T: ["#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."],
};

export const BLACK: RGB = [0, 0, 0];
export const WHITE: RGB = [255, 255, 255];

export class Raster {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8Array;

  constructor(width: number, height: number, background: RGB = WHITE) {
    this.width = width;
    this.height = height;
    this.data = new Uint8Array(width * height * 4);
    this.fillRect(0, 0, width, height, background);
  }

  set(x: number, y: number, rgb: RGB): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const k = 4 * (y * this.width + x);
    this.data[k] = rgb[0];
    this.data[k + 1] = rgb[1];
    this.data[k + 2] = rgb[2];
    this.data[k + 3] = 255;
  }

  get(x: number, y: number): RGB {
    const k = 4 * (y * this.width + x);
    return [this.data[k], this.data[k + 1], this.data[k + 2]];
  }

  fillRect(x: number, y: number, w: number, h: number, rgb: RGB): void {
    for (let yy = y; yy < y + h; yy++) {
      for (let xx = x; xx < x + w; xx++) {
        this.set(xx, yy, rgb);
      }
    }
  }

  strokeRect(x: number, y: number, w: number, h: number, rgb: RGB): void {
    for (let xx = x; xx < x + w; xx++) {
      this.set(xx, y, rgb);
      this.set(xx, y + h - 1, rgb);
    }
    for (let yy = y; yy < y + h; yy++) {
      this.set(x, yy, rgb);
      this.set(x + w - 1, yy, rgb);
    }
  }

  /** Draw text with the 5x7 font; unknown characters render as space. */
  drawText(x: number, y: number, text: string, rgb: RGB = BLACK): void {
    let cx = x;
    for (const ch of text) {
      const glyph = FONT[ch] ?? FONT[" "];
      for (let gy = 0; gy < GLYPH_H; gy++) {
        for (let gx = 0; gx < GLYPH_W; gx++) {
          if (glyph[gy][gx] === "#") {
            this.set(cx + gx, y + gy, rgb);
          }
        }
      }
      cx += GLYPH_W + 1;
    }
  }

  toPng(): Buffer {
    const png = new PNG({ width: this.width, height: this.height });
    Buffer.from(this.data).copy(png.data);
    return PNG.sync.write(png);
  }
}

export function textWidth(text: string): number {
  return text.length * (GLYPH_W + 1) - 1;
}

export const TEXT_HEIGHT = GLYPH_H;
