/* Tile map renderer: the 24x16 logical frame becomes a DOM grid of
 * colored glyph cells. Terrain picks the background (via CSS class),
 * the top object contributes a glyph keyed by its marker class.
 */

import { FrameCell, Marker, TileFrame } from "./protocol.js";

export const FRAME_W = 24;
export const FRAME_H = 16;

export const MARKER_GLYPHS: Record<Marker, string> = {
  agent: "@",
  npc: "&",
  passage: "+",
  container: "▣", // ▣
  device: "◆", // ◆
  sign: "¶", // ¶
  creature: "ω", // ω
  item: "●", // ●
};

const FACING_ARROWS: Record<string, string> = {
  north: "↑",
  south: "↓",
  east: "→",
  west: "←",
};

function cellTitle(cell: FrameCell, wx: number, wy: number): string {
  if ("void" in cell) return "void";
  const base = cell.name ? `${cell.name} (${cell.terrain})` : cell.terrain;
  return `${base} @ ${wx},${wy}`;
}

/** Rebuild the frame grid inside `root`. Idempotent per frame. */
export function renderFrame(root: HTMLElement, frame: TileFrame): void {
  const cx = Math.floor(frame.width / 2);
  const cy = Math.floor(frame.height / 2);
  const cells: HTMLElement[] = [];
  for (let fy = 0; fy < frame.height; fy++) {
    const row = frame.cells[fy];
    if (!row) continue;
    for (let fx = 0; fx < frame.width; fx++) {
      const cell = row[fx];
      if (!cell) continue;
      const el = document.createElement("div");
      const wx = frame.center.x + (fx - cx);
      const wy = frame.center.y + (fy - cy);
      if ("void" in cell) {
        el.className = "tile t-void";
      } else {
        el.className = `tile t-${cell.terrain}`;
        if (cell.marker) {
          el.classList.add(`m-${cell.marker}`);
          el.textContent = MARKER_GLYPHS[cell.marker] ?? "?";
        }
        if (cell.name) el.dataset.name = cell.name;
        if (cell.uid !== undefined) el.dataset.uid = String(cell.uid);
      }
      if (fx === cx && fy === cy) {
        el.classList.add("center");
        el.textContent = MARKER_GLYPHS.agent + (FACING_ARROWS[frame.center.facing] ?? "");
      }
      el.title = cellTitle(cell, wx, wy);
      el.dataset.fx = String(fx);
      el.dataset.fy = String(fy);
      cells.push(el);
    }
  }
  root.style.setProperty("--frame-cols", String(frame.width));
  root.replaceChildren(...cells);
}

/** Frame coordinates (fx, fy) of the first cell whose object name matches. */
export function locateByName(frame: TileFrame, name: string): { fx: number; fy: number } | null {
  for (let fy = 0; fy < frame.cells.length; fy++) {
    const row = frame.cells[fy];
    if (!row) continue;
    for (let fx = 0; fx < row.length; fx++) {
      const cell = row[fx];
      if (cell && !("void" in cell) && cell.name === name) return { fx, fy };
    }
  }
  return null;
}
