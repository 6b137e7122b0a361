/* Score panel and the one-hour soft timer. */

import { Score, ScorecardExport } from "./protocol.js";

export const SESSION_SECONDS = 3600;

function pct(v: number | null): string {
  return v === null ? "—" : `${Math.round(v * 100)}%`;
}

export interface ScoreView {
  score: Score | null;
  tick: number;
  stepCap: number | null;
  status: string | null;
}

export function renderScore(root: HTMLElement, view: ScoreView): void {
  const { score, tick, stepCap, status } = view;
  const norm = score?.normalized ?? null;

  const steps = document.createElement("div");
  steps.className = "score-steps";
  steps.textContent = `Step ${tick} / ${stepCap ?? "—"}`;

  const metrics = document.createElement("div");
  metrics.className = "score-metrics";
  metrics.textContent =
    `completion ${pct(norm?.completion ?? null)} · ` +
    `procedure ${pct(norm?.procedure ?? null)} · ` +
    `knowledge ${pct(norm?.knowledge ?? null)}`;

  const badge = document.createElement("span");
  badge.id = "completion-badge";
  if (score && score.completion === 1) {
    badge.className = "badge badge-complete";
    badge.textContent = "COMPLETE";
  } else if (status === "step_capped" || status === "aborted") {
    badge.className = "badge badge-over";
    badge.textContent = status.toUpperCase();
  } else {
    badge.className = "badge badge-running";
    badge.textContent = status ? status.toUpperCase() : "—";
  }

  root.replaceChildren(steps, metrics, badge);
}

/** Final per-item breakdown, shown when the done message lands. */
export function renderScorecard(root: HTMLElement, card: ScorecardExport): void {
  const table = document.createElement("table");
  table.className = "scorecard";
  const row = (id: string, text: string, points: string): HTMLTableRowElement => {
    const tr = document.createElement("tr");
    for (const value of [id, text, points]) {
      const td = document.createElement("td");
      td.textContent = value;
      tr.appendChild(td);
    }
    return tr;
  };
  for (const item of card.procedural) {
    table.appendChild(row(item.id, item.text, `${item.earned}/${item.max_points}`));
  }
  const total = card.procedural_total;
  const totalRow = row("", "procedure total", `${total.earned}/${total.max_points}`);
  totalRow.className = "scorecard-total";
  table.appendChild(totalRow);
  for (const verdict of card.evaluation) {
    table.appendChild(
      row("Q", verdict.criticalQuestion, verdict.evaluation === null ? "ungraded" : String(verdict.evaluation)),
    );
  }
  root.replaceChildren(table);
  root.hidden = false;
}

/** Soft countdown: display only, nothing is enforced at zero. */
export class CountdownTimer {
  private remaining = SESSION_SECONDS;
  private handle: ReturnType<typeof setInterval> | null = null;

  constructor(private el: HTMLElement) {}

  start(seconds = SESSION_SECONDS): void {
    this.stop();
    this.remaining = seconds;
    this.render();
    this.handle = setInterval(() => {
      this.remaining = Math.max(0, this.remaining - 1);
      this.render();
      if (this.remaining === 0) this.stop();
    }, 1000);
  }

  stop(): void {
    if (this.handle !== null) {
      clearInterval(this.handle);
      this.handle = null;
    }
  }

  private render(): void {
    const m = Math.floor(this.remaining / 60);
    const s = this.remaining % 60;
    this.el.textContent = `${String(m).padStart(2, "0")}:${String(s).padStart(2, "0")}`;
  }
}
