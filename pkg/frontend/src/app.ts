/* Play screen: connection form, task picker, tile map, action palette,
 * dialog panel, observation lists, score panel, notes pad.
 *
 * The server stays the source of truth for all game state; this module
 * only mirrors the latest replies into the DOM. Each palette click
 * emits exactly one act message, then the view refreshes from the
 * observe/frame replies.
 */

import { SessionClient, SocketFactory } from "./client.js";
import { NotesPad } from "./notes.js";
import { buildNames, renderDialog, renderPalette } from "./palette.js";
import {
  ActionRequest,
  BenchmarkListing,
  ByePayload,
  DonePayload,
  ErrorMessage,
  HelloPayload,
  ObservationDoc,
  ObservePayload,
  PROTOCOL_VERSION,
  Score,
  ScorePayload,
  StartPayload,
  StepResult,
  TileFrame,
} from "./protocol.js";
import { CountdownTimer, renderScore, renderScorecard } from "./score.js";
import { renderFrame } from "./tiles.js";

export interface AppOptions {
  makeSocket?: SocketFactory;
  defaultUrl?: string;
}

export interface AppHandle {
  client: SessionClient;
  root: HTMLElement;
  destroy(): void;
}

const TEMPLATE = `
<header class="topbar">
  <h1>Tile World Play</h1>
  <span id="engine-info"></span>
  <label>Server <input id="server-url" type="text" size="28"></label>
  <button id="connect" type="button">Connect</button>
  <span id="conn-status" data-state="disconnected">disconnected</span>
</header>
<div id="error-banner" hidden></div>
<div class="layout">
  <section class="map-pane">
    <div id="frame-grid" class="frame-grid"></div>
    <div class="legend">
      <span class="tile t-grass"></span>grass <span class="tile t-floor"></span>floor
      <span class="tile t-wall"></span>wall <span class="tile t-water"></span>water
      <span class="tile t-path"></span>path <span class="tile t-sand"></span>sand
      <span class="tile t-dirt"></span>dirt
    </div>
  </section>
  <section class="side-pane">
    <div class="panel" id="session-panel">
      <select id="task-pick" disabled></select>
      <button id="start" type="button" disabled>Start</button>
      <label>Resume token <input id="resume-token" type="text" size="6"></label>
      <button id="resume" type="button" disabled>Resume</button>
      <p id="task-desc"></p>
      <div id="score-panel"></div>
      <div class="session-meta">
        <span>time left <b id="timer">60:00</b></span>
        <span>session <b id="token-label">—</b></span>
      </div>
      <div id="final-scorecard" hidden></div>
    </div>
    <div class="panel">
      <div id="result-line"></div>
      <div id="palette"></div>
      <div id="dialog-panel" hidden></div>
    </div>
    <div class="panel" id="obs-panel">
      <h3>Nearby</h3>
      <ul id="nearby-list"></ul>
      <h3>Inventory</h3>
      <ul id="inventory-list"></ul>
      <h3>Feed</h3>
      <ul id="feed-list"></ul>
    </div>
    <div class="panel" id="notes-panel">
      <h3>Field notes</h3>
      <textarea id="notes" rows="6" placeholder="What have you figured out?"></textarea>
      <button id="send-notes" type="button" disabled>Submit notes</button>
      <span id="notes-status"></span>
    </div>
  </section>
</div>
`;

export function mountApp(root: HTMLElement, opts: AppOptions = {}): AppHandle {
  root.innerHTML = TEMPLATE;
  const el = <T extends HTMLElement>(id: string): T => {
    const found = root.querySelector<T>(`#${id}`);
    if (!found) throw new Error(`app template is missing #${id}`);
    return found;
  };

  const serverUrl = el<HTMLInputElement>("server-url");
  const connectBtn = el<HTMLButtonElement>("connect");
  const connStatus = el<HTMLSpanElement>("conn-status");
  const engineInfo = el<HTMLSpanElement>("engine-info");
  const errorBanner = el<HTMLDivElement>("error-banner");
  const frameGrid = el<HTMLDivElement>("frame-grid");
  const taskPick = el<HTMLSelectElement>("task-pick");
  const startBtn = el<HTMLButtonElement>("start");
  const resumeInput = el<HTMLInputElement>("resume-token");
  const resumeBtn = el<HTMLButtonElement>("resume");
  const taskDesc = el<HTMLParagraphElement>("task-desc");
  const scorePanel = el<HTMLDivElement>("score-panel");
  const timerEl = el<HTMLSpanElement>("timer");
  const tokenLabel = el<HTMLSpanElement>("token-label");
  const finalScorecard = el<HTMLDivElement>("final-scorecard");
  const resultLine = el<HTMLDivElement>("result-line");
  const paletteEl = el<HTMLDivElement>("palette");
  const dialogPanel = el<HTMLDivElement>("dialog-panel");
  const nearbyList = el<HTMLUListElement>("nearby-list");
  const inventoryList = el<HTMLUListElement>("inventory-list");
  const feedList = el<HTMLUListElement>("feed-list");
  const notesArea = el<HTMLTextAreaElement>("notes");
  const sendNotesBtn = el<HTMLButtonElement>("send-notes");
  const notesStatus = el<HTMLSpanElement>("notes-status");

  serverUrl.value = opts.defaultUrl ?? "ws://127.0.0.1:8765/ws";

  const client = new SessionClient();
  const notes = new NotesPad(notesArea);
  const timer = new CountdownTimer(timerEl);

  let token: string | null = null;
  let stepCap: number | null = null;
  let lastScore: Score | null = null;
  let status: string | null = null;
  let tick = 0;
  let awaitingReply = false;

  function setConnState(state: string): void {
    connStatus.dataset.state = state;
    connStatus.textContent = state;
  }

  function showError(text: string): void {
    errorBanner.textContent = text;
    errorBanner.hidden = false;
  }

  function refreshScore(): void {
    renderScore(scorePanel, { score: lastScore, tick, stepCap, status });
  }

  function requestView(): void {
    if (token === null) return;
    client.send("observe", undefined, token);
    client.send("frame", undefined, token);
  }

  function setBusy(busy: boolean): void {
    awaitingReply = busy;
    paletteEl.classList.toggle("busy", busy);
    for (const btn of paletteEl.querySelectorAll("button")) btn.disabled = busy;
    for (const btn of dialogPanel.querySelectorAll("button")) btn.disabled = busy;
  }

  function onPick(req: ActionRequest): void {
    if (token === null || awaitingReply || status !== "running") return;
    setBusy(true);
    client.send("act", { action: req.action, arg1: req.arg1 ?? null, arg2: req.arg2 ?? null }, token);
  }

  function renderObservation(obs: ObservationDoc): void {
    tick = obs.tick;
    taskDesc.textContent = obs.task.description;

    nearbyList.replaceChildren(
      ...obs.nearby_objects.map((o) => {
        const li = document.createElement("li");
        li.textContent = `${o.name}: ${o.description}`;
        li.dataset.uid = String(o.uid);
        return li;
      }),
    );
    inventoryList.replaceChildren(
      ...obs.inventory.map((o) => {
        const li = document.createElement("li");
        li.textContent = o.name;
        li.dataset.uid = String(o.uid);
        return li;
      }),
    );
    feedList.replaceChildren(
      ...obs.feed_recent.map((p) => {
        const li = document.createElement("li");
        li.textContent = `[${p.author}] ${p.text}`;
        return li;
      }),
    );
    refreshScore();
  }

  function renderActions(obs: ObservationDoc, actions: ActionRequest[]): void {
    const names = buildNames(obs);
    if (obs.dialog !== null) {
      // in dialog the palette gives way to the options
      paletteEl.hidden = true;
      dialogPanel.hidden = false;
      renderDialog(dialogPanel, obs.dialog, names, onPick);
    } else {
      dialogPanel.hidden = true;
      paletteEl.hidden = false;
      renderPalette(paletteEl, actions, names, onPick);
    }
    paletteEl.dataset.tick = String(obs.tick);
    setBusy(false);
  }

  function showResult(result: StepResult): void {
    const errs = result.errors.map((e) => `${e.code}: ${e.detail}`).join("; ");
    resultLine.textContent = errs ? `${result.message} (${errs})` : result.message;
    resultLine.classList.toggle("failed", !result.success);
  }

  // -- inbound ----------------------------------------------------------

  client.on("hello", (payload: HelloPayload) => {
    engineInfo.textContent = `engine ${payload.engine_version} · protocol ${payload.version}`;
    fillTaskPick(taskPick, payload.benchmark);
    taskPick.disabled = false;
    startBtn.disabled = false;
    resumeBtn.disabled = false;
    setConnState("connected");
  });

  client.on("start", (payload: StartPayload, msg) => {
    // the session token rides the envelope, not the payload

    token = (msg.session_token as string) ?? null;
    stepCap = payload.step_cap;
    status = "running";
    lastScore = null;
    tokenLabel.textContent = token ?? "—";
    if (token !== null) {
      notes.bind(token);
      resumeInput.value = token;
    }
    finalScorecard.hidden = true;
    sendNotesBtn.disabled = false;
    renderObservation(payload.observation);
    requestView();
    timer.start();
  });

  client.on("observe", (payload: ObservePayload) => {
    renderObservation(payload.observation);
    renderActions(payload.observation, payload.valid_actions);
  });

  client.on("frame", (payload: TileFrame) => {
    renderFrame(frameGrid, payload);
  });

  client.on("score", (payload: ScorePayload) => {
    lastScore = payload.score;
    showResult(payload.result);
    renderObservation(payload.observation);
    if (!payload.done) requestView();
  });

  client.on("done", (payload: DonePayload) => {
    status = payload.status;
    timer.stop();
    refreshScore();
    renderScorecard(finalScorecard, payload.scorecard);
    paletteEl.replaceChildren();
    dialogPanel.hidden = true;
    paletteEl.hidden = false;
    setBusy(false);
    notesStatus.textContent = "Session over. Submit your notes for grading.";
  });

  client.on("bye", (payload: ByePayload) => {
    status = payload.status;
    notesStatus.textContent = payload.notes_received
      ? `Notes delivered for grading${payload.notes_path ? ` (${payload.notes_path})` : ""}.`
      : "Session closed without notes.";
    notesStatus.dataset.received = String(payload.notes_received);
    refreshScore();
  });

  client.on("error", (msg: ErrorMessage) => {
    showError(`${msg.code}: ${msg.detail}`);
  });

  client.onClose(() => {
    setConnState("disconnected");
    if (token !== null && status === "running") {
      showError("Connection lost. Reconnect and resume with the session token.");
    }
  });

  // -- clicks -----------------------------------------------------------

  connectBtn.addEventListener("click", async () => {
    errorBanner.hidden = true;
    setConnState("connecting");
    try {
      await client.connect(serverUrl.value, opts.makeSocket);
      client.send("hello", { version: PROTOCOL_VERSION });
    } catch (err) {
      setConnState("disconnected");
      showError(String(err instanceof Error ? err.message : err));
    }
  });

  startBtn.addEventListener("click", () => {
    if (taskPick.value === "") return;
    errorBanner.hidden = true;
    client.send("start", { task_id: taskPick.value });
  });

  resumeBtn.addEventListener("click", () => {
    const t = resumeInput.value.trim();
    if (t === "") return;
    token = t;
    status = "running";
    stepCap = null; // unknown after resume; the server still enforces it
    tokenLabel.textContent = t;
    notes.bind(t);
    sendNotesBtn.disabled = false;
    errorBanner.hidden = true;
    requestView();
    timer.start();
  });

  sendNotesBtn.addEventListener("click", () => {
    if (token === null) return;
    client.send("bye", { notes: notes.value }, token);
  });

  return {
    client,
    root,
    destroy() {
      timer.stop();
      client.close();
    },
  };
}

function fillTaskPick(select: HTMLSelectElement, benchmark: BenchmarkListing): void {
  const mkGroup = (label: string, ids: string[]): HTMLOptGroupElement => {
    const group = document.createElement("optgroup");
    group.label = label;
    for (const id of ids) {
      const opt = document.createElement("option");
      opt.value = id;
      opt.textContent = id;
      group.appendChild(opt);
    }
    return group;
  };
  select.replaceChildren(
    mkGroup("discovery", benchmark.discovery),
    mkGroup("unit tests", benchmark.unit_tests),
  );
}
