/* Wire protocol types and client-side message validation.
 *
 * Mirrors docs/protocol.md (protocol version 1): every message in both
 * directions is {kind, session_token?, payload?}. Nothing leaves the
 * client without passing validateOutbound first.
 */

export const PROTOCOL_VERSION = 1;

export type Direction = "north" | "south" | "east" | "west";

export const DIRECTIONS: readonly Direction[] = ["north", "south", "east", "west"];

// canonical action vocabulary; the palette only ever emits these
export const ACTION_WORDS = [
  "MOVE_DIRECTION",
  "ROTATE_DIRECTION",
  "TAKE",
  "DROP",
  "PUT_GIVE",
  "OPEN_CLOSE",
  "ACTIVATE_DEACTIVATE",
  "TALK",
  "USE",
  "EAT",
  "READ",
  "WAIT",
  "FEED",
  "DIALOG_SELECT",
  "TELEPORT_LOCATION",
  "TELEPORT_OBJECT",
] as const;

export type ActionWord = (typeof ACTION_WORDS)[number];

export interface ActionRequest {
  action: string;
  arg1?: unknown;
  arg2?: unknown;
  thought?: string;
}

export interface Envelope {
  kind: string;
  session_token?: string | null;
  payload?: unknown;
}

// ---------------------------------------------------------------------------
// server payload shapes

export interface BenchmarkListing {
  discovery: string[];
  unit_tests: string[];
  splits?: Record<string, string[]>;
}

export interface HelloPayload {
  version: number;
  engine_version: string;
  benchmark: BenchmarkListing;
}

export interface NearbyObject {
  uid: number;
  name: string;
  description: string;
}

export interface InventoryEntry {
  uid: number;
  name: string;
}

export interface DialogState {
  npc: number;
  options: string[];
}

export interface FeedPost {
  post_id: number;
  author: string;
  tick: number;
  text: string;
}

export interface ObservationDoc {
  nearby_objects: NearbyObject[];
  inventory: InventoryEntry[];
  interactable: number[];
  location: {
    x: number;
    y: number;
    facing: Direction;
    open_directions: Direction[];
  };
  dialog: DialogState | null;
  task: { description: string; completed: boolean };
  feed_recent: FeedPost[];
  tick: number;
}

export interface StartPayload {
  task_id: string;
  step_cap: number;
  description: string;
  observation: ObservationDoc;
}

export interface ObservePayload {
  observation: ObservationDoc;
  valid_actions: ActionRequest[];
}

export type FrameCell =
  | { void: true }
  | {
      terrain: string;
      uid?: number;
      name?: string;
      marker?: Marker;
    };

export type Marker =
  | "agent"
  | "npc"
  | "passage"
  | "container"
  | "device"
  | "sign"
  | "creature"
  | "item";

export interface TileFrame {
  width: number;
  height: number;
  center: { x: number; y: number; facing: Direction };
  cells: FrameCell[][];
}

export interface Score {
  completion: number;
  earned: number[];
  normalized: {
    completion: number;
    procedure: number | null;
    knowledge: number | null;
  };
}

export interface StepResult {
  message: string;
  errors: { code: string; detail: string }[];
  success: boolean;
}

export interface ScorePayload {
  observation: ObservationDoc;
  result: StepResult;
  score: Score;
  done: boolean;
}

export interface ScorecardItem {
  id: string;
  text: string;
  earned: number;
  max_points: number;
}

export interface KnowledgeVerdict {
  criticalQuestion: string;
  evaluation: number | null;
  explanation: string;
}

export interface ScorecardExport {
  task_id: string;
  completion: number;
  procedural: ScorecardItem[];
  procedural_total: { earned: number; max_points: number };
  evaluation: KnowledgeVerdict[];
  evaluation_totalscore_raw: number;
  evaluation_totalscore: number | null;
  normalized: Score["normalized"];
}

export interface DonePayload {
  status: "completed" | "step_capped" | "aborted";
  scorecard: ScorecardExport;
  log_path?: string;
}

export interface ByePayload {
  status: string;
  notes_received: boolean;
  log_path?: string;
  notes_path?: string;
}

export interface ErrorMessage {
  kind: "error";
  code: string;
  detail: string;
  session_token?: string;
}

// ---------------------------------------------------------------------------
// outbound validation

const CLIENT_KINDS = new Set(["hello", "list_tasks", "start", "observe", "act", "frame", "bye"]);

const TASK_ID_RE = /^[a-z]+\/[a-z]+\/\d+$/;

const ACTION_SET: ReadonlySet<string> = new Set(ACTION_WORDS);

function isPlainObject(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function checkArg(v: unknown, label: string, problems: string[]): void {
  if (v === undefined || v === null) return;
  const t = typeof v;
  if (t !== "string" && t !== "number") {
    problems.push(`${label} must be a string, number, or null`);
  }
}

/** Returns a list of problems; an empty list means the message may be sent. */
export function validateOutbound(msg: Envelope): string[] {
  const problems: string[] = [];
  if (!CLIENT_KINDS.has(msg.kind)) {
    problems.push(`unknown client kind ${JSON.stringify(msg.kind)}`);
    return problems;
  }

  const needsToken = msg.kind === "observe" || msg.kind === "act" || msg.kind === "frame" || msg.kind === "bye";
  if (needsToken && (typeof msg.session_token !== "string" || msg.session_token === "")) {
    problems.push(`${msg.kind} requires a session_token`);
  }

  const payload = msg.payload;
  switch (msg.kind) {
    case "hello": {
      if (!isPlainObject(payload) || payload["version"] !== PROTOCOL_VERSION) {
        problems.push(`hello payload must carry version ${PROTOCOL_VERSION}`);
      }
      break;
    }
    case "start": {
      if (!isPlainObject(payload)) {
        problems.push("start payload must be an object");
        break;
      }
      const taskId = payload["task_id"];
      if (typeof taskId !== "string" || !TASK_ID_RE.test(taskId)) {
        problems.push("start payload needs task_id like theme/difficulty/seed");
      }
      if (payload["config"] !== undefined && !isPlainObject(payload["config"])) {
        problems.push("start config must be an object when present");
      }
      break;
    }
    case "act": {
      if (!isPlainObject(payload)) {
        problems.push("act payload must be an object");
        break;
      }
      const action = payload["action"];
      if (typeof action !== "string" || !ACTION_SET.has(action)) {
        problems.push(`act action must be one of the ${ACTION_WORDS.length} protocol actions`);
      }
      checkArg(payload["arg1"], "act arg1", problems);
      checkArg(payload["arg2"], "act arg2", problems);
      if (payload["thought"] !== undefined && typeof payload["thought"] !== "string") {
        problems.push("act thought must be a string when present");
      }
      break;
    }
    case "bye": {
      if (payload !== undefined) {
        if (!isPlainObject(payload)) {
          problems.push("bye payload must be an object when present");
        } else if (payload["notes"] !== undefined && typeof payload["notes"] !== "string") {
          problems.push("bye notes must be a string when present");
        }
      }
      break;
    }
    // list_tasks, observe, frame carry no payload worth checking
  }
  return problems;
}

/** Type guard for inbound error messages. */
export function isErrorMessage(msg: unknown): msg is ErrorMessage {
  return isPlainObject(msg) && msg["kind"] === "error" && typeof msg["code"] === "string";
}

/** Parse one inbound wire message; returns null for garbage. */
export function parseInbound(data: string): Envelope | ErrorMessage | null {
  let parsed: unknown;
  try {
    parsed = JSON.parse(data);
  } catch {
    return null;
  }
  if (!isPlainObject(parsed) || typeof parsed["kind"] !== "string") return null;
  return parsed as unknown as Envelope;
}
