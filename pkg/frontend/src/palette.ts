/* Action palette: the server's valid_actions list becomes grouped
 * buttons; every click hands the exact request object back to the app.
 * When a dialog is open the palette is replaced by the dialog options.
 */

import { ActionRequest, DialogState, InventoryEntry, NearbyObject, ObservationDoc } from "./protocol.js";

export type PickHandler = (req: ActionRequest) => void;

/** uid -> display name, from whatever the latest observation can see. */
export function buildNames(obs: ObservationDoc): Map<number, string> {
  const names = new Map<number, string>();
  for (const o of obs.nearby_objects as NearbyObject[]) names.set(o.uid, o.name);
  for (const o of obs.inventory as InventoryEntry[]) names.set(o.uid, o.name);
  return names;
}

function nameOf(arg: unknown, names: Map<number, string>): string {
  if (typeof arg === "number") return names.get(arg) ?? `#${arg}`;
  if (arg === null || arg === undefined) return "";
  return String(arg);
}

export function actionLabel(req: ActionRequest, names: Map<number, string>): string {
  const a = nameOf(req.arg1, names);
  const b = nameOf(req.arg2, names);
  switch (req.action) {
    case "MOVE_DIRECTION":
      return `Move ${a}`;
    case "ROTATE_DIRECTION":
      return `Face ${a}`;
    case "TAKE":
      return `Take ${a}`;
    case "DROP":
      return `Drop ${a}`;
    case "PUT_GIVE":
      return `Put ${a} into ${b}`;
    case "OPEN_CLOSE":
      return `Open/close ${a}`;
    case "ACTIVATE_DEACTIVATE":
      return `Switch ${a}`;
    case "TALK":
      return `Talk to ${a}`;
    case "USE":
      return `Use ${a} on ${b}`;
    case "EAT":
      return `Eat ${a}`;
    case "READ":
      return `Read ${a}`;
    case "WAIT":
      return "Wait";
    case "FEED":
      return "Read the feed";
    case "DIALOG_SELECT":
      return `Say option ${a}`;
    case "TELEPORT_LOCATION":
      return `Go to ${a}`;
    case "TELEPORT_OBJECT":
      return `Go to ${a}`;
    default:
      return `${req.action} ${a} ${b}`.trim();
  }
}

const GROUP_ORDER = ["Move", "Turn", "Interact", "Other"] as const;

function groupOf(req: ActionRequest): (typeof GROUP_ORDER)[number] {
  if (req.action === "MOVE_DIRECTION") return "Move";
  if (req.action === "ROTATE_DIRECTION") return "Turn";
  if (req.action === "WAIT" || req.action === "FEED") return "Other";
  return "Interact";
}

function makeButton(label: string, req: ActionRequest, onPick: PickHandler): HTMLButtonElement {
  const btn = document.createElement("button");
  btn.type = "button";
  btn.className = "act-btn";
  btn.textContent = label;
  btn.dataset.action = req.action;
  if (req.arg1 !== undefined && req.arg1 !== null) btn.dataset.arg1 = String(req.arg1);
  if (req.arg2 !== undefined && req.arg2 !== null) btn.dataset.arg2 = String(req.arg2);
  btn.addEventListener("click", () => onPick(req));
  return btn;
}

/** Rebuild the palette from the latest valid_actions. */
export function renderPalette(
  root: HTMLElement,
  actions: ActionRequest[],
  names: Map<number, string>,
  onPick: PickHandler,
): void {
  const groups = new Map<string, HTMLButtonElement[]>();
  for (const req of actions) {
    const g = groupOf(req);
    const list = groups.get(g) ?? [];
    list.push(makeButton(actionLabel(req, names), req, onPick));
    groups.set(g, list);
  }

  const sections: HTMLElement[] = [];
  for (const g of GROUP_ORDER) {
    const buttons = groups.get(g);
    if (!buttons || buttons.length === 0) continue;
    const section = document.createElement("div");
    section.className = "palette-group";
    const head = document.createElement("h3");
    head.textContent = g;
    section.append(head, ...buttons);
    sections.push(section);
  }
  root.replaceChildren(...sections);
}

/** Dialog mode: only the NPC's options are clickable. */
export function renderDialog(
  root: HTMLElement,
  dialog: DialogState,
  names: Map<number, string>,
  onPick: PickHandler,
): void {
  const head = document.createElement("h3");
  head.textContent = `Talking to ${names.get(dialog.npc) ?? `#${dialog.npc}`}`;
  const buttons = dialog.options.map((text, i) => {
    const req: ActionRequest = { action: "DIALOG_SELECT", arg1: i, arg2: null };
    const btn = makeButton(text, req, onPick);
    btn.classList.add("dialog-option");
    return btn;
  });
  root.replaceChildren(head, ...buttons);
}
