import { describe, expect, it } from "vitest";

import { actionLabel, buildNames, renderDialog, renderPalette } from "../src/palette.js";
import { ActionRequest, ObservationDoc } from "../src/protocol.js";

function obsFixture(): ObservationDoc {
  return {
    nearby_objects: [
      { uid: 3, name: "tin cup", description: "A dented cup." },
      { uid: 9, name: "metal box", description: "An open box." },
    ],
    inventory: [{ uid: 5, name: "rope coil" }],
    interactable: [3, 9],
    location: { x: 16, y: 18, facing: "north", open_directions: ["north", "east"] },
    dialog: null,
    task: { description: "Put the tin cup in the metal box.", completed: false },
    feed_recent: [],
    tick: 4,
  };
}

describe("actionLabel", () => {
  it("names uids from the observation", () => {
    const names = buildNames(obsFixture());
    expect(actionLabel({ action: "TAKE", arg1: 3, arg2: null }, names)).toBe("Take tin cup");
    expect(actionLabel({ action: "PUT_GIVE", arg1: 5, arg2: 9 }, names)).toBe("Put rope coil into metal box");
    expect(actionLabel({ action: "MOVE_DIRECTION", arg1: "north", arg2: null }, names)).toBe("Move north");
    expect(actionLabel({ action: "WAIT", arg1: null, arg2: null }, names)).toBe("Wait");
    expect(actionLabel({ action: "TAKE", arg1: 77, arg2: null }, names)).toBe("Take #77");
  });
});

describe("renderPalette", () => {
  const actions: ActionRequest[] = [
    { action: "WAIT", arg1: null, arg2: null },
    { action: "FEED", arg1: null, arg2: null },
    { action: "MOVE_DIRECTION", arg1: "north", arg2: null },
    { action: "ROTATE_DIRECTION", arg1: "east", arg2: null },
    { action: "TAKE", arg1: 3, arg2: null },
  ];

  it("renders one button per valid action, grouped", () => {
    const root = document.createElement("div");
    renderPalette(root, actions, buildNames(obsFixture()), () => {});
    const buttons = root.querySelectorAll("button");
    expect(buttons).toHaveLength(actions.length);
    const headings = [...root.querySelectorAll("h3")].map((h) => h.textContent);
    expect(headings).toEqual(["Move", "Turn", "Interact", "Other"]);
  });

  it("hands the exact request object to the pick handler", () => {
    const root = document.createElement("div");
    const picked: ActionRequest[] = [];
    renderPalette(root, actions, buildNames(obsFixture()), (req) => picked.push(req));
    const takeBtn = root.querySelector('button[data-action="TAKE"]') as HTMLButtonElement;
    takeBtn.click();
    expect(picked).toEqual([{ action: "TAKE", arg1: 3, arg2: null }]);
  });

  it("replaces stale buttons on rerender", () => {
    const root = document.createElement("div");
    renderPalette(root, actions, buildNames(obsFixture()), () => {});
    renderPalette(root, [{ action: "WAIT", arg1: null, arg2: null }], new Map(), () => {});
    expect(root.querySelectorAll("button")).toHaveLength(1);
  });
});

describe("renderDialog", () => {
  it("shows only the NPC options while in dialog", () => {
    const root = document.createElement("div");
    const picked: ActionRequest[] = [];
    const names = new Map([[11, "farmer Lee"]]);
    renderDialog(root, { npc: 11, options: ["Good day.", "About that errand..."] }, names, (req) =>
      picked.push(req),
    );
    const buttons = [...root.querySelectorAll("button")];
    expect(buttons.map((b) => b.textContent)).toEqual(["Good day.", "About that errand..."]);
    expect(root.textContent).toContain("farmer Lee");

    (buttons[1] as HTMLButtonElement).click();
    expect(picked).toEqual([{ action: "DIALOG_SELECT", arg1: 1, arg2: null }]);
  });
});
