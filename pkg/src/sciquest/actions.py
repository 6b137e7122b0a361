"""Action engine: validation, execution, dialog trees, device behavior.

Wire action set (16 actions). Aliases like OPEN/CLOSE or PUT/GIVE map onto
the toggling/overloaded actions so transcripts using either form replay.

Execution contract:
  - every call increments world.tick by exactly 1, success or failure
  - handlers validate all preconditions before the first mutation, so a
    failed action leaves the world unchanged (atomicity)
  - failures are structured: result.errors carries "CODE: detail" strings
  - valid_actions() only offers requests that would execute with
    success=true in the current state (closure)

Device behavior is dispatched on the deviceKind property so the engine
stays task-agnostic; the science math lives in science.py.
"""

from __future__ import annotations

import math
from typing import Any, Optional

from . import science
from .world import DIRECTIONS, FACINGS, AgentState, ObjectInstance, WorldState

ACTIONS = (
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
)

ALIASES = {
    "MOVE": "MOVE_DIRECTION",
    "ROTATE": "ROTATE_DIRECTION",
    "OPEN": "OPEN_CLOSE",
    "CLOSE": "OPEN_CLOSE",
    "ACTIVATE": "ACTIVATE_DEACTIVATE",
    "DEACTIVATE": "ACTIVATE_DEACTIVATE",
    "PUT": "PUT_GIVE",
    "GIVE": "PUT_GIVE",
    "TELEPORT": "TELEPORT_LOCATION",
    "READ_FEED": "FEED",
}

FEED_WINDOW = 5
REACH_RADIUS = 3

# instrument deviceKind -> handled by science.read_instrument
INSTRUMENT_KINDS = frozenset(science.INSTRUMENT_PROPS) | {"molddetector"}


def normalize_request(req: dict) -> dict:
    """Canonical request shape: {action, arg1, arg2, thought}."""
    action = str(req.get("action", "")).strip().upper()
    action = ALIASES.get(action, action)
    return {
        "action": action,
        "arg1": req.get("arg1"),
        "arg2": req.get("arg2"),
        "thought": req.get("thought", ""),
    }


def make_result(message: str, errors: Optional[list[str]] = None) -> dict:
    errs = errors or []
    return {"message": message, "errors": errs, "success": not errs}


def fail(code: str, detail: str) -> dict:
    return make_result(f"Action failed: {detail}", [f"{code}: {detail}"])


def _as_uid(value: Any) -> Optional[int]:
    try:
        return int(value)
    except (TypeError, ValueError):
        return None


class ActionContext:
    """Per-call view binding world + acting agent, with reach caching."""

    def __init__(self, world: WorldState, agent: AgentState):
        self.world = world
        self.agent = agent
        self._accessible: Optional[set[int]] = None

    def accessible(self) -> set[int]:
        if self._accessible is None:
            self._accessible = set(self.world.enumerate_accessible(self.agent, REACH_RADIUS))
        return self._accessible

    def reachable_obj(self, value: Any) -> tuple[Optional[ObjectInstance], Optional[dict]]:
        uid = _as_uid(value)
        if uid is None or uid not in self.world.objects:
            return None, fail("UNKNOWN_UID", f"no object with uid {value}")
        if uid not in self.accessible():
            return None, fail("OUT_OF_REACH", f"the {self.world.objects[uid].name} is out of reach")
        return self.world.objects[uid], None

    def in_inventory(self, uid: int) -> bool:
        return uid in self.world.agent_body(self.agent).contents


# ---------------------------------------------------------------------------
# execution

def execute(world: WorldState, agent: AgentState, req: dict) -> dict:
    """Run one action. Always advances the tick, even on failure."""
    req = normalize_request(req)
    result = _dispatch(world, agent, req)
    world.tick += 1
    agent.action_history.append({"tick": world.tick, "request": req, "result": result})
    return result


def _dispatch(world: WorldState, agent: AgentState, req: dict) -> dict:
    action = req["action"]
    if action not in ACTIONS:
        return fail("UNKNOWN_ACTION", f"unrecognized action '{action}'")
    if agent.dialog is not None and action != "DIALOG_SELECT":
        return fail("WRONG_STATE", "you are in a conversation; select a dialog option")
    ctx = ActionContext(world, agent)
    handler = _HANDLERS[action]
    try:
        return handler(ctx, req["arg1"], req["arg2"])
    except Exception as exc:  # totality: structured failure, never a crash
        return fail("INTERNAL", f"{type(exc).__name__}: {exc}")


def _do_move(ctx: ActionContext, arg1, arg2) -> dict:
    direction = str(arg1).lower() if arg1 is not None else ""
    if direction not in DIRECTIONS:
        return fail("BAD_ARITY", f"'{arg1}' is not a direction")
    agent, world = ctx.agent, ctx.world
    if agent.facing != direction:
        # moving in a non-faced direction rotates first; advancing costs a
        # second action
        agent.facing = direction
        return make_result(f"I rotated to face {direction}.")
    pos = world.object_tile(agent.uid)
    dx, dy = DIRECTIONS[direction]
    nx, ny = pos[0] + dx, pos[1] + dy
    if not (0 <= nx < world.width and 0 <= ny < world.height):
        return fail("BLOCKED", "the map edge is in the way")
    if not world.is_tile_passable(nx, ny):
        return fail("BLOCKED", f"the way {direction} is blocked")
    world.attach(agent.uid, ("tile", nx, ny))
    return make_result(f"I moved {direction}.")


def _do_rotate(ctx: ActionContext, arg1, arg2) -> dict:
    direction = str(arg1).lower() if arg1 is not None else ""
    if direction not in DIRECTIONS:
        return fail("BAD_ARITY", f"'{arg1}' is not a direction")
    ctx.agent.facing = direction
    return make_result(f"I rotated to face {direction}.")


def _do_take(ctx: ActionContext, arg1, arg2) -> dict:
    obj, err = ctx.reachable_obj(arg1)
    if err:
        return err
    if obj.prop("isAgent"):
        return fail("WRONG_STATE", f"the {obj.name} objects to being picked up")
    if not obj.prop("isMovable"):
        return fail("WRONG_STATE", f"the {obj.name} cannot be moved")
    if ctx.in_inventory(obj.uid):
        return fail("WRONG_STATE", f"you are already carrying the {obj.name}")
    ctx.world.attach(obj.uid, ("obj", ctx.agent.uid))
    return make_result(f"I took the {obj.name}.")


def _do_drop(ctx: ActionContext, arg1, arg2) -> dict:
    uid = _as_uid(arg1)
    if uid is None or uid not in ctx.world.objects:
        return fail("UNKNOWN_UID", f"no object with uid {arg1}")
    if not ctx.in_inventory(uid):
        return fail("WRONG_STATE", "you are not carrying that")
    obj = ctx.world.objects[uid]
    pos = ctx.world.object_tile(ctx.agent.uid)
    ctx.world.attach(uid, ("tile", pos[0], pos[1]))
    return make_result(f"I dropped the {obj.name}.")


def _do_put_give(ctx: ActionContext, arg1, arg2) -> dict:
    uid = _as_uid(arg1)
    if uid is None or uid not in ctx.world.objects:
        return fail("UNKNOWN_UID", f"no object with uid {arg1}")
    if not ctx.in_inventory(uid):
        return fail("WRONG_STATE", "you can only put or give something you are carrying")
    item = ctx.world.objects[uid]
    target, err = ctx.reachable_obj(arg2)
    if err:
        return err
    if target.uid == uid:
        return fail("WRONG_STATE", "cannot put an object into itself")
    if target.prop("isAgent"):
        ctx.world.attach(uid, ("obj", target.uid))
        return make_result(f"I gave the {item.name} to {target.name}.")
    if not target.prop("isContainer"):
        return fail("WRONG_STATE", f"the {target.name} cannot hold things")
    if target.prop("isOpenable") and not target.prop("isOpen"):
        return fail("WRONG_STATE", f"the {target.name} is closed")
    ctx.world.attach(uid, ("obj", target.uid))
    prefix = target.prop("containerPrefix")
    return make_result(f"I put the {item.name} {prefix} the {target.name}.")


def _has_key(ctx: ActionContext, lock_id: int) -> bool:
    body = ctx.world.agent_body(ctx.agent)
    return any(
        ctx.world.objects[u].prop("keyID") == lock_id for u in body.contents
    )


def _do_open_close(ctx: ActionContext, arg1, arg2) -> dict:
    obj, err = ctx.reachable_obj(arg1)
    if err:
        return err
    openable = (obj.prop("isContainer") and obj.prop("isOpenable")) or obj.prop("isPassage")
    if not openable:
        return fail("WRONG_STATE", f"the {obj.name} does not open")
    lock = obj.prop("requiresKey")
    if lock > 0 and not obj.prop("isOpen") and not _has_key(ctx, lock):
        return fail("LOCKED", f"the {obj.name} is locked")
    now_open = not obj.prop("isOpen")
    obj.set_prop("isOpen", now_open)
    if obj.prop("isContainer"):
        obj.set_prop("isOpenContainer", now_open)
    if obj.prop("isPassage"):
        obj.set_prop("isPassable", now_open)
    if now_open and obj.prop("isShovelable"):
        # digging open by hand counts the same as using a shovel
        ctx.world.add_event("excavated", {"uid": obj.uid})
    verb = "opened" if now_open else "closed"
    return make_result(f"I {verb} the {obj.name}.")


def _do_activate(ctx: ActionContext, arg1, arg2) -> dict:
    obj, err = ctx.reachable_obj(arg1)
    if err:
        return err
    if not obj.prop("isActivatable"):
        return fail("WRONG_STATE", f"the {obj.name} cannot be activated")
    kind = obj.prop("deviceKind")
    if obj.prop("isActivated"):
        obj.set_prop("isActivated", False)
        return make_result(f"I deactivated the {obj.name}.")
    return _activate_device(ctx, obj, kind)


def _activate_device(ctx: ActionContext, obj: ObjectInstance, kind: str) -> dict:
    world = ctx.world
    if kind == "reactor":
        want = obj.prop("deviceIndex")
        dial = obj.prop("dialFrequency")
        crystal = None
        for uid in obj.contents:
            child = world.objects[uid]
            if child.prop("deviceIndex") == want and child.prop("resonanceFrequency") != -1:
                crystal = child
                break
        if crystal is None:
            return make_result(
                f"The {obj.name} will not start: its crystal slot is empty or holds the wrong crystal."
            )
        if dial != crystal.prop("resonanceFrequency"):
            return make_result(
                f"The {obj.name} sputters and shuts down. The dial is set to {dial} Hz."
            )
        obj.set_prop("isActivated", True)
        world.add_event("reactor_activated", {"uid": obj.uid, "index": want})
        return make_result(f"The {obj.name} thrums to life, resonating at {dial} Hz.")
    if kind == "oven":
        obj.set_prop("isActivated", True)
        cooked = []
        for uid in obj.contents:
            child = world.objects[uid]
            if child.prop("isEdible") and not child.prop("isCooked"):
                child.set_prop("isCooked", True)
                cooked.append(child.name)
                world.add_event("cooked", {"uid": uid, "name": child.name})
        if cooked:
            return make_result(f"The {obj.name} hums with heat. Cooked: {', '.join(cooked)}.")
        return make_result(f"The {obj.name} hums with heat. It is empty.")
    if kind == "pendulum":
        return _swing_pendulum(ctx, obj, obj.prop("pendulumLength"))
    obj.set_prop("isActivated", True)
    world.add_event("activated", {"uid": obj.uid, "kind": kind or "generic"})
    return make_result(f"I activated the {obj.name}.")


def _swing_pendulum(ctx: ActionContext, obj: ObjectInstance, length: float) -> dict:
    g = obj.prop("pendulumGravity")
    if length <= 0 or g <= 0:
        return make_result(f"The {obj.name} hangs motionless.")
    period = 2.0 * math.pi * math.sqrt(length / g)
    obj.set_prop("isActivated", True)
    ctx.world.add_event("pendulum_timed", {"uid": obj.uid})
    return make_result(
        f"The {obj.name} swings steadily. Measured period: {period:.7f} seconds "
        f"(arm length {length} m)."
    )


def _do_talk(ctx: ActionContext, arg1, arg2) -> dict:
    obj, err = ctx.reachable_obj(arg1)
    if err:
        return err
    if not obj.prop("isDialogable"):
        return fail("WRONG_STATE", f"the {obj.name} has nothing to say")
    tree = ctx.world.dialogs.get(obj.uid)
    if not tree:
        return fail("WRONG_STATE", f"the {obj.name} has nothing to say")
    ctx.agent.dialog = {"npc": obj.uid, "node": "root"}
    ctx.world.add_event("talked", {"uid": obj.uid})
    text = render_node_text(ctx.world, tree["root"])
    return make_result(f'I am talking to {obj.name}. {obj.name} says: "{text}"')


def render_node_text(world: WorldState, node: dict) -> str:
    """Node text may interpolate live property values via a show list."""
    text = node["text"]
    shows = node.get("show", [])
    if shows:
        values = []
        for ref in shows:
            _, uid, prop, *keys = ref
            value = world.objects[int(uid)].prop(prop)
            for key in keys:  # optional drill-down into map-valued props
                value = value[key]
            values.append(value)
        text = text.format(*values)
    return text


def dialog_options(world: WorldState, agent: AgentState) -> list[str]:
    if agent.dialog is None:
        return []
    tree = world.dialogs[agent.dialog["npc"]]
    node = tree[agent.dialog["node"]]
    return [opt["say"] for opt in node.get("options", [])]


def _apply_dialog_effect(world: WorldState, agent: AgentState, npc_uid: int, eff: dict) -> None:
    kind = eff["kind"]
    if kind == "set_prop":
        uid = npc_uid if eff.get("uid") in (None, "self") else int(eff["uid"])
        world.objects[uid].set_prop(eff["prop"], eff["value"])
    elif kind == "adjust_prop":
        uid = npc_uid if eff.get("uid") in (None, "self") else int(eff["uid"])
        obj = world.objects[uid]
        obj.set_prop(eff["prop"], obj.prop(eff["prop"]) + eff["delta"])
    elif kind == "merge_map_prop":
        for uid in eff["uids"]:
            obj = world.objects[int(uid)]
            m = obj.prop(eff["prop"])
            m[eff["key"]] = eff["value"]
            obj.set_prop(eff["prop"], m)
    elif kind == "post_feed":
        world.append_feed(eff["author"], eff["text"])
    elif kind == "event":
        world.add_event(eff["name"], dict(eff.get("data", {})))
    elif kind == "give_item":
        uid = int(eff["item_uid"])
        if uid in world.objects:
            world.attach(uid, ("obj", agent.uid))
    else:
        raise ValueError(f"unknown dialog effect: {kind}")


def _do_dialog_select(ctx: ActionContext, arg1, arg2) -> dict:
    agent, world = ctx.agent, ctx.world
    if agent.dialog is None:
        return fail("NO_DIALOG", "you are not in a conversation")
    idx = _as_uid(arg1)
    tree = world.dialogs[agent.dialog["npc"]]
    node = tree[agent.dialog["node"]]
    options = node.get("options", [])
    if idx is None or not (0 <= idx < len(options)):
        return fail("BAD_INDEX", f"dialog option {arg1} is out of range")
    opt = options[idx]
    npc_uid = agent.dialog["npc"]
    npc = world.objects[npc_uid]
    for eff in opt.get("effects", []):
        _apply_dialog_effect(world, agent, npc_uid, eff)
    nxt = opt.get("next")
    said = opt["say"]
    if nxt is None:
        agent.dialog = None
        return make_result(f'I said: "{said}" The conversation ends.')
    agent.dialog = {"npc": npc_uid, "node": nxt}
    reply = render_node_text(world, tree[nxt])
    return make_result(f'I said: "{said}" {npc.name} says: "{reply}"')


def _do_use(ctx: ActionContext, arg1, arg2) -> dict:
    tool, err = ctx.reachable_obj(arg1)
    if err:
        return err
    if not tool.prop("isUsable"):
        return fail("NOT_AN_INSTRUMENT", f"the {tool.name} is not usable")
    kind = tool.prop("deviceKind")
    if arg2 is None:
        return fail("BAD_ARITY", f"use the {tool.name} on what?")
    target, err = ctx.reachable_obj(arg2)
    if err:
        return err
    if target.uid == tool.uid:
        return fail("WRONG_STATE", "cannot use an object on itself")
    world = ctx.world

    if kind in INSTRUMENT_KINDS:
        if kind == "molddetector":
            if target.prop("isEdible"):
                verdict = "MOLD DETECTED" if target.prop("isPoisonous") else "no mold"
                reading = f"Detector verdict: {verdict}."
            else:
                reading = "The detector shows nothing: the results were inconclusive."
        else:
            reading = science.read_instrument(kind, _props_view(target))
        world.add_event(
            "instrument_used",
            {"instrument": kind, "instrument_uid": tool.uid, "target_uid": target.uid},
        )
        return make_result(f"I used the {tool.name} on the {target.name}. {reading}")

    if kind == "shovel":
        if not target.prop("isShovelable"):
            return fail("WRONG_STATE", f"you cannot dig into the {target.name}")
        if target.prop("isOpen"):
            return make_result(f"The {target.name} is already dug open.")
        target.set_prop("isOpen", True)
        if target.prop("isContainer"):
            target.set_prop("isOpenContainer", True)
        world.add_event("excavated", {"uid": target.uid})
        return make_result(f"I dug into the {target.name}, revealing its contents.")

    if kind.startswith("dispenser:"):
        chem = kind.split(":", 1)[1]
        if target.prop("deviceKind") != "mixjar":
            return fail("WRONG_STATE", f"the {tool.name} only dispenses into a mixing jar")
        mix = target.prop("mixtureDict")
        mix[chem] = mix.get(chem, 0) + 1
        target.set_prop("mixtureDict", mix)
        world.add_event("dispensed", {"chem": chem, "jar": target.uid})
        desc = ", ".join(f"{v} part{'s' if v != 1 else ''} {k}" for k, v in sorted(mix.items()))
        return make_result(f"The {tool.name} dispenses one part {chem}. The jar now holds: {desc}.")

    if kind == "mixjar":
        if target.prop("rustLevel") == -1:
            return fail("WRONG_STATE", f"the {target.name} is not rusted")
        mix = tool.prop("mixtureDict")
        if not mix or all(v == 0 for v in mix.values()):
            return fail("WRONG_STATE", "the jar is empty")
        goal = target.prop("mixtureDict")
        level = science.rust_response(mix, goal)
        tool.set_prop("mixtureDict", {})
        target.set_prop("rustLevel", science.RUST_LEVEL_ORDER[level])
        world.add_event(
            "rust_test", {"jar": tool.uid, "target": target.uid, "mix": mix, "level": level}
        )
        if level == "removed":
            return make_result(
                f"I poured the mixture over the {target.name}. The rust dissolves completely: removed!"
            )
        return make_result(
            f"I poured the mixture over the {target.name}. The rust now looks {level}."
        )

    if kind == "detectorpart":
        if target.prop("deviceKind") != "detectorpart" or target.uid == tool.uid:
            return fail("WRONG_STATE", f"the {tool.name} does not fit that")
        if tool.prop("deviceIndex") == target.prop("deviceIndex"):
            return fail("WRONG_STATE", "those two parts do not fit together")
        pos = world.object_tile(ctx.agent.uid)
        world.destroy(tool.uid)
        world.destroy(target.uid)
        det = world.add_object(
            "mold detector",
            "A hand-built instrument that reports mold contamination directly.",
            props={"isMovable": True, "isUsable": True, "isPassable": True,
                   "deviceKind": "molddetector"},
            at=("obj", ctx.agent.uid),
        )
        world.add_event("detector_built", {"uid": det.uid})
        return make_result(
            "I fitted the two parts together. They click into place: a working mold detector!"
        )

    return fail("NOT_AN_INSTRUMENT", f"the {tool.name} has no use on the {target.name}")


def _props_view(obj: ObjectInstance) -> dict:
    """Property snapshot passed to instrument reading code."""
    keys = (
        "temperatureC", "density", "radiationusvh", "ph", "microscopeDesc",
        "microscopeModifierText", "spectrum", "proteinValues",
        "radioisotopeValues", "soilNutrients", "radiocarbonAge",
    )
    return {k: obj.prop(k) for k in keys}


def _do_eat(ctx: ActionContext, arg1, arg2) -> dict:
    obj, err = ctx.reachable_obj(arg1)
    if err:
        return err
    if not obj.prop("isEdible"):
        return fail("WRONG_STATE", f"the {obj.name} is not edible")
    poisonous = obj.prop("isPoisonous") and not obj.prop("isCooked")
    name = obj.name
    ctx.world.destroy(obj.uid)
    ctx.world.add_event("eaten", {"name": name, "poisonous": poisonous})
    body = ctx.world.agent_body(ctx.agent)
    if poisonous:
        body.set_prop("isIll", True)
        return make_result(f"I ate the {name}. My stomach turns: I feel ill.")
    return make_result(f"I ate the {name}. It was fine.")


def _do_read(ctx: ActionContext, arg1, arg2) -> dict:
    obj, err = ctx.reachable_obj(arg1)
    if err:
        return err
    if not obj.prop("isReadable"):
        return fail("WRONG_STATE", f"the {obj.name} has nothing to read")
    ctx.world.add_event("read", {"uid": obj.uid})
    return make_result(f'The {obj.name} reads: "{obj.prop("document")}"')


def _do_wait(ctx: ActionContext, arg1, arg2) -> dict:
    return make_result("I waited.")


def _do_feed(ctx: ActionContext, arg1, arg2) -> dict:
    ctx.world.add_event("feed_viewed", {})
    posts = ctx.world.feed[-FEED_WINDOW:]
    if not posts:
        return make_result("No posts.")
    lines = [f"[@{p['author']}] {p['text']}" for p in posts]
    return make_result("DiscoveryFeed, most recent posts:\n" + "\n".join(lines))


def _do_teleport_location(ctx: ActionContext, arg1, arg2) -> dict:
    name = str(arg1) if arg1 is not None else ""
    loc = ctx.world.locations.get(name)
    if loc is None:
        return fail("UNKNOWN_LOCATION", f"no known location named '{name}'")
    if not ctx.world.is_tile_passable(loc["x"], loc["y"]):
        return fail("BLOCKED", f"{name} is blocked right now")
    ctx.world.attach(ctx.agent.uid, ("tile", loc["x"], loc["y"]))
    ctx.agent.facing = loc.get("facing", "south")
    return make_result(f"I teleported to {name}.")


def _teleport_spot(world: WorldState, uid: int) -> Optional[tuple[int, int, str]]:
    """First passable tile beside the object, with facing back toward it."""
    pos = world.object_tile(uid)
    if pos is None:
        return None
    x, y = pos
    back = {"north": "south", "south": "north", "east": "west", "west": "east"}
    for dname in FACINGS:
        dx, dy = DIRECTIONS[dname]
        nx, ny = x + dx, y + dy
        if 0 <= nx < world.width and 0 <= ny < world.height and world.is_tile_passable(nx, ny):
            return nx, ny, back[dname]
    return None


def _do_teleport_object(ctx: ActionContext, arg1, arg2) -> dict:
    uid = _as_uid(arg1)
    if uid is None or uid not in ctx.world.objects:
        return fail("UNKNOWN_UID", f"no object with uid {arg1}")
    if uid not in ctx.agent.observed:
        return fail("WRONG_STATE", "you have not observed that object yet")
    spot = _teleport_spot(ctx.world, uid)
    if spot is None:
        return fail("BLOCKED", f"no open tile beside the {ctx.world.objects[uid].name}")
    nx, ny, facing = spot
    ctx.world.attach(ctx.agent.uid, ("tile", nx, ny))
    ctx.agent.facing = facing
    return make_result(f"I teleported beside the {ctx.world.objects[uid].name}.")


_HANDLERS = {
    "MOVE_DIRECTION": _do_move,
    "ROTATE_DIRECTION": _do_rotate,
    "TAKE": _do_take,
    "DROP": _do_drop,
    "PUT_GIVE": _do_put_give,
    "OPEN_CLOSE": _do_open_close,
    "ACTIVATE_DEACTIVATE": _do_activate,
    "TALK": _do_talk,
    "USE": _do_use,
    "EAT": _do_eat,
    "READ": _do_read,
    "WAIT": _do_wait,
    "FEED": _do_feed,
    "DIALOG_SELECT": _do_dialog_select,
    "TELEPORT_LOCATION": _do_teleport_location,
    "TELEPORT_OBJECT": _do_teleport_object,
}


# ---------------------------------------------------------------------------
# valid actions

def valid_actions(world: WorldState, agent: AgentState) -> list[dict]:
    """Every request offered here executes with success=true right now."""
    if agent.dialog is not None:
        n = len(dialog_options(world, agent))
        return [_spec("DIALOG_SELECT", i) for i in range(n)]

    out: list[dict] = [_spec("WAIT"), _spec("FEED")]
    ctx = ActionContext(world, agent)
    pos = world.object_tile(agent.uid)
    body = world.agent_body(agent)
    inv = list(body.contents)
    access = sorted(ctx.accessible())

    for d in FACINGS:
        out.append(_spec("ROTATE_DIRECTION", d))
        if d != agent.facing:
            out.append(_spec("MOVE_DIRECTION", d))  # executes as a rotation
        else:
            dx, dy = DIRECTIONS[d]
            nx, ny = pos[0] + dx, pos[1] + dy
            if 0 <= nx < world.width and 0 <= ny < world.height and world.is_tile_passable(nx, ny):
                out.append(_spec("MOVE_DIRECTION", d))

    inv_set = set(inv)
    for uid in access:
        obj = world.objects[uid]
        if obj.prop("isMovable") and not obj.prop("isAgent") and uid not in inv_set:
            out.append(_spec("TAKE", uid))
        openable = (obj.prop("isContainer") and obj.prop("isOpenable")) or obj.prop("isPassage")
        if openable:
            lock = obj.prop("requiresKey")
            if not (lock > 0 and not obj.prop("isOpen") and not _has_key(ctx, lock)):
                out.append(_spec("OPEN_CLOSE", uid))
        if obj.prop("isActivatable"):
            out.append(_spec("ACTIVATE_DEACTIVATE", uid))
        if obj.prop("isDialogable") and world.dialogs.get(uid):
            out.append(_spec("TALK", uid))
        if obj.prop("isEdible"):
            out.append(_spec("EAT", uid))
        if obj.prop("isReadable"):
            out.append(_spec("READ", uid))

    for uid in inv:
        out.append(_spec("DROP", uid))

    # containers / agents that can receive PUT_GIVE
    receivers = []
    for uid in access:
        obj = world.objects[uid]
        if obj.prop("isAgent") and uid != agent.uid:
            receivers.append(uid)
        elif obj.prop("isContainer") and not (obj.prop("isOpenable") and not obj.prop("isOpen")):
            receivers.append(uid)
    for item in inv:
        for recv in receivers:
            if recv != item:
                out.append(_spec("PUT_GIVE", item, recv))

    for uid in access:
        tool = world.objects[uid]
        if not tool.prop("isUsable"):
            continue
        kind = tool.prop("deviceKind")
        if kind in INSTRUMENT_KINDS:
            for tgt in access:
                if tgt != uid:
                    out.append(_spec("USE", uid, tgt))
        elif kind == "shovel":
            for tgt in access:
                if world.objects[tgt].prop("isShovelable") and not world.objects[tgt].prop("isOpen"):
                    out.append(_spec("USE", uid, tgt))
        elif kind.startswith("dispenser:"):
            for tgt in access:
                if world.objects[tgt].prop("deviceKind") == "mixjar":
                    out.append(_spec("USE", uid, tgt))
        elif kind == "mixjar":
            mix = tool.prop("mixtureDict")
            if mix and any(v > 0 for v in mix.values()):
                for tgt in access:
                    if world.objects[tgt].prop("rustLevel") != -1:
                        out.append(_spec("USE", uid, tgt))
        elif kind == "detectorpart":
            for tgt in access:
                t = world.objects[tgt]
                if (
                    tgt != uid
                    and t.prop("deviceKind") == "detectorpart"
                    and t.prop("deviceIndex") != tool.prop("deviceIndex")
                ):
                    out.append(_spec("USE", uid, tgt))

    for name in sorted(world.locations):
        loc = world.locations[name]
        if world.is_tile_passable(loc["x"], loc["y"]):
            out.append(_spec("TELEPORT_LOCATION", name))

    for uid in sorted(agent.observed):
        if uid in world.objects and _teleport_spot(world, uid) is not None:
            out.append(_spec("TELEPORT_OBJECT", uid))

    return out


def _spec(action: str, arg1=None, arg2=None) -> dict:
    return {"action": action, "arg1": arg1, "arg2": arg2}
