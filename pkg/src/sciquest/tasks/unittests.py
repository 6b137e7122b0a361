"""Competency tasks: ten small, mechanically-focused scenarios (dialog,
measurement, fetch quests, doors, mazes) used to probe single skills.

Each theme follows the same gen_secrets/build/finalize interface as the
discovery themes; this module dispatches on task.theme internally.
"""

from __future__ import annotations

from .base import item
from .mapgen import (
    add_location,
    add_npc,
    add_player,
    carve_room,
    fill_rect,
    new_world,
    place_fixture,
    place_item,
    place_sign,
)

UNIT_TEST_THEMES = [
    "dialog", "measure", "pickplace", "pickgive", "readfeed",
    "doors", "keys", "findroom", "search", "movingagent",
]

FRUIT_WORDS = ["kiwi", "mango", "papaya", "plum", "cherry",
               "apricot", "fig", "date", "lychee"]

SMALL_ITEMS = ["tin cup", "rope coil", "oil lamp", "wool blanket", "water jug"]

MEASURE_ITEMS = ["copper ingot", "glass vial", "clay pot", "iron bolt"]
MEASURE_PROPS = {
    "temperatureC": ("temperature", "C", "thermometer"),
    "density": ("density", " g/cm^3", "densitometer"),
    "ph": ("pH", "", "phmeter"),
    "radiationusvh": ("radiation", " uSv/h", "radiationmeter"),
}
MEASURE_INSTRUMENTS = [
    ("thermometer", "thermometer"),
    ("densitometer", "densitometer"),
    ("pH meter", "phmeter"),
    ("radiation meter", "radiationmeter"),
    ("microscope", "microscope"),
]
BIN_EDGES = [0.0, 2.5, 5.0, 7.5, 10.0]

KEY_NAMES = ["brass key", "iron key", "copper key"]

ROOM_KITS = {
    "kitchen": [("stove", "A cast-iron cooking stove."),
                ("soup pot", "A big dented soup pot.")],
    "bedroom": [("bed", "A neatly made bed."),
                ("pillow", "A goose-down pillow.")],
    "library": [("bookshelf", "A shelf sagging with books."),
                ("writing desk", "A desk stained with ink.")],
    "workshop": [("anvil", "A scarred old anvil."),
                 ("toolbox", "A toolbox of worn hand tools.")],
}

NPC_NAMES = ["farmer Lee", "trader Oma", "scout Pell"]


def _rect_loop(x0: int, y0: int, x1: int, y1: int) -> list[list[int]]:
    """Clockwise perimeter tiles of a rectangle, as an NPC route."""
    loop = []
    for x in range(x0, x1 + 1):
        loop.append([x, y0])
    for y in range(y0 + 1, y1 + 1):
        loop.append([x1, y])
    for x in range(x1 - 1, x0 - 1, -1):
        loop.append([x, y1])
    for y in range(y1 - 1, y0, -1):
        loop.append([x0, y])
    return loop


# ---------------------------------------------------------------------------
# secrets

def gen_secrets(task, rng) -> dict:
    theme = task.theme
    if theme == "dialog":
        return {"targets": rng.sample(FRUIT_WORDS, 3)}
    if theme == "measure":
        prop = rng.choice(sorted(MEASURE_PROPS))
        bin_index = rng.randint(0, 3)
        lo, hi = BIN_EDGES[bin_index], BIN_EDGES[bin_index + 1]
        value = round(rng.uniform(lo + 0.3, hi - 0.3), 2)
        return {
            "target_item": rng.choice(MEASURE_ITEMS),
            "prop": prop,
            "value": value,
            "bin_index": bin_index,
        }
    if theme == "pickplace":
        return {
            "target_item": rng.choice(SMALL_ITEMS),
            "container": rng.choice(["metal box", "wooden crate"]),
        }
    if theme == "pickgive":
        return {
            "target_item": rng.choice(SMALL_ITEMS),
            "npc": rng.choice(NPC_NAMES),
        }
    if theme == "readfeed":
        return {
            "target_item": rng.choice(SMALL_ITEMS),
            "post_slot": rng.randint(3, 6),
        }
    if theme == "doors":
        return {"tree": _maze_tree(rng), "flag_cell": None}
    if theme == "keys":
        return {"door_ys": [rng.randint(10, 14) for _ in range(3)]}
    if theme == "findroom":
        order = sorted(ROOM_KITS)
        rng.shuffle(order)
        return {"room_order": order, "target_room": rng.choice(order)}
    if theme == "search":
        return {"spot": rng.choice(["cabinet", "haystack", "behind"])}
    if theme == "movingagent":
        return {}
    raise ValueError(f"UNKNOWN_THEME: {theme}")


def _maze_tree(rng) -> list[list]:
    """Random spanning tree over the 3x2 room grid (randomized DFS)."""
    cells = [(cx, cy) for cy in range(2) for cx in range(3)]
    seen = {(0, 0)}
    stack = [(0, 0)]
    edges = []
    while stack:
        cx, cy = stack[-1]
        neighbors = [
            (cx + dx, cy + dy)
            for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1))
            if (cx + dx, cy + dy) in cells and (cx + dx, cy + dy) not in seen
        ]
        if not neighbors:
            stack.pop()
            continue
        nxt = rng.choice(sorted(neighbors))
        seen.add(nxt)
        edges.append([list((cx, cy)), list(nxt)])
        stack.append(nxt)
    return edges


# ---------------------------------------------------------------------------
# builders

def build(task):
    return _BUILDERS[task.theme](task)


def _build_dialog(task):
    world, rng = new_world(task)
    targets = task.secrets["targets"]
    player = add_player(world, 16, 16, facing="north")

    nodes: dict = {}
    for r, target in enumerate(targets):
        words = list(FRUIT_WORDS)
        rng.shuffle(words)
        nxt = f"round{r + 1}" if r + 1 < len(targets) else "done"
        options = []
        for word in words:
            if word == target:
                options.append({
                    "say": word, "next": nxt,
                    "effects": [{"kind": "event", "name": "dialog_round",
                                 "data": {"round": r}}],
                })
            else:
                options.append({"say": word, "next": f"round{r}", "effects": []})
        nodes[f"round{r}"] = {
            "text": f'Round {r + 1} of 3: select the dialog item that says "{target}".',
            "options": options,
        }
    nodes["done"] = {
        "text": "Well done, that is all three rounds.",
        "options": [{"say": "Goodbye.", "next": None, "effects": []}],
    }
    nodes["root"] = nodes.pop("round0")
    for node in nodes.values():
        for opt in node["options"]:
            if opt["next"] == "round0":
                opt["next"] = "root"

    quizmaster = add_npc(
        world, "quizmaster", 16, 12,
        "A cheerful quizmaster with a clipboard.",
        dialog=nodes,
    )
    add_location(world, "quiz stand", 16, 13, facing="north")
    refs = {"player": player.uid, "quizmaster": quizmaster.uid}
    return world, refs


def _build_measure(task):
    world, rng = new_world(task)
    s = task.secrets
    label, unit, instrument_kind = MEASURE_PROPS[s["prop"]]
    carve_room(world, 6, 6, 26, 20)
    player = add_player(world, 16, 18, facing="north")

    item_uids = {}
    for i, name in enumerate(MEASURE_ITEMS):
        baseline = {"temperatureC": 1.0, "density": 1.0, "ph": 1.0, "radiationusvh": 1.0}
        if name == s["target_item"]:
            baseline[s["prop"]] = s["value"]
        obj = place_item(world, name, 9 + 3 * i, 10, "A small sample for the bench.",
                         props=baseline)
        item_uids[name] = obj.uid

    instrument_uids = {}
    for j, (name, kind) in enumerate(MEASURE_INSTRUMENTS):
        tool = place_item(world, name, 8 + 2 * j, 13, f"A benchtop {name}.",
                          props={"isUsable": True, "deviceKind": kind})
        instrument_uids[kind] = tool.uid

    bin_uids = []
    for b in range(4):
        letter = "ABCD"[b]
        lo, hi = BIN_EDGES[b], BIN_EDGES[b + 1]
        box = place_fixture(
            world, f"Container {letter}", 9 + 3 * b, 16,
            f"A labeled container for samples with {label} range {lo}-{hi}{unit}.",
            props={"isContainer": True, "containerPrefix": "in", "isReadable": True,
                   "document": f"{label} range {lo}-{hi}{unit} in Container {letter}"},
        )
        bin_uids.append(box.uid)

    sign = place_sign(
        world,
        f"Protocol: take the {s['target_item']}, measure its {label} with the "
        f"{dict((k, n) for n, k in MEASURE_INSTRUMENTS)[instrument_kind]}, and place it "
        "in the container whose printed range covers the reading.",
        16, 17,
    )
    add_location(world, "sample shelf", 16, 11, facing="north")
    add_location(world, "container row", 16, 15, facing="north")
    refs = {
        "player": player.uid,
        "items": item_uids,
        "instruments": instrument_uids,
        "bins": bin_uids,
        "target": item_uids[s["target_item"]],
        "gold_bin": bin_uids[s["bin_index"]],
        "instrument_kind": instrument_kind,
        "sign": sign.uid,
    }
    return world, refs


def _build_pickplace(task):
    world, rng = new_world(task)
    s = task.secrets
    player = add_player(world, 16, 18, facing="north")
    item_uids = {}
    for i, name in enumerate(SMALL_ITEMS):
        obj = place_item(world, name, 10 + 3 * i, 12, "Household kit.")
        item_uids[name] = obj.uid
    containers = {}
    for name, x in [("metal box", 13), ("wooden crate", 19)]:
        box = place_fixture(world, name, x, 15, "An open storage container.",
                            props={"isContainer": True, "containerPrefix": "in"})
        containers[name] = box.uid
    sign = place_sign(world, f"Put the {s['target_item']} in the {s['container']}.",
                      16, 16)
    add_location(world, "storage row", 16, 14, facing="north")
    refs = {
        "player": player.uid,
        "items": item_uids,
        "containers": containers,
        "target": item_uids[s["target_item"]],
        "gold_container": containers[s["container"]],
        "sign": sign.uid,
    }
    return world, refs


def _build_pickgive(task):
    world, rng = new_world(task)
    s = task.secrets
    player = add_player(world, 16, 19, facing="north")
    item_uids = {}
    for i, name in enumerate(SMALL_ITEMS):
        obj = place_item(world, name, 10 + 3 * i, 15, "Household kit.")
        item_uids[name] = obj.uid
    npc_uids = {}
    for i, name in enumerate(NPC_NAMES):
        npc = add_npc(
            world, name, 11 + 5 * i, 10,
            "A villager going about the day.",
            dialog={"root": {
                "text": "Hello there." if name != s["npc"]
                        else f"Hello there. I am still waiting on that {s['target_item']}.",
                "options": [{"say": "Good day.", "next": None, "effects": []}],
            }},
        )
        npc_uids[name] = npc.uid
    sign = place_sign(world, f"Deliver the {s['target_item']} to {s['npc']}.", 16, 17)
    add_location(world, "village green", 16, 12, facing="north")
    refs = {
        "player": player.uid,
        "items": item_uids,
        "npcs": npc_uids,
        "target": item_uids[s["target_item"]],
        "gold_npc": npc_uids[s["npc"]],
        "sign": sign.uid,
    }
    return world, refs


def _build_readfeed(task):
    world, rng = new_world(task)
    s = task.secrets
    player = add_player(world, 16, 18, facing="north")
    item_uids = {}
    for i, name in enumerate(SMALL_ITEMS):
        obj = place_item(world, name, 10 + 3 * i, 12, "Household kit.")
        item_uids[name] = obj.uid
    basket = place_fixture(world, "collection basket", 16, 15,
                           "A woven collection basket.",
                           props={"isContainer": True, "containerPrefix": "in"})
    chatter = [
        ("ranger post", "Trail conditions fine this week."),
        ("quartermaster", "Inventory day is coming up."),
        ("colonist Jun", "Saw a meteor shower last night, spectacular."),
        ("ranger post", "Reminder to log your field hours."),
        ("colonist Mara", "Anyone up for cards this evening?"),
        ("quartermaster", "New rations arrive on the next shuttle."),
    ]
    posts = list(chatter)
    posts.insert(s["post_slot"],
                 ("supervisor", f"Notice: put the {s['target_item']} in the "
                                "collection basket."))
    for author, text in posts:
        world.append_feed(author, text)
    sign = place_sign(world, "Check the net feed for today's collection notice.",
                      16, 16)
    add_location(world, "collection point", 16, 16, facing="north")
    refs = {
        "player": player.uid,
        "items": item_uids,
        "basket": basket.uid,
        "target": item_uids[s["target_item"]],
        "sign": sign.uid,
    }
    return world, refs


def _build_doors(task):
    world, rng = new_world(task)
    edges = task.secrets["tree"]
    fill_rect(world, 6, 6, 24, 18, "#")
    for cy in range(2):
        for cx in range(3):
            fill_rect(world, 7 + 6 * cx, 7 + 6 * cy, 11 + 6 * cx, 11 + 6 * cy, "_")

    door_uids = []
    adjacency: dict[tuple, list] = {(cx, cy): [] for cy in range(2) for cx in range(3)}
    for (a, b) in [(tuple(e[0]), tuple(e[1])) for e in edges]:
        adjacency[a].append(b)
        adjacency[b].append(a)
        (ax, ay), (bx, by) = sorted([a, b])
        if ax != bx:  # shared vertical wall
            wall_x = 12 + 6 * ax
            door_y = rng.randint(7 + 6 * ay, 11 + 6 * ay)
            dx, dy = wall_x, door_y
        else:  # shared horizontal wall
            wall_y = 12 + 6 * ay
            door_x = rng.randint(7 + 6 * ax, 11 + 6 * ax)
            dx, dy = door_x, wall_y
        world.set_terrain(dx, dy, "_")
        door = place_fixture(
            world, "door", dx, dy, "A door. It can be opened and closed.",
            props={"isPassage": True, "isOpen": False, "isPassable": False},
        )
        door_uids.append(door.uid)

    # farthest cell from the start, by tree distance
    dist = {(0, 0): 0}
    frontier = [(0, 0)]
    while frontier:
        cur = frontier.pop(0)
        for nxt in adjacency[cur]:
            if nxt not in dist:
                dist[nxt] = dist[cur] + 1
                frontier.append(nxt)
    far = max(dist, key=lambda c: (dist[c], c))
    flag = place_item(world, "red flag", 9 + 6 * far[0], 9 + 6 * far[1],
                      "A small red flag on a stick.")

    player = add_player(world, 9, 9, facing="north")
    refs = {"player": player.uid, "doors": door_uids, "flag": flag.uid}
    return world, refs


def _build_keys(task):
    world, rng = new_world(task)
    door_ys = task.secrets["door_ys"]
    fill_rect(world, 4, 8, 28, 16, "#")
    for i in range(4):
        fill_rect(world, 5 + 6 * i, 9, 9 + 6 * i, 15, "_")

    door_uids = []
    for i, door_y in enumerate(door_ys):
        wall_x = 10 + 6 * i
        world.set_terrain(wall_x, door_y, "_")
        door = place_fixture(
            world, f"locked door {i + 1}", wall_x, door_y,
            "A sturdy door with a keyhole.",
            props={"isPassage": True, "isOpen": False, "isPassable": False,
                   "requiresKey": i + 1},
        )
        door_uids.append(door.uid)

    key_uids = []
    for i, name in enumerate(KEY_NAMES):
        x = rng.randint(5 + 6 * i, 9 + 6 * i)
        y = rng.randint(9, 15)
        key = place_item(world, name, x, y, "A key on a loop of cord.",
                         props={"keyID": i + 1})
        key_uids.append(key.uid)

    flag = place_item(world, "red flag", rng.randint(23, 27), rng.randint(9, 15),
                      "A small red flag on a stick.")
    player = add_player(world, 6, 12, facing="east")
    refs = {"player": player.uid, "doors": door_uids, "keys": key_uids,
            "flag": flag.uid}
    return world, refs


def _build_findroom(task):
    world, rng = new_world(task)
    s = task.secrets
    fill_rect(world, 8, 6, 24, 18, "#")
    quadrants = [(9, 7), (17, 7), (9, 13), (17, 13)]
    door_spots = [(12, 6), (20, 6), (12, 18), (20, 18)]
    rects = []
    for (x0, y0), (dx, dy) in zip(quadrants, door_spots):
        fill_rect(world, x0, y0, x0 + 6, y0 + 4, "_")
        world.set_terrain(dx, dy, "_")
        place_fixture(world, "door", dx, dy, "A door. It can be opened and closed.",
                      props={"isPassage": True, "isOpen": False, "isPassable": False})
        rects.append([x0, y0, x0 + 6, y0 + 4])

    room_rects = {}
    for room, (x0, y0), rect in zip(s["room_order"], quadrants, rects):
        room_rects[room] = rect
        for k, (name, desc) in enumerate(ROOM_KITS[room]):
            place_fixture(world, name, x0 + 1 + 2 * k, y0 + 1, desc)

    flag = place_item(world, "red flag", 16, 20, "A small red flag on a stick.")
    place_sign(world, f"Plant the red flag in the {s['target_room']}.", 15, 20)
    player = add_player(world, 16, 21, facing="north")
    add_location(world, "front yard", 16, 20, facing="north")
    refs = {
        "player": player.uid,
        "flag": flag.uid,
        "room_rects": room_rects,
        "gold_rect": room_rects[s["target_room"]],
    }
    return world, refs


def _build_search(task):
    world, rng = new_world(task)
    spot = task.secrets["spot"]
    carve_room(world, 8, 8, 18, 14, door_at=(13, 14))
    player = add_player(world, 13, 18, facing="north")

    cabinet = place_fixture(
        world, "cabinet", 10, 10, "A tall storage cabinet.",
        props={"isContainer": True, "isOpenable": True, "isOpen": False,
               "containerPrefix": "in"},
    )
    flag_props = {"isMovable": True, "isPassable": True}
    if spot == "cabinet":
        flag = world.add_object("red flag", "A small red flag on a stick.",
                                props=flag_props, at=("obj", cabinet.uid))
    elif spot == "haystack":
        flag = place_item(world, "red flag", 22, 17, "A small red flag on a stick.")
        place_fixture(world, "haystack", 22, 17, "A loose heap of hay.",
                      props={"isMovable": True, "obscuresObjectsBelow": True})
    else:
        flag = place_item(world, "red flag", 13, 7, "A small red flag on a stick.")

    place_fixture(world, "garden bench", 20, 12, "A weathered bench.")
    add_location(world, "front door", 13, 15, facing="north")
    add_location(world, "back of the house", 13, 6, facing="south")
    add_location(world, "hay corner", 21, 17, facing="east")
    refs = {"player": player.uid, "flag": flag.uid, "cabinet": cabinet.uid,
            "spot": spot}
    return world, refs


def _build_movingagent(task):
    world, rng = new_world(task)
    player = add_player(world, 16, 16, facing="north")
    loops = [
        _rect_loop(5, 5, 11, 10),
        _rect_loop(20, 5, 26, 10),
        _rect_loop(12, 20, 20, 26),
    ]
    npc_uids = []
    for name, loop in zip(NPC_NAMES, loops):
        npc = add_npc(
            world, name, loop[0][0], loop[0][1],
            "A villager out on their daily rounds.",
            route=loop,
            dialog={"root": {
                "text": "Lovely day for a walk, is it not?",
                "options": [
                    {"say": "Storm coming. Head home before the rain!",
                     "next": None, "effects": []},
                    {"say": "Never mind.", "next": None, "effects": []},
                ],
            }},
        )
        # warn option needs this uid in its event payload, patch it in
        world.dialogs[npc.uid]["root"]["options"][0]["effects"] = [
            {"kind": "event", "name": "notified", "data": {"uid": npc.uid}},
        ]
        npc_uids.append(npc.uid)
    add_location(world, "village square", 16, 15, facing="north")
    refs = {"player": player.uid, "npcs": npc_uids}
    return world, refs


_BUILDERS = {
    "dialog": _build_dialog,
    "measure": _build_measure,
    "pickplace": _build_pickplace,
    "pickgive": _build_pickgive,
    "readfeed": _build_readfeed,
    "doors": _build_doors,
    "keys": _build_keys,
    "findroom": _build_findroom,
    "search": _build_search,
    "movingagent": _build_movingagent,
}


# ---------------------------------------------------------------------------
# scorecards

def finalize(task, refs) -> None:
    s = task.secrets
    theme = task.theme
    player_pred = lambda uids: {"kind": "in_container", "uids": uids,
                                "container_uid": refs["player"]}

    if theme == "dialog":
        task.description = (
            "The quizmaster will ask you to pick a particular word three "
            "times. Talk to them and choose the requested option each round."
        )
        task.scorecard_template = [
            item("P1", "The quizmaster has been spoken to", 1,
                 {"kind": "event_once", "name": "talked",
                  "match": {"uid": refs["quizmaster"]}, "points": 1}),
            item("P2", "All three rounds have been answered correctly", 3,
                 {"kind": "event_distinct", "name": "dialog_round",
                  "field": "round", "cap": 3, "points_each": 1}),
        ]
        task.completion = {"kind": "all_of", "subs": [
            {"kind": "event", "name": "dialog_round", "match": {"round": r}}
            for r in range(3)
        ]}
    elif theme == "measure":
        label = MEASURE_PROPS[s["prop"]][0]
        task.description = (
            f"Take the {s['target_item']}, measure its {label}, and file it "
            "in the container whose printed range covers the reading."
        )
        task.scorecard_template = [
            item("P1", f"The {s['target_item']} has been in an agent's inventory", 1,
                 {"kind": "collect", "names": [s["target_item"]], "points_each": 1}),
            item("P2", f"The {s['target_item']} has been measured with the right instrument", 1,
                 {"kind": "measure", "instruments": [refs["instrument_kind"]],
                  "target_uids": [refs["target"]], "points_each": 1}),
            item("P3", "The sample is filed in the matching container", 2,
                 {"kind": "predicate_points", "points": 2,
                  "pred": {"kind": "in_container", "uids": [refs["target"]],
                           "container_uid": refs["gold_bin"]}}),
        ]
        task.completion = {"kind": "in_container", "uids": [refs["target"]],
                           "container_uid": refs["gold_bin"]}
    elif theme == "pickplace":
        task.description = f"Put the {s['target_item']} in the {s['container']}."
        task.scorecard_template = [
            item("P1", f"The {s['target_item']} has been in an agent's inventory", 1,
                 {"kind": "collect", "names": [s["target_item"]], "points_each": 1}),
            item("P2", f"The {s['target_item']} is in the {s['container']}", 2,
                 {"kind": "predicate_points", "points": 2,
                  "pred": {"kind": "in_container", "uids": [refs["target"]],
                           "container_uid": refs["gold_container"]}}),
        ]
        task.completion = {"kind": "in_container", "uids": [refs["target"]],
                           "container_uid": refs["gold_container"]}
    elif theme == "pickgive":
        task.description = f"Find the {s['target_item']} and hand it to {s['npc']}."
        received = {"kind": "npc_received", "npc_uid": refs["gold_npc"],
                    "substrings": [s["target_item"]], "count": 1}
        task.scorecard_template = [
            item("P1", f"The {s['target_item']} has been in an agent's inventory", 1,
                 {"kind": "collect", "names": [s["target_item"]], "points_each": 1}),
            item("P2", f"{s['npc']} has received the {s['target_item']}", 2,
                 {"kind": "predicate_points", "points": 2, "pred": received}),
        ]
        task.completion = received
    elif theme == "readfeed":
        task.description = (
            "Today's collection notice went out on the net feed. Check the "
            "feed, fetch the listed item, and put it in the collection basket."
        )
        task.scorecard_template = [
            item("P1", "The net feed has been checked", 1,
                 {"kind": "event_once", "name": "feed_viewed", "points": 1}),
            item("P2", "The listed item has been in an agent's inventory", 1,
                 {"kind": "collect", "names": [s["target_item"]], "points_each": 1}),
            item("P3", "The listed item is in the collection basket", 2,
                 {"kind": "predicate_points", "points": 2,
                  "pred": {"kind": "in_container", "uids": [refs["target"]],
                           "container_uid": refs["basket"]}}),
        ]
        task.completion = {"kind": "in_container", "uids": [refs["target"]],
                           "container_uid": refs["basket"]}
    elif theme == "doors":
        task.description = (
            "The house is a small maze of doors. Open every door, find the "
            "red flag, and take it."
        )
        task.scorecard_template = [
            item("P1", "Every door has been opened", len(refs["doors"]),
                 {"kind": "prop_match_each",
                  "pairs": [[uid, "isOpen", True] for uid in refs["doors"]],
                  "points_each": 1}),
            item("P2", "The red flag has been taken", 2,
                 {"kind": "collect", "names": ["red flag"], "points_each": 2}),
        ]
        task.completion = {"kind": "all_of", "subs": [
            {"kind": "prop_all", "uids": refs["doors"], "prop": "isOpen",
             "value": True},
            player_pred([refs["flag"]]),
        ]}
    elif theme == "keys":
        task.description = (
            "Three locked doors stand between you and the red flag. The keys "
            "are lying around nearby. Collect them, get through, take the flag."
        )
        task.scorecard_template = [
            item("P1", "Every key has been in an agent's inventory", 3,
                 {"kind": "collect", "names": KEY_NAMES, "points_each": 1}),
            item("P2", "Every locked door has been opened", 3,
                 {"kind": "prop_match_each",
                  "pairs": [[uid, "isOpen", True] for uid in refs["doors"]],
                  "points_each": 1}),
            item("P3", "The red flag has been taken", 2,
                 {"kind": "predicate_points", "points": 2,
                  "pred": player_pred([refs["flag"]])}),
        ]
        task.completion = player_pred([refs["flag"]])
    elif theme == "findroom":
        task.description = (
            f"Work out which room is the {s['target_room']} from what is in "
            "it, then plant the red flag there."
        )
        in_room = {"kind": "flag_in_region", "flag_uid": refs["flag"],
                   "rect": refs["gold_rect"]}
        task.scorecard_template = [
            item("P1", "The red flag has been in an agent's inventory", 1,
                 {"kind": "collect", "names": ["red flag"], "points_each": 1}),
            item("P2", "The flag is planted in the right room", 2,
                 {"kind": "predicate_points", "points": 2, "pred": in_room}),
        ]
        task.completion = in_room
    elif theme == "search":
        task.description = (
            "A red flag is somewhere on this property, inside or out. "
            "Find it and take it."
        )
        task.scorecard_template = [
            item("P1", "The red flag has been taken", 2,
                 {"kind": "collect", "names": ["red flag"], "points_each": 2}),
        ]
        task.completion = player_pred([refs["flag"]])
    elif theme == "movingagent":
        task.description = (
            "A storm is rolling in. Catch each of the three villagers on "
            "their rounds and warn them to head home before the rain."
        )
        task.scorecard_template = [
            item("P1", "Every villager has been warned about the rain", 3,
                 {"kind": "event_distinct", "name": "notified", "field": "uid",
                  "allowed": refs["npcs"], "cap": 3, "points_each": 1}),
        ]
        task.completion = {"kind": "all_of", "subs": [
            {"kind": "event", "name": "notified", "match": {"uid": uid}}
            for uid in refs["npcs"]
        ]}
    else:
        raise ValueError(f"UNKNOWN_THEME: {theme}")
    task.knowledge_questions = []
