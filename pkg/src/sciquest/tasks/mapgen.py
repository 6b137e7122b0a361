"""Map-construction helpers shared by the theme generators.

All placement is deterministic: helpers draw only from the RngStream they
are handed, and iterate in fixed orders, so rebuilding a task reproduces
every uid and tile exactly.
"""

from __future__ import annotations

from typing import Optional

from ..rng import RngStream, stream_for_task
from ..world import AgentState, ObjectInstance, WorldState


def new_world(task) -> tuple[WorldState, RngStream]:
    """Fresh bordered grass map plus the task's world-build stream."""
    world = WorldState(task_id=task.task_id)
    for x in range(world.width):
        world.set_terrain(x, 0, "#")
        world.set_terrain(x, world.height - 1, "#")
    for y in range(world.height):
        world.set_terrain(0, y, "#")
        world.set_terrain(world.width - 1, y, "#")
    rng = stream_for_task(task.theme, task.difficulty, task.seed).child("world")
    return world, rng


def fill_rect(world: WorldState, x0: int, y0: int, x1: int, y1: int, code: str) -> None:
    for y in range(y0, y1 + 1):
        for x in range(x0, x1 + 1):
            world.set_terrain(x, y, code)


def carve_room(
    world: WorldState,
    x0: int,
    y0: int,
    x1: int,
    y1: int,
    door_at: Optional[tuple[int, int]] = None,
    door_name: str = "door",
    locked_id: int = 0,
) -> Optional[ObjectInstance]:
    """Walled room with floor inside; optionally a door object in the wall.

    The door tile gets floor terrain so the passage is walkable once the
    door object itself is opened.
    """
    fill_rect(world, x0, y0, x1, y1, "#")
    fill_rect(world, x0 + 1, y0 + 1, x1 - 1, y1 - 1, "_")
    if door_at is None:
        return None
    dx, dy = door_at
    world.set_terrain(dx, dy, "_")
    props = {"isPassage": True, "isOpenable": False, "isOpen": False, "isPassable": False}
    if locked_id > 0:
        props["requiresKey"] = locked_id
    return world.add_object(
        door_name,
        "A door. It can be opened and closed.",
        props=props,
        at=("tile", dx, dy),
    )


def add_player(world: WorldState, x: int, y: int, facing: str = "north") -> AgentState:
    body = world.add_object(
        "explorer",
        "You, the field scientist.",
        props={"isAgent": True},
        at=("tile", x, y),
    )
    agent = AgentState(uid=body.uid, facing=facing)
    world.agents.append(agent)
    return agent


def add_npc(
    world: WorldState,
    name: str,
    x: int,
    y: int,
    description: str = "",
    dialog: Optional[dict] = None,
    props: Optional[dict] = None,
    route: Optional[list] = None,
    wander: bool = False,
) -> ObjectInstance:
    merged = {"isAgent": True, "isNPC": True}
    if dialog is not None:
        merged["isDialogable"] = True
    if route:
        merged["npcMovement"] = "route"
        merged["npcRoute"] = [list(p) for p in route]
    elif wander:
        merged["npcMovement"] = "wander"
    if props:
        merged.update(props)
    body = world.add_object(name, description, props=merged, at=("tile", x, y))
    world.agents.append(AgentState(uid=body.uid, facing="south"))
    if dialog is not None:
        world.dialogs[body.uid] = dialog
    return body


def place_item(
    world: WorldState,
    name: str,
    x: int,
    y: int,
    description: str = "",
    props: Optional[dict] = None,
) -> ObjectInstance:
    """Small takeable object; walkable so dropped items never wall anyone in."""
    merged = {"isMovable": True, "isPassable": True}
    if props:
        merged.update(props)
    return world.add_object(name, description, props=merged, at=("tile", x, y))


def place_fixture(
    world: WorldState,
    name: str,
    x: int,
    y: int,
    description: str = "",
    props: Optional[dict] = None,
) -> ObjectInstance:
    merged: dict = {}
    if props:
        merged.update(props)
    return world.add_object(name, description, props=merged, at=("tile", x, y))


def place_sign(
    world: WorldState,
    text: str,
    x: int,
    y: int,
    name: str = "sign",
    passable: bool = True,
) -> ObjectInstance:
    return world.add_object(
        name,
        "A sign with writing on it.",
        props={"isReadable": True, "document": text, "isPassable": passable},
        at=("tile", x, y),
    )


def add_location(world: WorldState, name: str, x: int, y: int, facing: str = "south") -> None:
    world.locations[name] = {"x": x, "y": y, "facing": facing}


def scatter(
    world: WorldState,
    rng: RngStream,
    x0: int,
    y0: int,
    x1: int,
    y1: int,
    count: int,
    min_sep: int = 2,
    avoid: Optional[set] = None,
) -> list[tuple[int, int]]:
    """`count` spread-out free tiles inside the rectangle (inclusive bounds)."""
    banned = set(avoid or ())
    picked: list[tuple[int, int]] = []
    attempts = 0
    while len(picked) < count:
        attempts += 1
        if attempts > 4000:
            raise RuntimeError("scatter could not fit the requested placements")
        x = rng.randint(x0, x1)
        y = rng.randint(y0, y1)
        if (x, y) in banned or world.stack(x, y) or not world.is_tile_passable(x, y):
            continue
        if any(max(abs(x - px), abs(y - py)) < min_sep for px, py in picked):
            continue
        picked.append((x, y))
        banned.add((x, y))
    return picked
