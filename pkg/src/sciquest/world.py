"""Grid world state: terrain, object forest, agents, feed, per-tick update.

The world is a 32x32 tile grid. Terrain is a flat layer of named tile kinds
(grass, wall, ...). Objects live in a forest: each object is parented either
to a tile or to a container object, and the `objects` table maps uid to the
instance. Agents are objects too (isAgent), with per-agent facing, observed
uids, dialog state and action history kept in AgentState.

Property model: every object carries a sparse PropertyBag over a fixed key
set (the common storage-class keys plus registered theme extensions). Keys
outside the registry are rejected so generator typos fail loudly instead of
silently reading defaults.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from .canon import canonical_dumps, state_hash
from .rng import tick_hash_rng

GRID_W = 32
GRID_H = 32

# Screen-style coordinates: y grows downward, so north is -y.
DIRECTIONS = {
    "north": (0, -1),
    "south": (0, 1),
    "east": (1, 0),
    "west": (-1, 0),
}
FACINGS = ("north", "east", "south", "west")

TERRAIN_LEGEND = {
    ".": "grass",
    "_": "floor",
    "#": "wall",
    "~": "water",
    ",": "path",
    "=": "sand",
    "%": "dirt",
}
TERRAIN_PASSABLE = {
    "grass": True,
    "floor": True,
    "wall": False,
    "water": False,
    "path": True,
    "sand": True,
    "dirt": True,
}


# Common storage-class property keys and their unset defaults. Booleans are
# false unless set; numeric sentinels are -1 where a reading of -1 means
# "not applicable / inconclusive"; ambient temperature is 20 C and background
# radiation 0.0 uSv/h so instruments read something sensible everywhere.
BASE_DEFAULTS: dict[str, Any] = {
    "gridLocation": [],
    "isMovable": False,
    "isPassable": False,
    "obscuresObjectsBelow": False,
    "isActivatable": False,
    "isActivated": False,
    "isUsable": False,
    "isDialogable": False,
    "isShovelable": False,
    "isReadable": False,
    "document": "",
    "temperatureC": 20.0,
    "heatSourceMaxTemp": -1,
    "coolSourceMinTemp": -1,
    "isLiving": False,
    "substanceName": "",
    "isSubstance": False,
    "isAutoReacting": False,
    "mixtureDict": {},
    "requiresKey": 0,
    "keyID": 0,
    "radiocarbonAge": -1,
    "radioisotopeValues": [],
    "soilNutrients": {},
    "needsNutrientLevels": {},
    "antirequirementsNutrientLevels": [],
    "density": -1,
    "microscopeModifierText": [],
    "microscopeDesc": "",
    "color": "",
    "spectrum": [],
    "ph": -1,
    "radiationusvh": 0.0,
    "nitrogen": -1,
    "phosphorus": -1,
    "potassium": -1,
    "cosCanBeLiquid": False,
    "cosCanBeSolid": False,
    "cosCanBeGas": False,
    "cosMeltingPointC": -1,
    "cosBoilingPointC": -1,
    "cosCombustionPointC": -1,
    "livingMinTemp": -1,
    "livingMaxTemp": -1,
    "isContainer": False,
    "isOpenable": False,
    "isOpenContainer": False,
    "containerPrefix": "in",
    "isOpen": False,
    "contentsVisible2D": True,
    "contents": [],
    "parentContainer": -1,
    "parts": [],
    "subparts": [],
    "isEdible": False,
    "isCooked": False,
    "isPoisonous": False,
    "isPassage": False,
    "materials": [],
    "manualMaterialNames": [],
    "actionHistory": [],
    "isAgent": False,
    "isNPC": False,
}

# Theme-specific properties registered on top of the base set. Objects like
# a quantum crystal carry keys the base class does not define.
EXTENSION_DEFAULTS: dict[str, Any] = {
    "proteinValues": {},
    "resonanceFrequency": -1,
    "dialFrequency": -1,
    "rustLevel": -1,
    "isIll": False,
    "deviceKind": "",
    "deviceIndex": -1,
    "npcRoute": [],
    "npcMovement": "",
    "routeStep": 0,
    "growthStage": 0,
    "plantedTick": -1,
    "pendulumLength": -1,
    "pendulumGravity": -1,
    "dispenseSubstance": "",
    "tankCapacityL": -1,
}

KNOWN_PROPS = dict(BASE_DEFAULTS)
KNOWN_PROPS.update(EXTENSION_DEFAULTS)


class PropertyBag:
    """Sparse property map over the registered key set.

    Stores only values that differ from the default; reads fall back to the
    documented defaults. Unknown keys raise KeyError on read and write.
    """

    __slots__ = ("_values",)

    def __init__(self, values: Optional[dict] = None):
        self._values: dict[str, Any] = {}
        if values:
            for k, v in values.items():
                self[k] = v

    def __getitem__(self, key: str) -> Any:
        if key not in KNOWN_PROPS:
            raise KeyError(f"unknown property: {key}")
        if key in self._values:
            return self._values[key]
        d = KNOWN_PROPS[key]
        # Mutable defaults are copied on first read-through so callers can't
        # alias the shared default.
        return copy.deepcopy(d) if isinstance(d, (list, dict)) else d

    def __setitem__(self, key: str, value: Any) -> None:
        if key not in KNOWN_PROPS:
            raise KeyError(f"unknown property: {key}")
        if value == KNOWN_PROPS[key]:
            self._values.pop(key, None)
        else:
            self._values[key] = value

    def __contains__(self, key: str) -> bool:
        return key in KNOWN_PROPS

    def is_set(self, key: str) -> bool:
        return key in self._values

    def to_doc(self) -> dict:
        return {k: self._values[k] for k in sorted(self._values)}

    @staticmethod
    def from_doc(doc: dict) -> "PropertyBag":
        return PropertyBag(doc)


@dataclass
class ObjectInstance:
    uid: int
    name: str
    description: str = ""
    properties: PropertyBag = field(default_factory=PropertyBag)
    contents: list[int] = field(default_factory=list)
    # parent: ("tile", x, y) or ("obj", uid); None only transiently.
    parent: Optional[tuple] = None
    materials: list[str] = field(default_factory=list)

    def prop(self, key: str) -> Any:
        return self.properties[key]

    def set_prop(self, key: str, value: Any) -> None:
        self.properties[key] = value

    def to_doc(self) -> dict:
        return {
            "uid": self.uid,
            "name": self.name,
            "description": self.description,
            "props": self.properties.to_doc(),
            "contents": list(self.contents),
            "parent": list(self.parent) if self.parent else None,
            "materials": list(self.materials),
        }

    @staticmethod
    def from_doc(doc: dict) -> "ObjectInstance":
        return ObjectInstance(
            uid=doc["uid"],
            name=doc["name"],
            description=doc.get("description", ""),
            properties=PropertyBag.from_doc(doc.get("props", {})),
            contents=list(doc.get("contents", [])),
            parent=tuple(doc["parent"]) if doc.get("parent") else None,
            materials=list(doc.get("materials", [])),
        )


@dataclass
class AgentState:
    uid: int
    facing: str = "south"
    # uids this agent has ever had in an observation; gates TELEPORT_OBJECT
    observed: set[int] = field(default_factory=set)
    # active dialog: {"npc": uid, "node": node_id} or None
    dialog: Optional[dict] = None
    action_history: list[dict] = field(default_factory=list)

    def to_doc(self) -> dict:
        return {
            "uid": self.uid,
            "facing": self.facing,
            "observed": sorted(self.observed),
            "dialog": self.dialog,
        }

    @staticmethod
    def from_doc(doc: dict) -> "AgentState":
        return AgentState(
            uid=doc["uid"],
            facing=doc.get("facing", "south"),
            observed=set(doc.get("observed", [])),
            dialog=doc.get("dialog"),
        )


class WorldState:
    """Authoritative simulation state. Single-threaded by contract."""

    def __init__(self, task_id: str = "", width: int = GRID_W, height: int = GRID_H):
        self.task_id = task_id
        self.width = width
        self.height = height
        self.terrain: list[list[str]] = [["." for _ in range(width)] for _ in range(height)]
        # tile stacks: ordered bottom -> top
        self.tiles: dict[tuple[int, int], list[int]] = {}
        self.objects: dict[int, ObjectInstance] = {}
        self.agents: list[AgentState] = []
        self.feed: list[dict] = []
        self.events: list[dict] = []
        # static dialog trees: npc uid -> {node_id: node}
        self.dialogs: dict[int, dict] = {}
        # named teleport targets: name -> {"x":, "y":, "facing":}
        self.locations: dict[str, dict] = {}
        self.tick = 0
        self._next_uid = 1

    # ---- construction -------------------------------------------------

    def new_uid(self) -> int:
        uid = self._next_uid
        self._next_uid += 1
        return uid

    def add_object(
        self,
        name: str,
        description: str = "",
        props: Optional[dict] = None,
        at: Optional[tuple] = None,
        materials: Optional[list[str]] = None,
    ) -> ObjectInstance:
        obj = ObjectInstance(
            uid=self.new_uid(),
            name=name,
            description=description,
            properties=PropertyBag(props),
            materials=materials or [],
        )
        self.objects[obj.uid] = obj
        if at is not None:
            self.attach(obj.uid, at)
        return obj

    def attach(self, uid: int, parent: tuple) -> None:
        """Place an object on a tile ("tile", x, y) or in a container ("obj", uid)."""
        obj = self.objects[uid]
        if obj.parent is not None:
            self.detach(uid)
        if parent[0] == "tile":
            _, x, y = parent
            self.tiles.setdefault((x, y), []).append(uid)
            obj.set_prop("gridLocation", [x, y])
        elif parent[0] == "obj":
            holder = self.objects[parent[1]]
            holder.contents.append(uid)
            obj.set_prop("parentContainer", holder.uid)
        else:
            raise ValueError(f"bad parent ref: {parent}")
        obj.parent = tuple(parent)

    def detach(self, uid: int) -> None:
        obj = self.objects[uid]
        if obj.parent is None:
            return
        if obj.parent[0] == "tile":
            _, x, y = obj.parent
            stack = self.tiles.get((x, y), [])
            if uid in stack:
                stack.remove(uid)
            if not stack:
                self.tiles.pop((x, y), None)
        else:
            holder = self.objects[obj.parent[1]]
            if uid in holder.contents:
                holder.contents.remove(uid)
            obj.set_prop("parentContainer", -1)
        obj.parent = None

    def destroy(self, uid: int) -> None:
        """Remove an object and its whole subtree from the world."""
        obj = self.objects[uid]
        for child in list(obj.contents):
            self.destroy(child)
        self.detach(uid)
        del self.objects[uid]

    # ---- queries ------------------------------------------------------

    def stack(self, x: int, y: int) -> list[int]:
        return self.tiles.get((x, y), [])

    def terrain_at(self, x: int, y: int) -> str:
        if 0 <= x < self.width and 0 <= y < self.height:
            return TERRAIN_LEGEND[self.terrain[y][x]]
        return "void"

    def set_terrain(self, x: int, y: int, code: str) -> None:
        if code not in TERRAIN_LEGEND:
            raise ValueError(f"unknown terrain code: {code}")
        self.terrain[y][x] = code

    def is_tile_passable(self, x: int, y: int) -> bool:
        """Terrain must allow walking and the top-most object must be passable."""
        kind = self.terrain_at(x, y)
        if kind == "void" or not TERRAIN_PASSABLE[kind]:
            return False
        stack = self.stack(x, y)
        if stack:
            return bool(self.objects[stack[-1]].prop("isPassable"))
        return True

    def object_tile(self, uid: int) -> Optional[tuple[int, int]]:
        """Tile coordinates of the object, following container parents up."""
        seen = set()
        cur = self.objects.get(uid)
        while cur is not None:
            if cur.uid in seen:
                raise RuntimeError(f"containment cycle at uid {cur.uid}")
            seen.add(cur.uid)
            if cur.parent is None:
                return None
            if cur.parent[0] == "tile":
                return (cur.parent[1], cur.parent[2])
            cur = self.objects.get(cur.parent[1])
        return None

    def agent_state(self, uid: int) -> AgentState:
        for a in self.agents:
            if a.uid == uid:
                return a
        raise KeyError(f"no agent with uid {uid}")

    def agent_body(self, agent: AgentState) -> ObjectInstance:
        return self.objects[agent.uid]

    def inventory(self, agent: AgentState) -> list[int]:
        return list(self.agent_body(agent).contents)

    def find_by_name(self, name: str) -> Optional[ObjectInstance]:
        """First object (by uid order) whose name matches exactly."""
        for uid in sorted(self.objects):
            if self.objects[uid].name == name:
                return self.objects[uid]
        return None

    def find_all_by_name(self, name: str) -> list[ObjectInstance]:
        return [self.objects[u] for u in sorted(self.objects) if self.objects[u].name == name]

    def contents_visible(self, obj: ObjectInstance) -> bool:
        """Container contents are hidden while an openable container is closed."""
        if not obj.prop("isContainer"):
            return False
        if obj.prop("isOpenable"):
            return bool(obj.prop("isOpen"))
        return True

    def append_feed(self, author: str, text: str) -> dict:
        post = {
            "post_id": len(self.feed) + 1,
            "author": author,
            "tick": self.tick,
            "text": text,
        }
        self.feed.append(post)
        return post

    def add_event(self, kind: str, data: dict) -> None:
        self.events.append({"tick": self.tick, "kind": kind, "data": data})

    # ---- accessibility ------------------------------------------------

    def enumerate_accessible(self, agent: AgentState, radius: int = 3) -> list[int]:
        """Objects the agent can currently interact with or sense.

        Inventory (recursively, honoring closed containers) plus all objects
        whose tile lies within Chebyshev distance `radius`, minus contents of
        closed openable containers and objects lying under a closed obscuring
        stack object. The agent's own body is excluded.
        """
        out: list[int] = []
        seen: set[int] = set()

        def visit(uid: int) -> None:
            if uid in seen:
                return
            seen.add(uid)
            out.append(uid)
            obj = self.objects[uid]
            if self.contents_visible(obj):
                for child in obj.contents:
                    visit(child)

        body = self.agent_body(agent)
        for child in body.contents:
            visit(child)

        pos = self.object_tile(agent.uid)
        if pos is None:
            return out
        ax, ay = pos
        for y in range(max(0, ay - radius), min(self.height, ay + radius + 1)):
            for x in range(max(0, ax - radius), min(self.width, ax + radius + 1)):
                stack = self.stack(x, y)
                # an obscuring object hides everything below it unless it is
                # an open container
                top_cover = None
                for i in range(len(stack) - 1, -1, -1):
                    o = self.objects[stack[i]]
                    if o.prop("obscuresObjectsBelow") and not (
                        o.prop("isContainer") and self.contents_visible(o)
                    ):
                        top_cover = i
                        break
                start = top_cover if top_cover is not None else 0
                for uid in stack[start:]:
                    if uid == agent.uid:
                        continue
                    visit(uid)
        return out

    # ---- pathing ------------------------------------------------------

    def bfs_path(
        self,
        start: tuple[int, int],
        goal: tuple[int, int] | Callable[[int, int], bool],
        passable: Optional[Callable[[int, int], bool]] = None,
    ) -> Optional[list[tuple[int, int]]]:
        """Shortest 4-neighbor path from start to goal, inclusive.

        `goal` is a tile or a predicate; `passable` defaults to tile
        passability (the goal tile itself is exempt so you can path "to" a
        door or an NPC).
        """
        if passable is None:
            passable = self.is_tile_passable
        if callable(goal):
            is_goal = goal
        else:
            gx, gy = goal
            is_goal = lambda x, y: (x, y) == (gx, gy)

        if is_goal(*start):
            return [start]
        prev: dict[tuple[int, int], tuple[int, int]] = {}
        frontier = [start]
        visited = {start}
        while frontier:
            nxt: list[tuple[int, int]] = []
            for (cx, cy) in frontier:
                for dname in FACINGS:
                    dx, dy = DIRECTIONS[dname]
                    nx, ny = cx + dx, cy + dy
                    if (nx, ny) in visited:
                        continue
                    if not (0 <= nx < self.width and 0 <= ny < self.height):
                        continue
                    if is_goal(nx, ny):
                        path = [(nx, ny), (cx, cy)]
                        cur = (cx, cy)
                        while cur != start:
                            cur = prev[cur]
                            path.append(cur)
                        path.reverse()
                        return path
                    if not passable(nx, ny):
                        continue
                    visited.add((nx, ny))
                    prev[(nx, ny)] = (cx, cy)
                    nxt.append((nx, ny))
            frontier = nxt
        return None

    # ---- per-tick update ----------------------------------------------

    def tick_npcs(self) -> None:
        """Advance every mobile NPC by at most one tile.

        Routed NPCs follow their precomputed tile loop and wait when the
        next tile is blocked. Wanderers draw from a tick-keyed hash stream
        so replays reproduce their walk without storing generator state.
        """
        for agent in self.agents:
            body = self.agent_body(agent)
            if not body.prop("isNPC"):
                continue
            mode = body.prop("npcMovement")
            if mode == "route":
                route = body.prop("npcRoute")
                if not route:
                    continue
                step = body.prop("routeStep")
                nxt = route[(step + 1) % len(route)]
                nx, ny = int(nxt[0]), int(nxt[1])
                if self.is_tile_passable(nx, ny):
                    self.attach(agent.uid, ("tile", nx, ny))
                    body.set_prop("routeStep", (step + 1) % len(route))
            elif mode == "wander":
                pos = self.object_tile(agent.uid)
                if pos is None:
                    continue
                rng = tick_hash_rng(self.task_id, f"npc{agent.uid}", self.tick)
                options = [None] + list(FACINGS)
                pick = rng.choice(options)
                if pick is None:
                    continue
                dx, dy = DIRECTIONS[pick]
                nx, ny = pos[0] + dx, pos[1] + dy
                if self.is_tile_passable(nx, ny):
                    self.attach(agent.uid, ("tile", nx, ny))
                    agent.facing = pick

    # ---- serialization ------------------------------------------------

    def serialize(self) -> dict:
        from . import ENGINE_VERSION

        # tile stacks are ordered (bottom -> top) and that order is
        # behavioral (top-most passability), so it is saved explicitly
        stack_order = {
            f"{x},{y}": list(uids)
            for (x, y), uids in sorted(self.tiles.items())
            if uids
        }
        doc = {
            "version": ENGINE_VERSION,
            "task_id": self.task_id,
            "tick": self.tick,
            "tiles": {
                "legend": dict(sorted(TERRAIN_LEGEND.items())),
                "rows": ["".join(row) for row in self.terrain],
            },
            "stack_order": stack_order,
            "objects": [self.objects[u].to_doc() for u in sorted(self.objects)],
            "agents": [a.to_doc() for a in self.agents],
            "feed": list(self.feed),
            "events": list(self.events),
            "dialogs": {str(k): v for k, v in sorted(self.dialogs.items())},
            "locations": {k: self.locations[k] for k in sorted(self.locations)},
            "action_history": {
                str(a.uid): list(a.action_history) for a in self.agents if a.action_history
            },
            "next_uid": self._next_uid,
            "width": self.width,
            "height": self.height,
        }
        return doc

    @staticmethod
    def deserialize(doc: dict) -> "WorldState":
        w = WorldState(task_id=doc["task_id"], width=doc.get("width", GRID_W), height=doc.get("height", GRID_H))
        w.tick = doc["tick"]
        w._next_uid = doc["next_uid"]
        w.terrain = [list(row) for row in doc["tiles"]["rows"]]
        for od in doc["objects"]:
            obj = ObjectInstance.from_doc(od)
            w.objects[obj.uid] = obj
        for key, uids in doc["stack_order"].items():
            x, y = (int(v) for v in key.split(","))
            w.tiles[(x, y)] = list(uids)
        w.agents = [AgentState.from_doc(ad) for ad in doc["agents"]]
        hist = doc.get("action_history", {})
        for a in w.agents:
            a.action_history = list(hist.get(str(a.uid), []))
        w.feed = list(doc["feed"])
        w.events = list(doc.get("events", []))
        w.dialogs = {int(k): v for k, v in doc.get("dialogs", {}).items()}
        w.locations = dict(doc.get("locations", {}))
        return w

    def clone(self) -> "WorldState":
        return WorldState.deserialize(self.serialize())

    def canonical(self) -> str:
        return canonical_dumps(self.serialize())

    def hash(self) -> str:
        return state_hash(self.serialize())
