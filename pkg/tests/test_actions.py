"""Action execution semantics: effects, failure codes, atomicity, totality."""

import pytest

from sciquest import tasks
from sciquest.actions import (
    ACTIONS,
    ALIASES,
    REACH_RADIUS,
    dialog_options,
    execute,
    normalize_request,
    valid_actions,
)
from sciquest.canon import state_hash
from sciquest.rng import RngStream
from sciquest.tasks.mapgen import add_npc, add_player, place_item
from sciquest.world import WorldState


def bordered(task_id="test/actions/0"):
    w = WorldState(task_id=task_id)
    for x in range(w.width):
        w.set_terrain(x, 0, "#")
        w.set_terrain(x, w.height - 1, "#")
    for y in range(w.height):
        w.set_terrain(0, y, "#")
        w.set_terrain(w.width - 1, y, "#")
    return w


@pytest.fixture()
def arena():
    """Player at (10,10) facing north with a small prop cast around them."""
    w = bordered()
    player = add_player(w, 10, 10)
    return w, player


def run(world, agent, action, arg1=None, arg2=None):
    return execute(world, agent, {"action": action, "arg1": arg1, "arg2": arg2})


# ---------------------------------------------------------------------------
# request normalization and the clock

def test_aliases_normalize():
    for alias, target in ALIASES.items():
        req = normalize_request({"action": alias.lower()})
        assert req["action"] == target
        assert target in ACTIONS


def test_tick_advances_even_on_failure(arena):
    w, p = arena
    assert w.tick == 0
    res = run(w, p, "WAIT")
    assert res["success"] and w.tick == 1
    res = run(w, p, "NO_SUCH_ACTION")
    assert not res["success"] and w.tick == 2
    assert res["errors"][0].startswith("UNKNOWN_ACTION:")
    assert len(p.action_history) == 2
    assert p.action_history[-1]["result"] == res


def test_execute_records_normalized_request(arena):
    w, p = arena
    run(w, p, "rotate", "east")
    assert p.action_history[-1]["request"]["action"] == "ROTATE_DIRECTION"
    assert p.facing == "east"


# ---------------------------------------------------------------------------
# movement

def test_move_rotates_first_then_advances(arena):
    w, p = arena
    assert p.facing == "north"
    res = run(w, p, "MOVE_DIRECTION", "east")
    assert res["success"] and "rotated" in res["message"]
    assert w.object_tile(p.uid) == (10, 10), "first call only turns"
    res = run(w, p, "MOVE_DIRECTION", "east")
    assert res["success"] and "moved" in res["message"]
    assert w.object_tile(p.uid) == (11, 10)


def test_move_blocked_by_wall_and_edge(arena):
    w, p = arena
    w.set_terrain(10, 9, "#")
    res = run(w, p, "MOVE_DIRECTION", "north")  # already facing north
    assert not res["success"] and res["errors"][0].startswith("BLOCKED:")
    assert w.object_tile(p.uid) == (10, 10)
    res = run(w, p, "MOVE_DIRECTION", "sideways")
    assert res["errors"][0].startswith("BAD_ARITY:")


def test_move_blocked_by_object_stack(arena):
    w, p = arena
    w.add_object("boulder", at=("tile", 10, 9))
    res = run(w, p, "MOVE_DIRECTION", "north")
    assert not res["success"]


# ---------------------------------------------------------------------------
# take / drop / put / give

def test_take_and_drop_roundtrip(arena):
    w, p = arena
    coin = place_item(w, "coin", 11, 10)
    res = run(w, p, "TAKE", coin.uid)
    assert res["success"]
    assert coin.uid in w.agent_body(p).contents
    res = run(w, p, "TAKE", coin.uid)
    assert not res["success"], "cannot take what you already hold"
    res = run(w, p, "DROP", coin.uid)
    assert res["success"]
    assert w.object_tile(coin.uid) == (10, 10), "drops land on the agent's tile"


def test_take_failures(arena):
    w, p = arena
    statue = w.add_object("statue", at=("tile", 11, 10))
    far = place_item(w, "far coin", 20, 20)
    npc = add_npc(w, "guide", 12, 10)
    assert run(w, p, "TAKE", statue.uid)["errors"][0].startswith("WRONG_STATE:")
    assert run(w, p, "TAKE", far.uid)["errors"][0].startswith("OUT_OF_REACH:")
    assert run(w, p, "TAKE", npc.uid)["errors"][0].startswith("WRONG_STATE:")
    assert run(w, p, "TAKE", 9999)["errors"][0].startswith("UNKNOWN_UID:")
    assert run(w, p, "DROP", statue.uid)["errors"][0].startswith("WRONG_STATE:")


def test_put_into_container_and_give_to_agent(arena):
    w, p = arena
    coin = place_item(w, "coin", 10, 10)
    chest = w.add_object(
        "chest", props={"isContainer": True, "isOpenable": True}, at=("tile", 11, 10))
    npc = add_npc(w, "guide", 12, 10)
    run(w, p, "TAKE", coin.uid)

    res = run(w, p, "PUT_GIVE", coin.uid, chest.uid)
    assert not res["success"], "closed chest refuses items"
    run(w, p, "OPEN_CLOSE", chest.uid)
    res = run(w, p, "PUT_GIVE", coin.uid, chest.uid)
    assert res["success"] and coin.uid in chest.contents

    run(w, p, "TAKE", coin.uid)
    res = run(w, p, "GIVE", coin.uid, npc.uid)
    assert res["success"] and coin.uid in npc.contents
    assert "gave" in res["message"]


def test_put_rejects_self_and_non_containers(arena):
    w, p = arena
    coin = place_item(w, "coin", 10, 10)
    rock = w.add_object("rock", at=("tile", 11, 10))
    run(w, p, "TAKE", coin.uid)
    assert not run(w, p, "PUT_GIVE", coin.uid, coin.uid)["success"]
    assert not run(w, p, "PUT_GIVE", coin.uid, rock.uid)["success"]
    assert not run(w, p, "PUT_GIVE", rock.uid, coin.uid)["success"]


# ---------------------------------------------------------------------------
# open / close and locks

def test_door_toggle_changes_passability(arena):
    w, p = arena
    door = w.add_object(
        "door", props={"isPassage": True}, at=("tile", 10, 9))
    assert not w.is_tile_passable(10, 9)
    res = run(w, p, "OPEN", door.uid)
    assert res["success"] and door.prop("isOpen") and door.prop("isPassable")
    assert w.is_tile_passable(10, 9)
    res = run(w, p, "CLOSE", door.uid)
    assert res["success"] and not door.prop("isPassable")


def test_locked_door_needs_key(arena):
    w, p = arena
    door = w.add_object(
        "vault door", props={"isPassage": True, "requiresKey": 7}, at=("tile", 10, 9))
    key = place_item(w, "brass key", 10, 10, props={"keyID": 7})
    res = run(w, p, "OPEN", door.uid)
    assert res["errors"][0].startswith("LOCKED:")
    run(w, p, "TAKE", key.uid)
    assert run(w, p, "OPEN", door.uid)["success"]
    # closing and reopening while holding the key still works
    assert run(w, p, "CLOSE", door.uid)["success"]
    assert run(w, p, "OPEN", door.uid)["success"]


def test_open_non_openable_fails(arena):
    w, p = arena
    rock = w.add_object("rock", at=("tile", 11, 10))
    assert not run(w, p, "OPEN_CLOSE", rock.uid)["success"]


def test_hand_opening_mound_counts_as_excavation(arena):
    w, p = arena
    mound = w.add_object(
        "dirt mound",
        props={"isContainer": True, "isOpenable": True, "isShovelable": True,
               "obscuresObjectsBelow": True},
        at=("tile", 11, 10))
    res = run(w, p, "OPEN_CLOSE", mound.uid)
    assert res["success"]
    assert any(e["kind"] == "excavated" and e["data"]["uid"] == mound.uid
               for e in w.events)


# ---------------------------------------------------------------------------
# eat / read / wait / feed

def test_eat_contamination_rules(arena):
    w, p = arena
    raw_bad = place_item(w, "moldy loaf", 10, 10,
                         props={"isEdible": True, "isPoisonous": True})
    cooked_bad = place_item(w, "baked loaf", 11, 10,
                            props={"isEdible": True, "isPoisonous": True, "isCooked": True})
    clean = place_item(w, "apple", 11, 11, props={"isEdible": True})
    rock = w.add_object("rock", at=("tile", 9, 10))
    body = w.agent_body(p)

    res = run(w, p, "EAT", clean.uid)
    assert res["success"] and not body.prop("isIll")
    res = run(w, p, "EAT", cooked_bad.uid)
    assert res["success"] and not body.prop("isIll"), "cooking neutralizes mold"
    res = run(w, p, "EAT", raw_bad.uid)
    assert res["success"] and body.prop("isIll")
    assert raw_bad.uid not in w.objects, "eaten food is gone"
    assert not run(w, p, "EAT", rock.uid)["success"]

    kinds = [(e["data"]["name"], e["data"]["poisonous"])
             for e in w.events if e["kind"] == "eaten"]
    assert kinds == [("apple", False), ("baked loaf", False), ("moldy loaf", True)]


def test_read_sign(arena):
    w, p = arena
    sign = w.add_object(
        "notice board", props={"isReadable": True, "document": "KEEP OUT"},
        at=("tile", 11, 10))
    res = run(w, p, "READ", sign.uid)
    assert res["success"] and "KEEP OUT" in res["message"]
    assert any(e["kind"] == "read" and e["data"]["uid"] == sign.uid for e in w.events)
    rock = w.add_object("rock", at=("tile", 9, 10))
    assert not run(w, p, "READ", rock.uid)["success"]


def test_feed_shows_last_five_posts(arena):
    w, p = arena
    res = run(w, p, "FEED")
    assert res["success"] and res["message"] == "No posts."
    for i in range(7):
        w.append_feed("lab", f"post {i}")
    res = run(w, p, "READ_FEED")
    assert "post 2" in res["message"] and "post 6" in res["message"]
    assert "post 1" not in res["message"]
    assert any(e["kind"] == "feed_viewed" for e in w.events)


# ---------------------------------------------------------------------------
# devices and instruments

def test_instrument_reading_and_event(arena):
    w, p = arena
    thermo = place_item(w, "thermometer", 10, 10,
                        props={"isUsable": True, "deviceKind": "thermometer"})
    rock = w.add_object("rock", props={"temperatureC": 35.5}, at=("tile", 11, 10))
    run(w, p, "TAKE", thermo.uid)
    res = run(w, p, "USE", thermo.uid, rock.uid)
    assert res["success"] and "Temperature: 35.5 C" in res["message"]
    ev = [e for e in w.events if e["kind"] == "instrument_used"]
    assert ev and ev[-1]["data"] == {
        "instrument": "thermometer", "instrument_uid": thermo.uid, "target_uid": rock.uid}


def test_use_failures(arena):
    w, p = arena
    rock = w.add_object("rock", at=("tile", 11, 10))
    thermo = place_item(w, "thermometer", 10, 10,
                        props={"isUsable": True, "deviceKind": "thermometer"})
    assert run(w, p, "USE", rock.uid, thermo.uid)["errors"][0].startswith("NOT_AN_INSTRUMENT:")
    assert run(w, p, "USE", thermo.uid, None)["errors"][0].startswith("BAD_ARITY:")
    assert run(w, p, "USE", thermo.uid, thermo.uid)["errors"][0].startswith("WRONG_STATE:")


def test_shovel_excavates_once(arena):
    w, p = arena
    shovel = place_item(w, "shovel", 10, 10,
                        props={"isUsable": True, "deviceKind": "shovel"})
    mound = w.add_object(
        "dirt mound",
        props={"isContainer": True, "isOpenable": True, "isShovelable": True},
        at=("tile", 11, 10))
    rock = w.add_object("rock", at=("tile", 9, 10))
    run(w, p, "TAKE", shovel.uid)
    res = run(w, p, "USE", shovel.uid, mound.uid)
    assert res["success"] and mound.prop("isOpen")
    res = run(w, p, "USE", shovel.uid, mound.uid)
    assert res["success"] and "already" in res["message"]
    assert sum(1 for e in w.events if e["kind"] == "excavated") == 1
    assert not run(w, p, "USE", shovel.uid, rock.uid)["success"]


def test_dispenser_and_rust_jar(arena):
    w, p = arena
    jar = place_item(w, "mixing jar", 10, 10,
                     props={"isUsable": True, "deviceKind": "mixjar"})
    disp = w.add_object(
        "Chemical A dispenser",
        props={"isUsable": True, "deviceKind": "dispenser:Chemical A"},
        at=("tile", 11, 10))
    statue = w.add_object(
        "rusty statue",
        props={"rustLevel": 3, "mixtureDict": {"Chemical A": 2}},
        at=("tile", 11, 11))
    run(w, p, "TAKE", jar.uid)

    res = run(w, p, "USE", jar.uid, statue.uid)
    assert not res["success"], "empty jar pours nothing"

    run(w, p, "USE", disp.uid, jar.uid)
    run(w, p, "USE", disp.uid, jar.uid)
    assert jar.prop("mixtureDict") == {"Chemical A": 2}

    res = run(w, p, "USE", jar.uid, statue.uid)
    assert res["success"] and "removed" in res["message"]
    assert statue.prop("rustLevel") == 0
    assert jar.prop("mixtureDict") == {}, "pouring empties the jar"

    rock = w.add_object("rock", at=("tile", 9, 10))
    run(w, p, "USE", disp.uid, jar.uid)
    assert not run(w, p, "USE", jar.uid, rock.uid)["success"]
    assert not run(w, p, "USE", disp.uid, rock.uid)["success"]


def test_detector_parts_assemble(arena):
    w, p = arena
    a = place_item(w, "detector housing", 10, 10,
                   props={"isUsable": True, "deviceKind": "detectorpart", "deviceIndex": 0})
    b = place_item(w, "detector sensor", 11, 10,
                   props={"isUsable": True, "deviceKind": "detectorpart", "deviceIndex": 1})
    c = place_item(w, "spare housing", 11, 11,
                   props={"isUsable": True, "deviceKind": "detectorpart", "deviceIndex": 0})
    run(w, p, "TAKE", a.uid)
    assert not run(w, p, "USE", a.uid, c.uid)["success"], "same part twice"

    res = run(w, p, "USE", a.uid, b.uid)
    assert res["success"]
    assert a.uid not in w.objects and b.uid not in w.objects
    det = w.find_by_name("mold detector")
    assert det is not None and det.uid in w.agent_body(p).contents
    assert any(e["kind"] == "detector_built" for e in w.events)

    bad = place_item(w, "moldy loaf", 10, 10,
                     props={"isEdible": True, "isPoisonous": True})
    clean = place_item(w, "apple", 10, 9, props={"isEdible": True})
    rock = w.add_object("rock", at=("tile", 9, 10))
    assert "MOLD DETECTED" in run(w, p, "USE", det.uid, bad.uid)["message"]
    assert "no mold" in run(w, p, "USE", det.uid, clean.uid)["message"]
    assert "inconclusive" in run(w, p, "USE", det.uid, rock.uid)["message"]


def test_oven_cooks_contents(arena):
    w, p = arena
    oven = w.add_object(
        "oven", props={"isActivatable": True, "isContainer": True, "deviceKind": "oven"},
        at=("tile", 11, 10))
    loaf = place_item(w, "moldy loaf", 10, 10,
                      props={"isEdible": True, "isPoisonous": True})
    run(w, p, "TAKE", loaf.uid)
    run(w, p, "PUT", loaf.uid, oven.uid)
    res = run(w, p, "ACTIVATE", oven.uid)
    assert res["success"] and loaf.prop("isCooked")
    assert any(e["kind"] == "cooked" for e in w.events)
    # a cooked poisonous item is now safe to eat
    run(w, p, "TAKE", loaf.uid)
    run(w, p, "EAT", loaf.uid)
    assert not w.agent_body(p).prop("isIll")


def test_pendulum_reports_period(arena):
    w, p = arena
    pend = w.add_object(
        "pendulum rig",
        props={"isActivatable": True, "deviceKind": "pendulum",
               "pendulumLength": 4.0, "pendulumGravity": 9.81},
        at=("tile", 11, 10))
    res = run(w, p, "ACTIVATE", pend.uid)
    assert res["success"]
    assert "4.0121334" in res["message"], "period = 2*pi*sqrt(L/g)"
    assert any(e["kind"] == "pendulum_timed" for e in w.events)


def test_generic_device_toggles(arena):
    w, p = arena
    lamp = w.add_object("lamp", props={"isActivatable": True}, at=("tile", 11, 10))
    assert run(w, p, "ACTIVATE", lamp.uid)["success"] and lamp.prop("isActivated")
    assert run(w, p, "DEACTIVATE", lamp.uid)["success"] and not lamp.prop("isActivated")
    rock = w.add_object("rock", at=("tile", 9, 10))
    assert not run(w, p, "ACTIVATE", rock.uid)["success"]


# ---------------------------------------------------------------------------
# dialog

def dialog_world():
    w = bordered()
    p = add_player(w, 10, 10)
    tree = {
        "root": {
            "text": "What do you need?",
            "options": [
                {"say": "Tell me about the dig.", "next": "dig"},
                {"say": "Nothing.", "next": None},
            ],
        },
        "dig": {
            "text": "It is old.",
            "options": [
                {"say": "Thanks.", "next": None,
                 "effects": [{"kind": "event", "name": "briefed", "data": {}}]},
            ],
        },
    }
    npc = add_npc(w, "guide", 11, 10, dialog=tree)
    return w, p, npc


def test_talk_and_dialog_flow():
    w, p, npc = dialog_world()
    res = run(w, p, "TALK", npc.uid)
    assert res["success"] and "What do you need?" in res["message"]
    assert p.dialog == {"npc": npc.uid, "node": "root"}
    assert dialog_options(w, p) == ["Tell me about the dig.", "Nothing."]
    assert any(e["kind"] == "talked" for e in w.events)

    res = run(w, p, "MOVE", "north")
    assert res["errors"][0].startswith("WRONG_STATE:"), "locked into conversation"

    res = run(w, p, "DIALOG_SELECT", 0)
    assert res["success"] and "It is old." in res["message"]
    res = run(w, p, "DIALOG_SELECT", 0)
    assert res["success"] and p.dialog is None
    assert any(e["kind"] == "briefed" for e in w.events)


def test_dialog_select_guards():
    w, p, npc = dialog_world()
    assert run(w, p, "DIALOG_SELECT", 0)["errors"][0].startswith("NO_DIALOG:")
    run(w, p, "TALK", npc.uid)
    assert run(w, p, "DIALOG_SELECT", 5)["errors"][0].startswith("BAD_INDEX:")
    assert run(w, p, "DIALOG_SELECT", "x")["errors"][0].startswith("BAD_INDEX:")
    assert p.dialog is not None, "bad picks do not end the conversation"


def test_talk_failures(arena):
    w, p = arena
    rock = w.add_object("rock", at=("tile", 11, 10))
    assert not run(w, p, "TALK", rock.uid)["success"]
    mute = add_npc(w, "mute", 12, 10)
    assert not run(w, p, "TALK", mute.uid)["success"]


# ---------------------------------------------------------------------------
# teleports

def test_teleport_location(arena):
    w, p = arena
    w.locations["camp"] = {"x": 20, "y": 20, "facing": "east"}
    w.locations["pit"] = {"x": 5, "y": 5}
    res = run(w, p, "TELEPORT_LOCATION", "camp")
    assert res["success"] and w.object_tile(p.uid) == (20, 20) and p.facing == "east"
    assert run(w, p, "TELEPORT", "nowhere")["errors"][0].startswith("UNKNOWN_LOCATION:")
    w.set_terrain(5, 5, "~")
    assert run(w, p, "TELEPORT_LOCATION", "pit")["errors"][0].startswith("BLOCKED:")


def test_teleport_object_requires_observation(arena):
    w, p = arena
    relic = place_item(w, "relic", 25, 25)
    res = run(w, p, "TELEPORT_OBJECT", relic.uid)
    assert res["errors"][0].startswith("WRONG_STATE:")
    p.observed.add(relic.uid)
    res = run(w, p, "TELEPORT_OBJECT", relic.uid)
    assert res["success"]
    x, y = w.object_tile(p.uid)
    assert max(abs(x - 25), abs(y - 25)) == 1, "lands beside the target"


# ---------------------------------------------------------------------------
# valid_actions contract

SAMPLE_TASKS = [
    "proteomics/easy/0",
    "chemistry/normal/0",
    "archaeology/normal/1",
    "reactor/challenge/0",
    "pickplace/unittest/0",
    "dialog/unittest/0",
]


@pytest.mark.parametrize("task_id", SAMPLE_TASKS)
def test_every_offered_action_succeeds(task_id):
    """valid_actions promises success; hold it to that on live worlds."""
    task = tasks.generate(task_id)
    world = tasks.create_world(task)
    agent = world.agents[0]
    rng = RngStream(f"valid/{task_id}")
    for _ in range(8):
        offers = valid_actions(world, agent)
        assert offers, "there is always something to do"
        for spec in offers:
            trial = world.clone()
            res = execute(trial, trial.agents[0], dict(spec))
            assert res["success"], f"{spec} failed: {res['errors']}"
        # walk a random offered action forward to diversify the state
        step = rng.choice(offers)
        execute(world, agent, dict(step))
        tasks.theme_tick(task, world)


def test_valid_actions_during_dialog():
    w, p, npc = dialog_world()
    run(w, p, "TALK", npc.uid)
    offers = valid_actions(w, p)
    assert offers == [
        {"action": "DIALOG_SELECT", "arg1": 0, "arg2": None},
        {"action": "DIALOG_SELECT", "arg1": 1, "arg2": None},
    ]


# ---------------------------------------------------------------------------
# fuzz: totality and atomicity

def fuzz_requests(world, rng, n):
    uids = sorted(world.objects)
    actions = list(ACTIONS) + list(ALIASES) + ["", "JUMP", "move_direction"]
    args = (
        [None, "north", "south", "east", "west", "up", 0, 1, 2, 3, 5,
         "camp", "pilot field", -1, "junk", 10**9, 3.7, [1], {"x": 1}]
        + uids[:40]
    )
    for _ in range(n):
        yield {
            "action": rng.choice(actions),
            "arg1": rng.choice(args),
            "arg2": rng.choice(args),
        }


@pytest.mark.parametrize("task_id", ["spacesick/normal/0", "plants/easy/0",
                                     "translation/challenge/2"])
def test_fuzz_no_crash_failed_actions_atomic(task_id):
    task = tasks.generate(task_id)
    world = tasks.create_world(task)
    agent = world.agents[0]
    rng = RngStream(f"fuzz/{task_id}")
    for req in fuzz_requests(world, rng, 400):
        before = state_hash(world.serialize())
        tick_before = world.tick
        res = execute(world, agent, req)
        assert isinstance(res, dict) and set(res) == {"message", "errors", "success"}
        assert world.tick == tick_before + 1
        assert res["success"] == (not res["errors"])
        if not res["success"]:
            assert state_hash(world.serialize()) == before, (
                f"failed action mutated the world: {req} -> {res['errors']}")
