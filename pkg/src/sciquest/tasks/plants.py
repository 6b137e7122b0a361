"""Greenhouse theme: infer the soil rule that makes crops grow from a
pilot field, then program planter boxes and grow fresh plants."""

from __future__ import annotations

import re

from .. import science
from .base import item, question
from .mapgen import add_location, add_player, fill_rect, new_world, place_fixture, place_item, place_sign

PLANTER_LABELS = ["A", "B", "C"]
GROW_DELAY_TICKS = 2
GROW_TARGET = 2

SIGN_TEXT = (
    "Greenhouse log: the pilot plots hold last season's trials. Each plot "
    "lists its nutrient feed; the outcome is whatever is growing in it now. "
    "Use the soil probe on a plot to read its feed. The powered planter "
    "boxes (A, B, C) accept new nutrient programs from the soil computer. "
    "Plant a seed in a programmed box and it will sprout or wither within "
    "a couple of ticks."
)


def gen_secrets(task, rng) -> dict:
    return {"growth": science.gen_nutrient_rule(rng, task.difficulty)}


def _computer_dialog(planter_uids: list[int], levels: list[str]) -> dict:
    nodes: dict = {
        "root": {
            "text": "Soil computer online. Select a planter box to reprogram.",
            "options": [
                {"say": f"Planter box {label}.", "next": f"plot{i}", "effects": []}
                for i, label in enumerate(PLANTER_LABELS)
            ]
            + [{"say": "Log off.", "next": None, "effects": []}],
        }
    }
    for i, label in enumerate(PLANTER_LABELS):
        uid = planter_uids[i]
        nodes[f"plot{i}"] = {
            "text": f"Planter box {label} selected. Choose a nutrient line.",
            "options": [
                {"say": f"{nutrient.capitalize()}.", "next": f"plot{i}_{nutrient}", "effects": []}
                for nutrient in science.NUTRIENTS
            ]
            + [{"say": "Back.", "next": "root", "effects": []}],
        }
        for nutrient in science.NUTRIENTS:
            nodes[f"plot{i}_{nutrient}"] = {
                "text": (
                    f"Planter box {label}, {nutrient} line: currently {{0}}."
                ),
                "show": [["map_prop", uid, "soilNutrients", nutrient]],
                "options": [
                    {
                        "say": f"Set {nutrient} to {level}.",
                        "next": f"plot{i}",
                        "effects": [
                            {"kind": "merge_map_prop", "uids": [uid],
                             "prop": "soilNutrients", "key": nutrient, "value": level},
                            {"kind": "event", "name": "soil_set",
                             "data": {"plot": uid, "nutrient": nutrient, "level": level}},
                        ],
                    }
                    for level in levels
                ]
                + [{"say": "Back.", "next": f"plot{i}", "effects": []}],
            }
    return nodes


def build(task):
    world, rng = new_world(task)
    growth = task.secrets["growth"]
    levels = science.rule_levels(growth["rule"])

    fill_rect(world, 5, 7, 23, 12, "_")
    fill_rect(world, 8, 16, 22, 18, "_")
    player = add_player(world, 16, 23, facing="north")

    plot_uids = []
    for i, trial in enumerate(growth["pilot"]):
        x = 6 + 3 * (i % 6)
        y = 8 + 3 * (i // 6)
        plot = place_fixture(
            world, f"pilot plot {i + 1}", x, y,
            "A raised soil bed from last season's trials.",
            props={"isContainer": True, "containerPrefix": "in",
                   "soilNutrients": dict(trial["soil"])},
        )
        if trial["grew"]:
            world.add_object(
                "grown plant", "A healthy plant in full leaf.",
                props={"growthStage": 2, "isPassable": True},
                at=("obj", plot.uid),
            )
        else:
            world.add_object(
                "withered seed", "A seed that never came up.",
                props={"growthStage": -1, "isPassable": True},
                at=("obj", plot.uid),
            )
        plot_uids.append(plot.uid)

    baseline = {n: levels[0] for n in science.NUTRIENTS}
    planter_uids = []
    for i, label in enumerate(PLANTER_LABELS):
        box = place_fixture(
            world, f"planter box {label}", 10 + 5 * i, 17,
            "A powered planter box wired to the soil computer.",
            props={"isContainer": True, "containerPrefix": "in",
                   "soilNutrients": dict(baseline)},
        )
        planter_uids.append(box.uid)

    computer = place_fixture(
        world, "soil computer", 15, 15,
        "A terminal that programs the planter boxes' nutrient feeds.",
        props={"isDialogable": True},
    )
    world.dialogs[computer.uid] = _computer_dialog(planter_uids, levels)

    seed_uids = []
    for i in range(5):
        seed = place_item(world, "seed", 12 + i, 20, "A viable crop seed.")
        seed_uids.append(seed.uid)
    probe = place_item(
        world, "soil probe", 18, 21,
        "A handheld probe that reports a soil bed's nutrient feed.",
        props={"isUsable": True, "deviceKind": "soilprobe"},
    )
    sign = place_sign(world, SIGN_TEXT, 15, 19)

    add_location(world, "pilot field", 14, 10, facing="north")
    add_location(world, "planter row", 15, 18, facing="north")
    add_location(world, "supply corner", 14, 20, facing="north")

    refs = {
        "player": player.uid,
        "plots": plot_uids,
        "planters": planter_uids,
        "computer": computer.uid,
        "probe": probe.uid,
        "seeds": seed_uids,
        "sign": sign.uid,
    }
    return world, refs


def on_tick(task, world) -> None:
    """Advance seeds sitting in powered planter boxes."""
    rule = task.secrets["growth"]["rule"]
    for plot_uid in task.refs["planters"]:
        plot = world.objects.get(plot_uid)
        if plot is None:
            continue
        for child_uid in list(plot.contents):
            obj = world.objects.get(child_uid)
            if obj is None or obj.name != "seed":
                continue
            if obj.prop("plantedTick") < 0:
                obj.set_prop("plantedTick", world.tick)
                obj.set_prop("growthStage", 0)
                world.add_event("seed_planted", {"plot": plot_uid, "seed": child_uid})
            elif world.tick - obj.prop("plantedTick") >= GROW_DELAY_TICKS:
                if science.eval_nutrient_rule(rule, plot.prop("soilNutrients")):
                    obj.name = "grown plant"
                    obj.description = "A healthy plant in full leaf."
                    obj.set_prop("growthStage", 2)
                    world.add_event("plant_grown", {"plot": plot_uid, "seed": child_uid})
                else:
                    obj.name = "withered seed"
                    obj.description = "A seed that never came up."
                    obj.set_prop("growthStage", -1)
                    world.add_event("seed_withered", {"plot": plot_uid, "seed": child_uid})


def _rule_rubric(rule: dict) -> list[str]:
    if rule["form"] == "presence":
        return [rf"\b{rule['nutrient']}\b", r"(present|presence|need|requir|must|when|if)"]
    if rule["form"] == "at_value":
        return [rf"\b{rule['nutrient']}\b", rf"\b{rule['level']}\b"]
    expr = rule["expr"]
    a = expr[1][1]
    if expr[0] == "xor":
        b = expr[2][1]
        conn = r"(xor|exclusive|exactly one|only one|one of|but not both|not both)"
    elif expr[0] == "or":
        b = expr[2][1]
        conn = r"(\bor\b|either)"
    elif expr[2][0] == "not":
        b = expr[2][1][1]
        conn = r"(\bnot\b|without|absent|\bno\b|lacking|free of)"
    else:
        b = expr[2][1]
        conn = r"(\band\b|both|together|with)"
    return [rf"\b{a}\b", rf"\b{b}\b", conn]


def finalize(task, refs) -> None:
    growth = task.secrets["growth"]
    rule = growth["rule"]

    task.description = (
        "The greenhouse needs fresh crops, but the seeds only grow under a "
        "particular nutrient condition. Twelve pilot plots record last "
        "season's nutrient feeds together with their outcomes. Work out the "
        "growth condition, program the planter boxes through the soil "
        f"computer, and raise at least {GROW_TARGET} healthy plants."
    )
    task.scorecard_template = [
        item("P1", "A seed has been in an agent's inventory", 1,
             {"kind": "collect", "names": ["seed"], "points_each": 1}),
        item("P2", "Each pilot plot has been probed for its nutrient feed",
             len(refs["plots"]),
             {"kind": "measure", "instruments": ["soilprobe"],
              "target_uids": refs["plots"], "points_each": 1}),
        item("P3", "The soil computer has been used to program a planter box", 1,
             {"kind": "event_once", "name": "soil_set", "points": 1}),
        item("P4", "A seed has been planted in a planter box", 1,
             {"kind": "event_once", "name": "seed_planted", "points": 1}),
        item("P5", "Plants have grown in the planter boxes", 2 * GROW_TARGET,
             {"kind": "grown_count", "plot_uids": refs["planters"],
              "cap": GROW_TARGET, "points_each": 2}),
    ]
    task.completion = {
        "kind": "grown_at_least",
        "plot_uids": refs["planters"],
        "min": GROW_TARGET,
    }
    task.knowledge_questions = [
        question(
            "Q1",
            f"Does it clearly state the growth condition, i.e. that the crop "
            f"{science.rule_text(rule)}?",
            _rule_rubric(rule),
        ),
    ]
