"""Chemistry theme: mix chemicals in the right ratio to dissolve rust."""

from __future__ import annotations

import re

from .. import science
from .base import item, question
from .mapgen import add_location, add_player, fill_rect, new_world, place_fixture, place_item, place_sign

SIGN_TEXT = (
    "Mixing station: use a dispenser on the mixing jar to add one part of a "
    "chemical. Pour the jar onto rusted metal to test the blend; the rust "
    "level tells you how close the ratio is. The right ratio removes rust "
    "completely."
)


def gen_secrets(task, rng) -> dict:
    return {"mixture": science.gen_mixture_target(rng, task.difficulty)}


def recipe_text(target: dict) -> str:
    parts = []
    for chem in sorted(target):
        n = target[chem]
        parts.append(f"{n} part{'s' if n != 1 else ''} {chem}")
    return ", ".join(parts)


def build(task):
    world, rng = new_world(task)
    mixture = task.secrets["mixture"]
    chems = mixture["chemicals"]

    fill_rect(world, 8, 8, 23, 22, "_")
    player = add_player(world, 16, 21, facing="north")

    dispensers = {}
    for i, chem in enumerate(chems):
        d = place_fixture(
            world, f"{chem} dispenser", 11 + 2 * i, 10,
            f"A wall dispenser that doses one part of {chem} at a time.",
            props={"isUsable": True, "deviceKind": f"dispenser:{chem}"},
        )
        dispensers[chem] = d.uid

    jar = place_item(
        world, "mixing jar", 14, 18,
        "A graduated glass jar for blending chemicals.",
        props={"isUsable": True, "deviceKind": "mixjar"},
    )
    sign = place_sign(world, SIGN_TEXT, 16, 18)

    target_names = ["rusted gear"]
    if task.difficulty == "challenge":
        target_names.append("rusted lantern")
    positions = [(19, 14), (11, 14)]
    targets = []
    for name, (x, y) in zip(target_names, positions):
        t = place_fixture(
            world, name, x, y,
            f"A {name.split()[1]} caked in heavy flaking rust.",
            props={"rustLevel": science.RUST_LEVEL_ORDER["heavy"],
                   "mixtureDict": dict(mixture["target"])},
        )
        targets.append(t.uid)

    add_location(world, "mixing station", 14, 11, facing="north")
    add_location(world, "workbench", 15, 18)
    add_location(world, "corrosion site", 19, 15, facing="north")
    if len(targets) > 1:
        add_location(world, "second corrosion site", 11, 15, facing="north")

    refs = {
        "player": player.uid,
        "jar": jar.uid,
        "sign": sign.uid,
        "dispensers": dispensers,
        "targets": targets,
    }
    return world, refs


def finalize(task, refs) -> None:
    mixture = task.secrets["mixture"]
    target = mixture["target"]
    n_targets = len(refs["targets"])

    plural = "objects" if n_targets > 1 else "object"
    task.description = (
        f"The station's metal tools are ruined by alien rust. A supply room "
        f"offers {len(mixture['chemicals'])} chemical dispensers and a mixing "
        f"jar. Exactly one mixing ratio dissolves the rust; testing a blend on "
        f"rusted metal shows how much rust remains, so each test narrows the "
        f"search. Find the ratio and clean every rusted {plural} completely."
    )
    cleaned_levels = [
        {"kind": "prop_eq", "uid": uid, "prop": "rustLevel", "value": lvl}
        for uid in refs["targets"]
        for lvl in (science.RUST_LEVEL_ORDER["removed"], science.RUST_LEVEL_ORDER["light"])
    ]
    task.scorecard_template = [
        item("P1", "The mixing jar has been in the inventory", 1,
             {"kind": "collect", "names": ["mixing jar"]}),
        item("P2", "A chemical has been dispensed into the jar", 1,
             {"kind": "event_once", "name": "dispensed", "points": 1}),
        item("P3", "A blend has been tested on rusted metal", 1,
             {"kind": "event_once", "name": "rust_test", "points": 1}),
        item("P4", "A blend reduced the rust to light or removed it", 2,
             {"kind": "predicate_points", "points": 2,
              "pred": {"kind": "any_of", "subs": cleaned_levels}}),
        item("P5", "All rusted objects are rust-free", 5,
             {"kind": "predicate_points", "points": 5,
              "pred": {"kind": "prop_all", "uids": refs["targets"],
                       "prop": "rustLevel",
                       "value": science.RUST_LEVEL_ORDER["removed"]}}),
    ]
    task.completion = {
        "kind": "prop_all",
        "uids": refs["targets"],
        "prop": "rustLevel",
        "value": science.RUST_LEVEL_ORDER["removed"],
    }
    rubric = [
        rf"{n}\s*parts?\s*(of\s*)?{re.escape(chem)}"
        for chem, n in sorted(target.items())
    ]
    task.knowledge_questions = [
        question(
            "Q1",
            f"Does it clearly state that the rust-removing blend is {recipe_text(target)}?",
            rubric,
        ),
    ]
