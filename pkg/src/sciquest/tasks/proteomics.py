"""Proteomics theme: find the species whose protein values fall outside
the cluster, then flag its statue."""

from __future__ import annotations

from .. import science
from .base import item, question
from .mapgen import (
    add_location,
    add_npc,
    add_player,
    carve_room,
    new_world,
    place_item,
    place_sign,
    scatter,
)

SIGN_TEXT = (
    "Preserve research protocol: use the proteomics meter on each animal "
    "species, compare the readings, and drop the red flag directly beside "
    "the statue of the species whose values do not fit with the others."
)


def gen_secrets(task, rng) -> dict:
    return {"cluster": science.gen_cluster(rng, task.difficulty)}


def build(task):
    world, rng = new_world(task)
    cluster = task.secrets["cluster"]
    species = cluster["species"]
    wander = task.difficulty != "easy"

    if task.difficulty == "easy":
        # small indoor study lab; animals stay put
        carve_room(world, 4, 4, 27, 27)

    player = add_player(world, 16, 26, facing="north")

    statues = {}
    n = len(species)
    xs = [8 + 3 * i for i in range(n)]
    for x, sp in zip(xs, species):
        statue = world.add_object(
            f"statue of the {sp['name']}",
            f"A stone statue honoring the {sp['name']}.",
            at=("tile", x, 7),
        )
        statues[sp["name"]] = statue.uid

    meter = place_item(
        world, "proteomics meter", 14, 24,
        "A handheld meter that reports protein concentrations in living tissue.",
        props={"isUsable": True, "deviceKind": "proteomicsmeter"},
    )
    flag = place_item(world, "red flag", 16, 24, "A bright red marker flag on a short pole.")
    sign = place_sign(world, SIGN_TEXT, 15, 23)

    avoid = {(16, 26), (14, 24), (16, 24), (15, 23)}
    spots = scatter(world, rng, 6, 12, 25, 20, n, min_sep=3, avoid=avoid)
    animals = {}
    for (x, y), sp in zip(spots, species):
        body = add_npc(
            world, sp["name"], x, y,
            f"A {sp['name']}, one of the preserve's study species.",
            props={
                "isLiving": True,
                "proteinValues": {
                    science.PROTEIN_NAMES[i]: sp["point"][i]
                    for i in range(cluster["dims"])
                },
            },
            wander=wander,
        )
        animals[sp["name"]] = body.uid

    if wander:
        for (x, y) in scatter(world, rng, 5, 11, 26, 21, 3, min_sep=4):
            world.add_object(
                "grass tuft", "A clump of wiry native grass.",
                props={"isPassable": True}, at=("tile", x, y),
            )

    mid = xs[len(xs) // 2]
    add_location(world, "statue row", mid, 9, facing="north")
    add_location(world, "field bench", 15, 25, facing="north")
    add_location(world, "meadow", 16, 16)

    outlier = next(sp["name"] for sp in species if sp["is_outlier"])
    refs = {
        "player": player.uid,
        "meter": meter.uid,
        "flag": flag.uid,
        "sign": sign.uid,
        "statues": statues,
        "animals": animals,
        "outlier": outlier,
    }
    return world, refs


def finalize(task, refs) -> None:
    species_names = sorted(refs["animals"])
    n = len(species_names)
    outlier = refs["outlier"]
    animal_uids = [refs["animals"][s] for s in species_names]

    task.description = (
        f"You are a field scientist in a wildlife preserve on Planet X that is home "
        f"to {n} animal species. One of them migrated here recently, and its protein "
        f"chemistry does not match the locals. Use the proteomics meter on each "
        f"species and find the one whose values lie far from the cluster formed by "
        f"the rest. Then take the red flag and drop it directly beside the statue of "
        f"that species. Statues of all {n} species stand in the statue row."
    )
    task.scorecard_template = [
        item("P1", "The proteomics meter has been in the inventory", 1,
             {"kind": "collect", "names": ["proteomics meter"]}),
        item("P2", "Each animal species has been measured with the proteomics meter", n,
             {"kind": "measure", "instruments": ["proteomicsmeter"],
              "target_uids": animal_uids, "points_each": 1}),
        item("P3", "The red flag has been in the inventory", 1,
             {"kind": "collect", "names": ["red flag"]}),
        item("P4", "The red flag has been placed beside a statue", 1,
             {"kind": "predicate_points", "points": 1,
              "pred": {"kind": "any_of", "subs": [
                  {"kind": "flag_beside", "flag_uid": refs["flag"], "target_uid": uid}
                  for uid in (refs["statues"][s] for s in species_names)
              ]}}),
        item("P5", "The red flag marks the statue of the outlier species", 2,
             {"kind": "predicate_points", "points": 2,
              "pred": {"kind": "flag_beside", "flag_uid": refs["flag"],
                       "target_uid": refs["statues"][outlier]}}),
    ]
    task.completion = {
        "kind": "flag_beside",
        "flag_uid": refs["flag"],
        "target_uid": refs["statues"][outlier],
    }
    task.knowledge_questions = [
        question(
            "Q1",
            f"Does it clearly state that the {outlier} is the outlier species, "
            f"with protein values that do not cluster with the other animals?",
            [rf"\b{outlier}\b", r"(outlier|anomal|differ|apart|far from|cluster)"],
        ),
    ]
