"""Archaeology theme: date excavated artifacts and flag the oldest unknown."""

from __future__ import annotations

from .. import science
from .base import item, question
from .mapgen import add_location, add_player, new_world, place_fixture, place_item, place_sign, scatter

SIGN_TEXT = (
    "Expedition protocol: excavate each dig site (a shovel helps), measure "
    "the artifact inside with the dating meters, and work out which undated "
    "artifact is the oldest. Drop the red flag directly beside the dig site "
    "that held it."
)


def gen_secrets(task, rng) -> dict:
    return {"isotopes": science.gen_isotope_table(rng, task.difficulty)}


def build(task):
    world, rng = new_world(task)
    table = task.secrets["isotopes"]
    artifacts = table["artifacts"]
    hide_age = task.difficulty == "challenge"

    player = add_player(world, 16, 26, facing="north")

    meter_specs = [
        ("radiocarbon meter", "radiocarbonmeter", 13),
        ("radioisotope meter", "radioisotopemeter", 17),
    ]
    meters = {}
    for name, kind, x in meter_specs:
        m = place_item(
            world, name, x, 24,
            f"A field {name} for dating organic and mineral samples.",
            props={"isUsable": True, "deviceKind": kind},
        )
        meters[kind] = m.uid
    shovel = place_item(
        world, "shovel", 15, 24, "A sturdy digging shovel.",
        props={"isUsable": True, "deviceKind": "shovel"},
    )
    flag = place_item(world, "red flag", 16, 25, "A bright red marker flag on a short pole.")
    sign = place_sign(world, SIGN_TEXT, 15, 23)

    avoid = {(16, 26), (13, 24), (15, 24), (17, 24), (16, 25), (15, 23)}
    spots = scatter(world, rng, 5, 8, 25, 18, len(artifacts), min_sep=4, avoid=avoid)

    mounds = []
    artifact_uids = {}
    for i, (art, (x, y)) in enumerate(zip(artifacts, spots)):
        mound = place_fixture(
            world, f"dig site {i + 1}", x, y,
            "A low mound of packed earth. It could be dug open.",
            props={"isContainer": True, "isOpenable": True, "isShovelable": True,
                   "containerPrefix": "in"},
        )
        age = -1 if (hide_age and not art["known"]) else art["age"]
        a = world.add_object(
            art["name"],
            f"An old {art['name']} recovered from the dig.",
            props={"isMovable": True, "isPassable": True,
                   "radiocarbonAge": age,
                   "radioisotopeValues": list(art["readings"])},
            at=("obj", mound.uid),
        )
        artifact_uids[art["name"]] = a.uid
        mounds.append(mound.uid)
        if art["known"]:
            place_sign(
                world,
                f"Site record: this dig site yielded the {art['name']}, "
                f"dated to {art['age']} years.",
                x + 1, y,
                name="site record",
            )

    add_location(world, "base camp", 15, 25, facing="north")
    add_location(world, "dig field", 16, 14)

    oldest = science.oldest_unknown(table)
    oldest_idx = next(i for i, a in enumerate(artifacts) if a["name"] == oldest)
    unknown = [a["name"] for a in artifacts if not a["known"]]
    refs = {
        "player": player.uid,
        "meters": meters,
        "shovel": shovel.uid,
        "flag": flag.uid,
        "sign": sign.uid,
        "mounds": mounds,
        "artifacts": artifact_uids,
        "unknown_names": unknown,
        "oldest": oldest,
        "oldest_mound": mounds[oldest_idx],
    }
    return world, refs


def finalize(task, refs) -> None:
    table = task.secrets["isotopes"]
    n_sites = len(refs["mounds"])
    unknown_uids = [refs["artifacts"][n] for n in refs["unknown_names"]]
    n_unknown = len(unknown_uids)

    task.description = (
        f"An excavation field on Planet X holds {n_sites} dig sites. Site records "
        f"give the ages of some recovered artifacts; the rest are undated. Dig the "
        f"sites open, measure the artifacts with the dating meters, and determine "
        f"which undated artifact is the oldest. Drop the red flag directly beside "
        f"the dig site that contained it."
    )
    task.scorecard_template = [
        item("P1", "The dating meters have been in the inventory", 2,
             {"kind": "collect",
              "names": ["radiocarbon meter", "radioisotope meter"],
              "points_each": 1}),
        item("P2", "The dig sites have been excavated", n_sites,
             {"kind": "event_distinct", "name": "excavated", "field": "uid",
              "allowed": refs["mounds"], "cap": n_sites, "points_each": 1}),
        item("P3", "Each undated artifact has been measured with a dating meter", n_unknown,
             {"kind": "measure",
              "instruments": ["radiocarbonmeter", "radioisotopemeter"],
              "target_uids": unknown_uids, "points_each": 1}),
        item("P4", "The red flag has been in the inventory", 1,
             {"kind": "collect", "names": ["red flag"]}),
        item("P5", "The red flag marks the dig site of the oldest undated artifact", 2,
             {"kind": "predicate_points", "points": 2,
              "pred": {"kind": "flag_beside", "flag_uid": refs["flag"],
                       "target_uid": refs["oldest_mound"]}}),
    ]
    task.completion = {
        "kind": "flag_beside",
        "flag_uid": refs["flag"],
        "target_uid": refs["oldest_mound"],
    }
    questions = [
        question(
            "Q1",
            f"Does it clearly state that the {refs['oldest']} is the oldest of the "
            f"undated artifacts?",
            [rf"\b{refs['oldest']}\b", r"(old|ancient|age)"],
        ),
    ]
    if task.difficulty == "challenge":
        ch = table["correct_channel"] + 1
        questions.append(
            question(
                "Q2",
                f"Does it clearly state that radioisotope channel {ch} is the one whose "
                f"reading falls off with age?",
                [rf"channel\s*{ch}", r"(decreas|decay|drops?|lower|falls?|inverse|negative)"],
            )
        )
    task.knowledge_questions = questions
