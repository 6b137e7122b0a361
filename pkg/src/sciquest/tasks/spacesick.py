"""Cafeteria theme: crew are getting ill, find the moldy rations and make
them safe by cooking or quarantine, without poisoning yourself."""

from __future__ import annotations

from .. import science
from .base import item, question
from .mapgen import add_location, add_npc, add_player, carve_room, new_world, place_fixture, place_item, place_sign

SIGN_TEXT = (
    "Cafeteria protocol: any ration suspected of contamination must be "
    "cooked in the oven or dropped in the quarantine bin. Cooking kills "
    "mold; raw moldy food will make you ill. Crew health reports go out "
    "on the net feed. Instruments are on the bench."
)

INSTRUMENT_SPECS = [
    ("microscope", "microscope"),
    ("spectrometer", "spectrometer"),
    ("radiation meter", "radiationmeter"),
    ("thermometer", "thermometer"),
]


def gen_secrets(task, rng) -> dict:
    return {"contamination": science.gen_contamination(rng, task.difficulty)}


def _feed_posts(task, foods) -> list[tuple[str, str]]:
    bad = [f["name"] for f in foods if f["contaminated"]]
    if task.difficulty == "easy":
        return [
            ("quartermaster", "Restocked the pantry this morning. Rations are on the counter."),
            ("med bay", f"Three crew reported stomach cramps after eating the {bad[0]}. "
                        "Keep it out of the meal rotation until it is dealt with."),
            ("colonist Jun", "Feeling much better after skipping lunch yesterday."),
        ]
    if task.difficulty == "normal":
        return [
            ("quartermaster", "Pantry restock done; fresh rations on the counter."),
            ("med bay", f"Two separate cases of food sickness this week. "
                        f"Both patients shared the {bad[0]}."),
            ("colonist Jun", f"I had the {bad[1]} and felt awful all night. "
                             "Might be a coincidence."),
            ("med bay", "Reminder: cooking kills mold. The quarantine bin is for "
                        "anything you do not trust."),
        ]
    return [
        ("quartermaster", "Pantry restock done. Something smells off in there "
                          "but I cannot place it."),
        ("med bay", "Multiple crew ill after meals this week. No common ration "
                    "identified yet; bring me data, not guesses."),
        ("colonist Jun", "The mold detector we ordered arrived disassembled. "
                         "The housing and the sensor are somewhere in the cafeteria."),
        ("med bay", "Reminder: cooking kills mold. The quarantine bin is for "
                    "anything you do not trust."),
    ]


def build(task):
    world, rng = new_world(task)
    foods = task.secrets["contamination"]["foods"]

    carve_room(world, 6, 6, 26, 21)
    player = add_player(world, 16, 20, facing="north")

    food_uids = {}
    for i, food in enumerate(foods):
        obj = place_item(
            world, food["name"], 9 + 2 * i, 10,
            "A ration from the latest pantry restock.",
            props={
                "isEdible": True,
                "isPoisonous": food["contaminated"],
                "spectrum": list(food["spectrum"]),
                "microscopeDesc": science.MOLD_DESC if food["contaminated"] else science.CLEAN_DESC,
                "radiationusvh": food["radiationusvh"],
                "temperatureC": 19.0,
            },
        )
        food_uids[food["name"]] = obj.uid

    if task.difficulty == "challenge":
        bench = [s for s in INSTRUMENT_SPECS if s[1] != "microscope"]
    else:
        bench = INSTRUMENT_SPECS
    instrument_uids = {}
    for j, (name, kind) in enumerate(bench):
        tool = place_item(
            world, name, 9 + 2 * j, 14,
            f"A benchtop {name}.",
            props={"isUsable": True, "deviceKind": kind},
        )
        instrument_uids[kind] = tool.uid

    part_uids = []
    if task.difficulty == "challenge":
        for name, idx, x in [("detector housing", 0, 20), ("detector sensor", 1, 22)]:
            part = place_item(
                world, name, x, 18,
                "One half of a mail-order mold detector kit.",
                props={"isUsable": True, "deviceKind": "detectorpart", "deviceIndex": idx},
            )
            part_uids.append(part.uid)

    oven = place_fixture(
        world, "oven", 9, 18,
        "A galley oven. Activate it to cook whatever is inside.",
        props={"isContainer": True, "isActivatable": True,
               "deviceKind": "oven", "containerPrefix": "in"},
    )
    bin_obj = place_fixture(
        world, "quarantine bin", 12, 18,
        "A sealed bin for condemned rations.",
        props={"isContainer": True, "containerPrefix": "in"},
    )
    sign = place_sign(world, SIGN_TEXT, 16, 16)

    npc = add_npc(
        world, "colonist Mara", 21, 12,
        "A colonist nursing a cup of tea and a queasy look.",
        dialog={
            "root": {
                "text": "Half the crew got sick after the last pantry run. "
                        "Check the net feed before you eat anything.",
                "options": [
                    {"say": "Thanks, feel better.", "next": None, "effects": []},
                ],
            }
        },
    )

    for author, text in _feed_posts(task, foods):
        world.append_feed(author, text)

    add_location(world, "pantry counter", 16, 11, facing="north")
    add_location(world, "instrument bench", 12, 15, facing="north")
    add_location(world, "galley corner", 10, 19, facing="north")

    refs = {
        "player": player.uid,
        "foods": food_uids,
        "bad": [food_uids[f["name"]] for f in foods if f["contaminated"]],
        "bad_names": [f["name"] for f in foods if f["contaminated"]],
        "instruments": instrument_uids,
        "parts": part_uids,
        "oven": oven.uid,
        "bin": bin_obj.uid,
        "npc": npc.uid,
        "sign": sign.uid,
    }
    return world, refs


def finalize(task, refs) -> None:
    foods = task.secrets["contamination"]["foods"]
    n_food = len(foods)
    bad_names = refs["bad_names"]

    task.description = (
        "Colonists keep falling ill after meals, and the med bay suspects "
        f"mold. {n_food} rations from the latest restock sit on the pantry "
        "counter. Work out which rations are contaminated, then make every "
        "contaminated ration safe by cooking it or dropping it in the "
        "quarantine bin, without making yourself ill."
    )
    items = [
        item("P1", "Each ration has been examined with a contamination instrument",
             n_food,
             {"kind": "measure",
              "instruments": ["microscope", "spectrometer", "molddetector"],
              "target_uids": sorted(refs["foods"].values()), "points_each": 1}),
    ]
    for k, (uid, name) in enumerate(zip(refs["bad"], bad_names)):
        items.append(
            item(f"P{k + 2}", f"The {name} has been made safe", 2,
                 {"kind": "predicate_points", "points": 2,
                  "pred": {"kind": "any_of", "subs": [
                      {"kind": "prop_eq", "uid": uid, "prop": "isCooked", "value": True},
                      {"kind": "in_container", "uids": [uid],
                       "container_uid": refs["bin"]},
                  ]}}),
        )
    if task.difficulty == "challenge":
        items.append(
            item(f"P{len(items) + 1}", "The mold detector has been assembled", 2,
                 {"kind": "event_once", "name": "detector_built", "points": 2}),
        )
    task.scorecard_template = items
    task.completion = {
        "kind": "all_of",
        "subs": [
            {"kind": "food_safe_all", "uids": refs["bad"], "bin_uid": refs["bin"]},
            {"kind": "agent_not_ill"},
        ],
    }
    questions = [
        question(
            "Q1",
            "Does it clearly state which rations are contaminated with mold, "
            f"i.e. {', '.join(sorted(bad_names))}?",
            [rf"\b{name}\b" for name in bad_names]
            + [r"(mold|contamin|spoil|unsafe|poison|bad)"],
        ),
    ]
    if task.difficulty == "challenge":
        questions.append(
            question(
                "Q2",
                "Does it clearly state the spectral signature of the mold, "
                "i.e. a strong spike in band 3 of the spectrum?",
                [r"band\s*3", r"(spike|boost|elevat|high|peak|strong|raised)"],
            ),
        )
    task.knowledge_questions = questions
