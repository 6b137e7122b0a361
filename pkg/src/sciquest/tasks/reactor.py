"""Reactor lab theme: regress crystal resonance from instrument readings,
tune each reactor's dial, and bring them all online."""

from __future__ import annotations

from .. import science
from .base import item, question
from .mapgen import add_location, add_player, carve_room, new_world, place_fixture, place_item, place_sign

SIGN_TEXT = (
    "Reactor protocol: every reactor accepts its matching quantum crystal. "
    "Set the control dial to the crystal's resonance frequency (talk to the "
    "reactor to turn the dial), place the crystal in the reactor, then "
    "activate it. Labeled crystals state their frequency; for the rest, the "
    "lab instruments and some regression are your friends."
)

INSTRUMENT_SPECS = [
    ("thermometer", "thermometer"),
    ("densitometer", "densitometer"),
    ("radiation meter", "radiationmeter"),
    ("pH meter", "phmeter"),
    ("microscope", "microscope"),
]

INSTRUMENT_WORD = {
    "thermometer": "thermometer",
    "densitometer": "densitometer",
    "radiationmeter": "radiation meter",
    "phmeter": "pH meter",
}

INSTRUMENT_STEM = {
    "thermometer": r"(thermometer|temperature)",
    "densitometer": r"(densitometer|density|densit)",
    "radiationmeter": r"(radiation|radiat)",
    "phmeter": r"(ph meter|\bph\b|acidity)",
}


def gen_secrets(task, rng) -> dict:
    return {"relation": science.gen_crystal_relation(rng, task.difficulty)}


def _dial_dialog(uid: int, name: str) -> dict:
    def opt(say: str, delta: int) -> dict:
        return {
            "say": say,
            "next": "root",
            "effects": [
                {"kind": "adjust_prop", "uid": uid, "prop": "dialFrequency", "delta": delta},
                {"kind": "event", "name": "dial_adjusted", "data": {"uid": uid}},
            ],
        }

    return {
        "root": {
            "text": f"Control dial for the {name}: currently {{0}} Hz.",
            "show": [["prop", uid, "dialFrequency"]],
            "options": [
                opt("Turn the dial up by 10.", 10),
                opt("Turn the dial up by 1.", 1),
                opt("Turn the dial down by 1.", -1),
                opt("Turn the dial down by 10.", -10),
                {"say": "Leave the dial.", "next": None, "effects": []},
            ],
        }
    }


def build(task):
    world, rng = new_world(task)
    rel = task.secrets["relation"]
    crystals = rel["crystals"]
    n = len(crystals)

    carve_room(world, 4, 4, 27, 21)
    player = add_player(world, 16, 20, facing="north")

    reactor_uids = {}
    dial_offsets = {}
    for c in crystals:
        i = c["index"]
        x = 6 + 4 * (i - 1)
        body = place_fixture(
            world, f"reactor {i}", x, 7,
            f"A humming containment reactor with a crystal slot and a frequency dial. "
            f"Slot label: quantum crystal {i}.",
            props={"isContainer": True, "isActivatable": True, "isDialogable": True,
                   "deviceKind": "reactor", "deviceIndex": i,
                   "containerPrefix": "in"},
        )
        offset = rng.randint(11, 35) * rng.choice([-1, 1])
        body.set_prop("dialFrequency", c["freq"] + offset)
        dial_offsets[str(body.uid)] = offset
        world.dialogs[body.uid] = _dial_dialog(body.uid, body.name)
        reactor_uids[i] = body.uid

    crystal_uids = {}
    for c in crystals:
        i = c["index"]
        x = 7 + 3 * (i - 1)
        props = {
            "isUsable": False,
            "deviceIndex": i,
            "resonanceFrequency": c["freq"],
            "temperatureC": float(c["readings"]["temperatureC"]),
            "density": float(c["readings"]["density"]),
            "radiationusvh": float(c["readings"]["radiationusvh"]),
            "ph": float(c["readings"]["ph"]),
        }
        cry = place_item(
            world, c["name"], x, 12,
            "A faceted quantum crystal, cool to the touch.",
            props=props,
        )
        crystal_uids[i] = cry.uid
        if c["known"]:
            place_sign(
                world,
                f"Label: {c['name']} resonates at {c['freq']} Hz.",
                x, 13,
                name="crystal label",
            )

    if task.difficulty == "easy":
        instruments_used = [s for s in INSTRUMENT_SPECS
                            if s[1] == science.PROP_INSTRUMENT[rel["critical_prop"]]]
    else:
        instruments_used = INSTRUMENT_SPECS
    instrument_uids = {}
    for j, (name, kind) in enumerate(instruments_used):
        tool = place_item(
            world, name, 8 + 2 * j, 16,
            f"A benchtop {name}.",
            props={"isUsable": True, "deviceKind": kind},
        )
        instrument_uids[kind] = tool.uid

    sign = place_sign(world, SIGN_TEXT, 16, 18)

    add_location(world, "reactor row", 16, 9, facing="north")
    add_location(world, "crystal bench", 16, 13, facing="north")
    add_location(world, "instrument shelf", 12, 17, facing="north")

    refs = {
        "player": player.uid,
        "reactors": reactor_uids,
        "crystals": crystal_uids,
        "instruments": instrument_uids,
        "sign": sign.uid,
        "dial_offsets": dial_offsets,
        "unknown_reactors": [reactor_uids[c["index"]] for c in crystals if not c["known"]],
        "gold_freqs": {str(reactor_uids[c["index"]]): c["freq"] for c in crystals},
    }
    return world, refs


def finalize(task, refs) -> None:
    rel = task.secrets["relation"]
    crystals = rel["crystals"]
    n = len(crystals)
    n_unknown = len(refs["unknown_reactors"])
    n_instruments = len(refs["instruments"])
    crystal_uid_list = [refs["crystals"][c["index"]] for c in crystals]
    crystal_names = [c["name"] for c in crystals]
    reactor_uid_list = [refs["reactors"][c["index"]] for c in crystals]
    critical_kind = science.PROP_INSTRUMENT[rel["critical_prop"]]

    task.description = (
        f"The lab's {n} reactors are offline. Each reactor slot takes its matching "
        f"quantum crystal and only starts when the control dial equals that "
        f"crystal's resonance frequency. Labels give the frequency for some "
        f"crystals; the others follow a hidden numeric relationship between one "
        f"instrument reading and frequency. Measure the crystals, recover the "
        f"relationship, tune every dial, and activate all {n} reactors."
    )
    task.scorecard_template = [
        item("P1", "The quantum crystals have each been in an agent's inventory", n,
             {"kind": "collect", "names": crystal_names, "points_each": 1}),
        item("P2", "Each scientific instrument has been used with at least one crystal",
             n_instruments,
             {"kind": "event_distinct", "name": "instrument_used", "field": "instrument",
              "allowed": sorted(refs["instruments"]),
              "match_in": {"target_uid": crystal_uid_list},
              "cap": n_instruments, "points_each": 1}),
        item("P3", "Each crystal has been examined by the critical instrument", n,
             {"kind": "event_distinct", "name": "instrument_used", "field": "target_uid",
              "allowed": crystal_uid_list,
              "match_in": {"instrument": [critical_kind]},
              "cap": n, "points_each": 1}),
        item("P4", "The resonance frequency of the unknown reactors have been changed",
             n_unknown,
             {"kind": "event_distinct", "name": "dial_adjusted", "field": "uid",
              "allowed": refs["unknown_reactors"], "cap": n_unknown, "points_each": 1}),
        item("P5", "The resonance frequency of the unknown reactors is correct", n_unknown,
             {"kind": "prop_match_each",
              "pairs": [[uid, "dialFrequency", refs["gold_freqs"][str(uid)]]
                        for uid in refs["unknown_reactors"]],
              "points_each": 1}),
        item("P6", "The reactors have been successfully activated", 2 * n,
             {"kind": "event_distinct", "name": "reactor_activated", "field": "uid",
              "allowed": reactor_uid_list, "cap": n, "points_each": 2}),
    ]
    task.completion = {
        "kind": "prop_all",
        "uids": reactor_uid_list,
        "prop": "isActivated",
        "value": True,
    }
    instr_word = INSTRUMENT_WORD[critical_kind]
    coeffs = rel["coeffs"]
    if rel["kind"] == "slope":
        kind_pat = r"(linear|slope|proportional|times|\*)"
    elif rel["kind"] == "linear":
        kind_pat = r"(linear|slope|line|\+|plus)"
    else:
        kind_pat = r"(quadratic|squared|\^2|second[- ]order)"
    task.knowledge_questions = [
        question(
            "Q1",
            f"Does it clearly state that the resonance frequency of the crystals is "
            f"dependent upon the {instr_word} reading?",
            [INSTRUMENT_STEM[critical_kind], r"(resonan|frequen)",
             r"(depend|relat|correlat|function|formula|predict|=)"],
        ),
        question(
            "Q2",
            f"Does it clearly state the quantitative relationship, i.e. "
            f"{science.relation_formula_text(rel)}?",
            [kind_pat] + [rf"\b{c}\b" for c in coeffs],
        ),
    ]
