"""Launch-site theme: recover the planet's gravity and radius from field
measurements, compute the orbital velocity, and program the flight console."""

from __future__ import annotations

import re

from .. import science
from .base import item, question
from .mapgen import add_location, add_player, fill_rect, new_world, place_fixture, place_item, place_sign

EASY_BRIEFING = (
    "Mission briefing: this colony sits on {body}. Reference constants for "
    "known bodies are printed in the rocketry handbook."
)

REFERENCE_TABLE = "; ".join(
    f"{body}: M = {M:.4g} kg, R = {R:.4g} m"
    for body, (M, R) in sorted(science.KNOWN_BODIES.items())
)


def gen_secrets(task, rng) -> dict:
    return {"planet": science.gen_planet(rng, task.difficulty)}


def _handbook_text(task, planet: dict) -> str:
    lines = [
        "Rocketry handbook.",
        f"Circular orbit speed: v = sqrt(G * M / (R + h)), with G = {science.G_CONST} "
        "m^3 kg^-1 s^-2. Equivalently v = R * sqrt(g / (R + h)) using surface "
        "gravity g, so the planet's mass is never needed directly.",
        "Pendulum gravimetry: g = 4 * pi^2 * L / T^2 for one full period T of "
        "a pendulum with cable length L.",
        "Planet radius from two noon shadows a baseline B apart: R = B / dtheta, "
        "with dtheta the shadow-angle difference in radians.",
        f"Mission profile: rocket mass {planet['rocket_mass']:.0f} kg, target "
        f"orbit altitude {planet['h']:.0f} m above the surface.",
    ]
    if task.difficulty == "challenge":
        lines.append(
            "Propellant sizing: burn time t = mass * v / thrust; propellant "
            "mass = flow * t; volume in liters = mass / density (g/cm^3). "
            "Pick a propellant whose volume fits the depot tank."
        )
    if task.difficulty == "easy":
        lines.append(f"Reference bodies: {REFERENCE_TABLE}.")
    return " ".join(lines)


def _console_dialog(task, planet: dict, rng) -> tuple[dict, dict]:
    v = planet["v_orbit"]
    surface_v = science.orbital_velocity(planet["M"], planet["R"], 0.0)
    choices = [v, surface_v, v * 2 ** 0.5, v * 0.62]
    order = list(range(4))
    rng.shuffle(order)
    velocity_options = [choices[i] for i in order]
    correct_velocity = order.index(0)

    options = []
    for idx, val in enumerate(velocity_options):
        effects = [{"kind": "event", "name": "velocity_set", "data": {"value": round(val, 1)}}]
        if idx == correct_velocity:
            effects.insert(0, {"kind": "event", "name": "velocity_ok", "data": {}})
        options.append({"say": f"Program ascent to {val:.1f} m/s.", "next": "root",
                        "effects": effects})

    nodes: dict = {}
    correct_propellant = -1
    propellant_names = []
    if task.difficulty == "challenge":
        propellant_names = [p["name"] for p in planet["propellants"]]
        rng.shuffle(propellant_names)
        correct_propellant = propellant_names.index(planet["designated"])
        prop_options = []
        for idx, name in enumerate(propellant_names):
            effects = [{"kind": "event", "name": "propellant_set", "data": {"type": name}}]
            if idx == correct_propellant:
                effects.insert(0, {"kind": "event", "name": "propellant_ok", "data": {}})
            prop_options.append({"say": f"Load {name}.", "next": "root", "effects": effects})
        prop_options.append({"say": "Back.", "next": "root", "effects": []})
        nodes["propellant"] = {
            "text": "Propellant loadout. The depot manifest lists the candidates.",
            "options": prop_options,
        }
        options.append({"say": "Propellant loadout.", "next": "propellant", "effects": []})

    options.append({"say": "Launch.", "next": None,
                    "effects": [{"kind": "event", "name": "launch_attempt", "data": {}}]})
    options.append({"say": "Step away.", "next": None, "effects": []})
    nodes["root"] = {
        "text": f"Flight computer. Target: circular orbit {planet['h']:.0f} m above "
                "the surface. Select an ascent velocity program.",
        "options": options,
    }
    menu = {
        "velocity_options": [round(x, 1) for x in velocity_options],
        "correct_velocity_index": correct_velocity,
        "propellant_options": propellant_names,
        "correct_propellant_index": correct_propellant,
    }
    return nodes, menu


def build(task):
    world, rng = new_world(task)
    planet = task.secrets["planet"]
    era = planet["eratosthenes"]

    fill_rect(world, 13, 9, 19, 13, "=")
    player = add_player(world, 16, 18, facing="north")

    rocket = place_fixture(
        world, "colony rocket", 16, 10,
        f"The colony's ascent rocket, fueled mass {planet['rocket_mass']:.0f} kg, "
        "waiting for a flight program.",
    )
    console = place_fixture(
        world, "flight console", 15, 12,
        "The launch console. Talk to it to program the ascent.",
        props={"isDialogable": True},
    )
    nodes, menu = _console_dialog(task, planet, rng)
    world.dialogs[console.uid] = nodes

    pendulum = place_fixture(
        world, "survey pendulum", 20, 16,
        "A tall gravimetric pendulum on a tripod. Its cable is exactly "
        f"{planet['pendulum']['length_m']:.1f} m long. Activate it to time one full swing.",
        props={"isActivatable": True, "deviceKind": "pendulum",
               "pendulumLength": planet["pendulum"]["length_m"],
               "pendulumGravity": planet["g"]},
    )

    plaques = []
    for name, x, angle, extra in [
        ("west survey plaque", 6, era["angle1_deg"], ""),
        ("east survey plaque", 26, era["angle2_deg"],
         f" The survey baseline from the west obelisk is {era['baseline_m']:.0f} m."),
    ]:
        place_fixture(world, name.replace("survey plaque", "obelisk"), x, 6,
                      "A tall survey obelisk casting a crisp noon shadow.",
                      props={"isPassable": False})
        plaque = place_sign(
            world,
            f"Survey plaque: at this obelisk the noon shadow angle is {angle} degrees.{extra}",
            x, 7, name=name,
        )
        plaques.append(plaque.uid)

    handbook = place_item(
        world, "rocketry handbook", 14, 16,
        "A dog-eared field manual of launch formulas.",
        props={"isReadable": True, "document": _handbook_text(task, planet)},
    )

    depot_sign = None
    if task.difficulty == "challenge":
        manifest = f"Depot manifest. Tank capacity: {planet['tank_cap_l']:.0f} L. " + " ".join(
            f"{p['name']}: density {p['density']:.2f} g/cm^3, flow "
            f"{p['flow_kg_s']:.0f} kg/s, thrust {p['thrust_n']:.0f} N."
            for p in planet["propellants"]
        )
        depot_sign = place_sign(world, manifest, 22, 12, name="depot manifest")
    if task.difficulty == "easy":
        place_sign(world, EASY_BRIEFING.format(body=planet["body"]), 17, 14,
                   name="mission briefing")

    add_location(world, "launch pad", 16, 13, facing="north")
    add_location(world, "pendulum station", 20, 17, facing="north")
    add_location(world, "west obelisk", 6, 8, facing="north")
    add_location(world, "east obelisk", 26, 8, facing="north")

    refs = {
        "player": player.uid,
        "rocket": rocket.uid,
        "console": console.uid,
        "pendulum": pendulum.uid,
        "handbook": handbook.uid,
        "plaques": plaques,
        "depot_sign": depot_sign.uid if depot_sign else None,
        "menu": menu,
    }
    return world, refs


def finalize(task, refs) -> None:
    planet = task.secrets["planet"]
    v = planet["v_orbit"]

    where = f"on {planet['body']}" if planet["body"] else "on an uncharted planet"
    task.description = (
        f"A colony rocket stands fueled {where}, but its flight computer needs "
        "an ascent velocity for the target circular orbit. Use the field "
        "instruments to pin down the planet's surface gravity and radius, "
        "compute the orbital velocity for the listed altitude, program the "
        "flight console, and launch."
        + (" The depot only stocks one propellant whose tank volume fits; "
           "pick it before launch." if task.difficulty == "challenge" else "")
    )
    items = [
        item("P1", "The rocketry handbook has been read", 1,
             {"kind": "event_once", "name": "read",
              "match": {"uid": refs["handbook"]}, "points": 1}),
        item("P2", "The survey pendulum has been timed", 2,
             {"kind": "event_once", "name": "pendulum_timed", "points": 2}),
        item("P3", "Both obelisk survey plaques have been read", 2,
             {"kind": "event_distinct", "name": "read", "field": "uid",
              "allowed": refs["plaques"], "cap": 2, "points_each": 1}),
        item("P4", "The correct ascent velocity has been programmed", 3,
             {"kind": "event_once", "name": "velocity_ok", "points": 3}),
        item("P5", "A launch has been attempted", 1,
             {"kind": "event_once", "name": "launch_attempt", "points": 1}),
    ]
    completion_subs = [
        {"kind": "event", "name": "velocity_ok"},
        {"kind": "event", "name": "launch_attempt"},
    ]
    if task.difficulty == "challenge":
        items.append(
            item("P6", "The designated propellant has been selected", 2,
                 {"kind": "event_once", "name": "propellant_ok", "points": 2}),
        )
        completion_subs.insert(1, {"kind": "event", "name": "propellant_ok"})
    task.scorecard_template = items
    task.completion = {"kind": "all_of", "subs": completion_subs}

    v_forms = sorted({str(int(round(v))), str(int(v)), f"{v / 1000:.2f}".replace(".", r"\.")})
    questions = [
        question(
            "Q1",
            "Does it clearly state the planet's surface gravity, i.e. "
            f"approximately {planet['g']:.1f} m/s^2?",
            [r"gravit", re.escape(f"{planet['g']:.1f}")],
        ),
        question(
            "Q2",
            "Does it clearly state the required orbital velocity, i.e. "
            f"approximately {v:.0f} m/s?",
            [r"orbit", "(" + "|".join(v_forms) + ")"],
        ),
    ]
    if task.difficulty == "challenge":
        questions.append(
            question(
                "Q3",
                f"Does it clearly state that the {planet['designated']} is the "
                "propellant whose tank volume fits the depot capacity?",
                [re.escape(planet["designated"]),
                 r"(tank|volume|capacity|fits|smallest|least)"],
            ),
        )
    task.knowledge_questions = questions
