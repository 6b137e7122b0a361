"""Village theme: decode an alien request from grounding signs around the
market, then deliver what the elder actually asked for."""

from __future__ import annotations

import re

from .. import science
from .base import item, question
from .mapgen import add_location, add_npc, add_player, new_world, place_item, place_sign

NUMBER_WORDS = {1: "one", 2: "two", 3: "three", 4: "four", 5: "five"}

ITEM_DESCRIPTIONS = {
    "flower": "A fresh-cut flower.",
    "stone": "A smooth river stone.",
    "fruit": "A ripe piece of fruit.",
    "shell": "A spiral shell.",
}


def gen_secrets(task, rng) -> dict:
    return {"lexicon": science.gen_lexicon(rng, task.difficulty)}


def _grounding_sign_text(grounding: dict) -> tuple[str, str]:
    word = grounding["word"]
    meaning = grounding["meaning"]
    category = grounding["category"]
    if category == "item":
        return "market stall sign", f'Stall sign: a painted {meaning} next to the word "{word}".'
    if category == "color":
        return "dyed banner", f'A banner dyed {meaning}, stitched with the word "{word}".'
    if category == "amount":
        return "tally board", f'A tally board: {meaning} marks scored beside the word "{word}".'
    return "village mural", (
        f'A mural of a villager carrying goods to the elder, captioned "{word}".'
    )


def build(task):
    world, rng = new_world(task)
    lex = task.secrets["lexicon"]
    gold = lex["gold"]
    utterance = " ".join(lex["utterance"])

    player = add_player(world, 16, 22, facing="north")

    elder = add_npc(
        world, "village elder", 16, 12,
        "The village elder, waiting with evident patience.",
        props={"isLiving": True},
        dialog={
            "root": {
                "text": f'The elder beckons and says: "{utterance}!"',
                "options": [
                    {"say": "Could you repeat that?", "next": "root",
                     "effects": [{"kind": "event", "name": "utterance_repeated",
                                  "data": {}}]},
                    {"say": "I will see what I can do.", "next": None, "effects": []},
                ],
            }
        },
    )

    sign_uids = []
    x = 8
    for grounding in lex["groundings"]:
        name, text = _grounding_sign_text(grounding)
        sign = place_sign(world, text, x, 16, name=name)
        sign_uids.append(sign.uid)
        x += 3

    if task.difficulty != "easy":
        # true but irrelevant vocabulary, same sign style as the real clues
        for meaning in sorted(science.ITEM_MEANINGS):
            if meaning == gold["item"]:
                continue
            word = lex["words"]["item"][meaning]
            place_sign(
                world,
                f'Stall sign: a painted {meaning} next to the word "{word}".',
                x, 16, name="market stall sign",
            )
            x += 3
            if x > 26:
                break

    if task.difficulty == "challenge":
        gold_name = f"{gold['color']} {gold['item']}"
        goods = [gold_name] * gold["amount"]
        other_color = next(c for c in science.COLOR_MEANINGS if c != gold["color"])
        other_item = next(i for i in science.ITEM_MEANINGS if i != gold["item"])
        goods += [f"{other_color} {gold['item']}", f"{gold['color']} {other_item}",
                  f"{other_color} {other_item}"]
    else:
        gold_name = gold["item"]
        other_items = [i for i in science.ITEM_MEANINGS if i != gold["item"]]
        goods = [gold_name, other_items[0], other_items[1]]

    goods_uids = []
    for k, name in enumerate(goods):
        base = name.split()[-1]
        obj = place_item(world, name, 9 + 2 * k, 19, ITEM_DESCRIPTIONS[base])
        goods_uids.append(obj.uid)

    add_location(world, "elder's porch", 16, 13, facing="north")
    add_location(world, "market row", 12, 17, facing="north")
    add_location(world, "goods mat", 11, 20, facing="north")

    refs = {
        "player": player.uid,
        "elder": elder.uid,
        "grounding_signs": sign_uids,
        "goods": goods_uids,
        "gold_name": gold_name,
        "amount": gold["amount"],
    }
    return world, refs


def finalize(task, refs) -> None:
    lex = task.secrets["lexicon"]
    gold = lex["gold"]
    amount = gold["amount"]
    substrings = [gold["color"], gold["item"]] if task.difficulty == "challenge" else [gold["item"]]

    plural = "s" if amount > 1 else ""
    task.description = (
        "The village elder greets you in a language you do not speak, and "
        "clearly wants something. Signs, banners and tally boards around the "
        "market pair alien words with pictures. Decode the elder's request "
        "and deliver exactly what was asked."
    )
    task.scorecard_template = [
        item("P1", "The elder has been spoken to", 1,
             {"kind": "event_once", "name": "talked",
              "match": {"uid": refs["elder"]}, "points": 1}),
        item("P2", "Every grounding sign has been read", len(refs["grounding_signs"]),
             {"kind": "event_distinct", "name": "read", "field": "uid",
              "allowed": refs["grounding_signs"],
              "cap": len(refs["grounding_signs"]), "points_each": 1}),
        item("P3", f"The requested good{plural} have been delivered to the elder", amount,
             {"kind": "npc_received_count", "npc_uid": refs["elder"],
              "substrings": substrings, "cap": amount, "points_each": 1}),
        item("P4", "The elder's request has been fulfilled", 2,
             {"kind": "predicate_points", "points": 2,
              "pred": {"kind": "npc_received", "npc_uid": refs["elder"],
                       "substrings": substrings, "count": amount}}),
    ]
    task.completion = {
        "kind": "npc_received",
        "npc_uid": refs["elder"],
        "substrings": substrings,
        "count": amount,
    }

    questions = []
    meaning_pattern = {
        "verb": r"(bring|carry|deliver|fetch|give)",
        "amount": None,
        "color": None,
        "item": None,
    }
    for k, grounding in enumerate(lex["groundings"]):
        category = grounding["category"]
        meaning = grounding["meaning"]
        if category == "amount":
            pat = rf"(\b{meaning}\b|{NUMBER_WORDS[int(meaning)]})"
        elif category == "verb":
            pat = meaning_pattern["verb"]
        else:
            pat = rf"\b{meaning}\b"
        questions.append(
            question(
                f"Q{k + 1}",
                f'Does it clearly state that the alien word "{grounding["word"]}" '
                f'means "{meaning}"?',
                [re.escape(grounding["word"]), pat],
            )
        )
    task.knowledge_questions = questions
