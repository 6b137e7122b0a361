"""Scorecards: completion, procedural checklist, knowledge grading.

Procedural items and the completion condition are data: small detector
specs interpreted here against the world, its event log, and the acting
agent. Earned points are latched (never revoked) and each item may keep a
small JSON state (e.g. the set of crystals seen in the inventory so far)
so "has ever happened" items stay monotone.

Knowledge grading has two backends: a deterministic rubric grader (regex
conjunctions authored by the task generator) for offline runs, and a
remote chat-completion grader that fills the standard evaluation prompt.
"""

from __future__ import annotations

import json
import re
from typing import Optional

from .world import AgentState, WorldState

# ---------------------------------------------------------------------------
# detector evaluation

def _tile_of(world: WorldState, uid: int) -> Optional[tuple[int, int]]:
    if uid not in world.objects:
        return None
    return world.object_tile(uid)


def _in_container_chain(world: WorldState, uid: int, container_uid: int) -> bool:
    cur = world.objects.get(uid)
    while cur is not None and cur.parent is not None:
        if cur.parent[0] != "obj":
            return False
        if cur.parent[1] == container_uid:
            return True
        cur = world.objects.get(cur.parent[1])
    return False


def _events(world: WorldState, name: str, match: Optional[dict] = None) -> list[dict]:
    out = []
    for ev in world.events:
        if ev["kind"] != name:
            continue
        if match and any(ev["data"].get(k) != v for k, v in match.items()):
            continue
        out.append(ev)
    return out


def eval_predicate(world: WorldState, agent: AgentState, spec: dict) -> bool:
    """Boolean detectors used for completion conditions and point gates."""
    kind = spec["kind"]
    if kind == "all_of":
        return all(eval_predicate(world, agent, s) for s in spec["subs"])
    if kind == "any_of":
        return any(eval_predicate(world, agent, s) for s in spec["subs"])
    if kind == "not":
        return not eval_predicate(world, agent, spec["sub"])
    if kind == "event":
        return len(_events(world, spec["name"], spec.get("match"))) >= spec.get("min_count", 1)
    if kind == "prop_eq":
        uid = spec["uid"]
        if uid not in world.objects:
            return False
        return world.objects[uid].prop(spec["prop"]) == spec["value"]
    if kind == "prop_all":
        return all(
            uid in world.objects and world.objects[uid].prop(spec["prop"]) == spec["value"]
            for uid in spec["uids"]
        )
    if kind == "flag_beside":
        flag_tile = _tile_of(world, spec["flag_uid"])
        target_tile = _tile_of(world, spec["target_uid"])
        if flag_tile is None or target_tile is None:
            return False
        # the flag must be on the ground, not carried
        flag = world.objects[spec["flag_uid"]]
        if flag.parent is None or flag.parent[0] != "tile":
            return False
        dx = abs(flag_tile[0] - target_tile[0])
        dy = abs(flag_tile[1] - target_tile[1])
        return max(dx, dy) <= 1
    if kind == "flag_in_region":
        tile = _tile_of(world, spec["flag_uid"])
        if tile is None:
            return False
        flag = world.objects[spec["flag_uid"]]
        if flag.parent is None or flag.parent[0] != "tile":
            return False
        x0, y0, x1, y1 = spec["rect"]
        return x0 <= tile[0] <= x1 and y0 <= tile[1] <= y1
    if kind == "in_container":
        return all(
            uid in world.objects and _in_container_chain(world, uid, spec["container_uid"])
            for uid in spec["uids"]
        )
    if kind == "npc_received":
        npc = world.objects.get(spec["npc_uid"])
        if npc is None:
            return False
        subs = [s.lower() for s in spec["substrings"]]
        n = sum(
            1
            for uid in npc.contents
            if all(s in world.objects[uid].name.lower() for s in subs)
        )
        return n >= spec["count"]
    if kind == "agent_not_ill":
        return not world.agent_body(agent).prop("isIll")
    if kind == "food_safe_all":
        # every contaminated food is gone, cooked, or quarantined
        for uid in spec["uids"]:
            if uid not in world.objects:
                continue  # eaten or destroyed; illness is gated separately
            obj = world.objects[uid]
            if obj.prop("isCooked"):
                continue
            if _in_container_chain(world, uid, spec["bin_uid"]):
                continue
            return False
        return True
    if kind == "grown_at_least":
        n = sum(
            1
            for uid in spec["plot_uids"]
            if any(
                world.objects[c].prop("growthStage") == 2
                for c in world.objects[uid].contents
                if c in world.objects
            )
        )
        return n >= spec["min"]
    raise ValueError(f"unknown predicate kind: {kind}")


def eval_item(world: WorldState, agent: AgentState, spec: dict, state: dict) -> int:
    """Point-valued detectors for procedural checklist items."""
    kind = spec["kind"]
    if kind == "collect":
        seen = set(state.get("seen", []))
        body = world.agent_body(agent)
        inv_names = {world.objects[u].name for u in body.contents}
        for name in spec["names"]:
            if name in inv_names:
                seen.add(name)
        state["seen"] = sorted(seen)
        return len(seen) * spec.get("points_each", 1)
    if kind == "measure":
        seen = set(state.get("seen", []))
        instruments = spec.get("instruments")
        for ev in _events(world, "instrument_used"):
            if instruments and ev["data"]["instrument"] not in instruments:
                continue
            if ev["data"]["target_uid"] in spec["target_uids"]:
                seen.add(ev["data"]["target_uid"])
        state["seen"] = sorted(seen)
        return len(seen) * spec.get("points_each", 1)
    if kind == "event_distinct":
        # distinct values of one event field, optionally restricted to an
        # allowed value set and to events whose other fields hit `match_in`
        seen = set(state.get("seen", []))
        allowed = spec.get("allowed")
        allowed_strs = {str(v) for v in allowed} if allowed is not None else None
        match_in = spec.get("match_in", {})
        for ev in _events(world, spec["name"]):
            if any(ev["data"].get(k) not in vs for k, vs in match_in.items()):
                continue
            value = str(ev["data"].get(spec["field"]))
            if allowed_strs is not None and value not in allowed_strs:
                continue
            seen.add(value)
        state["seen"] = sorted(seen)
        cap = spec.get("cap", len(seen))
        return min(len(seen), cap) * spec.get("points_each", 1)
    if kind == "event_once":
        hit = len(_events(world, spec["name"], spec.get("match"))) > 0
        return spec["points"] if hit else 0
    if kind == "prop_match_each":
        earned = 0
        for uid, prop, value in spec["pairs"]:
            if uid in world.objects and world.objects[uid].prop(prop) == value:
                earned += spec.get("points_each", 1)
        return earned
    if kind == "predicate_points":
        return spec["points"] if eval_predicate(world, agent, spec["pred"]) else 0
    if kind == "npc_received_count":
        npc = world.objects.get(spec["npc_uid"])
        if npc is None:
            return 0
        subs = [s.lower() for s in spec["substrings"]]
        n = sum(
            1
            for uid in npc.contents
            if all(s in world.objects[uid].name.lower() for s in subs)
        )
        return min(n, spec["cap"]) * spec.get("points_each", 1)
    if kind == "grown_count":
        n = sum(
            1
            for uid in spec["plot_uids"]
            if uid in world.objects
            and any(
                world.objects[c].prop("growthStage") == 2
                for c in world.objects[uid].contents
                if c in world.objects
            )
        )
        return min(n, spec.get("cap", n)) * spec.get("points_each", 1)
    raise ValueError(f"unknown item detector kind: {kind}")


# ---------------------------------------------------------------------------
# scorecard lifecycle

def new_scorecard(task) -> dict:
    return {
        "task_id": task.task_id,
        "completion": 0,
        "items": [
            {
                "id": item["id"],
                "text": item["text"],
                "max_points": item["max_points"],
                "earned": 0,
                "state": {},
            }
            for item in task.scorecard_template
        ],
        "knowledge": [
            {
                "id": q["id"],
                "question": q["question"],
                "evaluation": None,
                "explanation": "",
            }
            for q in task.knowledge_questions
        ],
    }


def update_scorecard(task, world: WorldState, agent: AgentState, card: dict) -> dict:
    """Re-evaluate all detectors; earned points and completion are latched."""
    for item, tmpl in zip(card["items"], task.scorecard_template):
        now = eval_item(world, agent, tmpl["detector"], item["state"])
        item["earned"] = max(item["earned"], min(now, item["max_points"]))
    if not card["completion"] and eval_predicate(world, agent, task.completion):
        card["completion"] = 1
    return card


def normalize(card: dict) -> dict:
    total_max = sum(i["max_points"] for i in card["items"])
    total_earned = sum(i["earned"] for i in card["items"])
    procedure = (total_earned / total_max) if total_max else float(card["completion"])
    graded = [k["evaluation"] for k in card["knowledge"] if k["evaluation"] is not None]
    if card["knowledge"] and graded:
        knowledge: Optional[float] = sum(graded) / len(graded)
    else:
        knowledge = None
    return {
        "procedure": procedure,
        "completion": float(card["completion"]),
        "knowledge": knowledge,
        "ungraded": sum(1 for k in card["knowledge"] if k["evaluation"] is None),
    }


# ---------------------------------------------------------------------------
# knowledge grading

PROMPT_TEMPLATE = """Your task is to evaluate the knowledge of an agent playing a game about
scientific discovery, to see if they have figured out the discovery
required to solve the task. I will supply you with: (1) the task
description, (2) the agent's knowledge, and (3) a single critical question
about the discovery, that you should answer with either true (1) or
false (0).

Task Description:
```
[*INSERT TASK DESCRIPTION HERE*]
```

Agent's Knowledge:
```
[*INSERT AGENT'S KNOWLEDGE HERE*]
```

Critical Question:
```
[*INSERT SINGLE KNOWLEDGE EVALUATION QUESTION HERE FROM SCORECARD*]
```

Please answer this question by responding `1` if the agent's knowledege
reflects having discovered the information in the critical question, and
`0` otherwise.  This response should be in the `evaluation` key of the
response. The response format is a JSON dictionary containing three keys:
`criticalQuestion`, `evaluation`, and `explanation`.
```
{
    "criticalQuestion": "repeat the critical question",
    "evaluation": 0 or 1 (as integers),
    "explanation": "provide a brief explanation for evaluation, making
       reference to the agent's knowledge and whether or not it reflects
       the critical question."
}
```"""


def build_grader_prompt(task_description: str, knowledge_text: str, question: str) -> str:
    prompt = PROMPT_TEMPLATE.replace("[*INSERT TASK DESCRIPTION HERE*]", task_description)
    prompt = prompt.replace("[*INSERT AGENT'S KNOWLEDGE HERE*]", knowledge_text)
    prompt = prompt.replace(
        "[*INSERT SINGLE KNOWLEDGE EVALUATION QUESTION HERE FROM SCORECARD*]", question
    )
    return prompt


class RubricGrader:
    """Deterministic grader: every rubric pattern must match the knowledge."""

    name = "rubric"

    def grade(self, task, knowledge_text: str) -> list[dict]:
        verdicts = []
        for q in task.knowledge_questions:
            missing = [
                pat
                for pat in q["rubric"]
                if not re.search(pat, knowledge_text, re.IGNORECASE | re.DOTALL)
            ]
            ok = not missing and bool(knowledge_text.strip())
            if ok:
                explanation = "The knowledge matches every rubric pattern for this question."
            else:
                explanation = (
                    "The knowledge does not establish the discovery; unmatched patterns: "
                    + "; ".join(missing)
                    if missing
                    else "The knowledge text is empty."
                )
            verdicts.append({
                "criticalQuestion": q["question"],
                "evaluation": 1 if ok else 0,
                "explanation": explanation,
            })
        return verdicts


class RemoteGrader:
    """Chat-completion grader against a configurable HTTP endpoint.

    Request/response bodies are kept on self.audit for logging. Transport
    failures degrade to ungraded verdicts, never exceptions.
    """

    name = "remote"

    def __init__(self, config: dict, transport=None):
        self.url = config["url"]
        self.model = config.get("model", "grader")
        self.api_key = config.get("api_key", "")
        self.audit: list[dict] = []
        self._transport = transport or self._http_post

    def _http_post(self, url: str, body: dict) -> dict:
        import httpx

        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        resp = httpx.post(url, json=body, headers=headers, timeout=60.0)
        resp.raise_for_status()
        return resp.json()

    def grade(self, task, knowledge_text: str) -> list[dict]:
        verdicts = []
        for q in task.knowledge_questions:
            prompt = build_grader_prompt(task.description, knowledge_text, q["question"])
            verdict = self._grade_one(prompt, q["question"])
            verdicts.append(verdict)
        return verdicts

    def _grade_one(self, prompt: str, question: str) -> dict:
        body = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": 0,
        }
        last_error = ""
        for _ in range(2):  # one retry on malformed replies
            try:
                resp = self._transport(self.url, body)
            except Exception as exc:
                last_error = f"REMOTE_UNAVAILABLE: {exc}"
                continue
            self.audit.append({"request": body, "response": resp})
            try:
                content = resp["choices"][0]["message"]["content"]
                parsed = _parse_verdict_json(content)
                evaluation = int(parsed["evaluation"])
                if evaluation not in (0, 1):
                    raise ValueError(f"evaluation out of range: {evaluation}")
                return {
                    "criticalQuestion": question,
                    "evaluation": evaluation,
                    "explanation": str(parsed.get("explanation", "")),
                }
            except Exception as exc:
                last_error = f"PARSE_FAILURE: {exc}"
        return {"criticalQuestion": question, "evaluation": None, "explanation": last_error}


def _parse_verdict_json(content: str) -> dict:
    text = content.strip()
    if text.startswith("```"):
        # strip markdown fences, tolerant of a language tag
        lines = text.splitlines()
        lines = [ln for ln in lines if not ln.strip().startswith("```")]
        text = "\n".join(lines)
    start = text.find("{")
    end = text.rfind("}")
    if start == -1 or end == -1:
        raise ValueError("no JSON object in reply")
    return json.loads(text[start : end + 1])


def apply_verdicts(card: dict, verdicts: list[dict]) -> dict:
    for entry, verdict in zip(card["knowledge"], verdicts):
        entry["evaluation"] = verdict["evaluation"]
        entry["explanation"] = verdict["explanation"]
    return card


def export_scorecard(card: dict) -> dict:
    """Scorecard export mirroring the published report-card structure."""
    norm = normalize(card)
    graded = [k["evaluation"] for k in card["knowledge"] if k["evaluation"] is not None]
    return {
        "task_id": card["task_id"],
        "completion": card["completion"],
        "procedural": [
            {
                "id": i["id"],
                "text": i["text"],
                "earned": i["earned"],
                "max_points": i["max_points"],
            }
            for i in card["items"]
        ],
        "procedural_total": {
            "earned": sum(i["earned"] for i in card["items"]),
            "max_points": sum(i["max_points"] for i in card["items"]),
        },
        "evaluation": [
            {
                "criticalQuestion": k["question"],
                "evaluation": k["evaluation"],
                "explanation": k["explanation"],
            }
            for k in card["knowledge"]
        ],
        "evaluation_totalscore_raw": sum(graded) if graded else 0,
        "evaluation_totalscore": norm["knowledge"],
        "normalized": norm,
    }
