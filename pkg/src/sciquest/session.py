"""Session lifecycle: start a task, run the step loop, log, replay.

A session owns one task instance and one world. Every accepted step runs
the same pipeline (execute action, tick NPCs, run the theme tick hook,
re-score, mark newly seen objects) and appends one log record, so the
log length always equals the world tick and a log file replays to the
exact same state hashes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

from . import ENGINE_VERSION, tasks
from .actions import FEED_WINDOW, REACH_RADIUS, execute, normalize_request, valid_actions
from .canon import state_hash
from .observe import encode_observation, mark_observed, render_tile_frame
from .scoring import new_scorecard, normalize, update_scorecard
from .tasks.base import TaskInstance
from .world import AgentState, WorldState

GRADER_CHOICES = ("rubric", "remote", "none")

DEFAULT_CONFIG = {
    "grader": "rubric",
    "radius": REACH_RADIUS,
    "feed_window": FEED_WINDOW,
}


def resolve_config(config: Optional[dict] = None) -> dict:
    """Merge a partial config over defaults; reject unknown keys and junk."""
    merged = dict(DEFAULT_CONFIG)
    for key, value in (config or {}).items():
        if key not in DEFAULT_CONFIG:
            raise ValueError(f"BAD_CONFIG: unknown key {key!r}")
        merged[key] = value
    if merged["grader"] not in GRADER_CHOICES:
        raise ValueError(f"BAD_CONFIG: grader must be one of {GRADER_CHOICES}")
    for key in ("radius", "feed_window"):
        if not isinstance(merged[key], int) or merged[key] < 0:
            raise ValueError(f"BAD_CONFIG: {key} must be a non-negative int")
    return merged


@dataclass
class Session:
    task: TaskInstance
    world: WorldState
    agent: AgentState
    scorecard: dict
    config: dict
    log: list[dict] = field(default_factory=list)
    status: str = "running"  # running | completed | step_capped | aborted

    @property
    def done(self) -> bool:
        return self.status != "running"


def start(task_id: str, config: Optional[dict] = None) -> Session:
    cfg = resolve_config(config)
    task = tasks.generate(task_id)
    world = tasks.create_world(task)
    if not world.agents:
        raise ValueError(f"BAD_TASK_ID: {task_id!r} built a world with no player")
    agent = world.agents[0]
    session = Session(
        task=task,
        world=world,
        agent=agent,
        scorecard=new_scorecard(task),
        config=cfg,
    )
    update_scorecard(task, world, agent, session.scorecard)
    mark_observed(world, agent, cfg["radius"])
    return session


def observation(session: Session) -> dict:
    return encode_observation(
        session.world,
        session.agent,
        session.task.description,
        bool(session.scorecard["completion"]),
        radius=session.config["radius"],
        feed_window=session.config["feed_window"],
    )


def tile_frame(session: Session) -> dict:
    return render_tile_frame(session.world, session.agent)


def valid_requests(session: Session) -> list[dict]:
    return valid_actions(session.world, session.agent)


def score_snapshot(card: dict) -> dict:
    """Compact per-step score state; enough for exact replay comparison."""
    return {
        "completion": card["completion"],
        "earned": [item["earned"] for item in card["items"]],
        "normalized": normalize(card),
    }


def step(session: Session, req: dict) -> dict:
    """Run one action through the full pipeline. Returns the post-action view."""
    if session.status != "running":
        raise ValueError(f"SESSION_TERMINAL: session is {session.status}")
    if not isinstance(req, dict):
        req = {"action": req}
    req = normalize_request(req)

    obs_before = observation(session)
    result = execute(session.world, session.agent, req)
    session.world.tick_npcs()
    tasks.theme_tick(session.task, session.world)
    update_scorecard(session.task, session.world, session.agent, session.scorecard)
    mark_observed(session.world, session.agent, session.config["radius"])

    snapshot = score_snapshot(session.scorecard)
    session.log.append(
        {
            "tick": session.world.tick - 1,
            "observation": obs_before,
            "request": req,
            "result": result,
            "score": snapshot,
            "state_hash": state_hash(session.world.serialize()),
        }
    )

    if session.scorecard["completion"]:
        session.status = "completed"
    elif session.world.tick >= session.task.step_cap:
        session.status = "step_capped"

    return {
        "observation": observation(session),
        "result": result,
        "score": snapshot,
        "done": session.done,
    }


def abort(session: Session) -> None:
    """Terminal status for UI disconnects, distinct from cap exhaustion."""
    if session.status == "running":
        session.status = "aborted"


# ---------------------------------------------------------------------------
# structured logs + replay

def log_header(session: Session) -> dict:
    return {
        "engine_version": ENGINE_VERSION,
        "task_id": session.task.task_id,
        "config": session.config,
    }


def write_log(session: Session, path: str) -> None:
    """JSON-lines: one header record, then one record per accepted step."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(log_header(session)) + "\n")
        for record in session.log:
            fh.write(json.dumps(record) + "\n")


def read_log(path: str) -> tuple[dict, list[dict]]:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line for line in fh if line.strip()]
    if not lines:
        raise ValueError("BAD_LOG: empty file")
    header = json.loads(lines[0])
    records = [json.loads(line) for line in lines[1:]]
    return header, records


def replay(log_file: str) -> dict:
    """Re-execute a logged run from scratch and return the final scorecard.

    Raises VERSION_MISMATCH when the log came from a different engine
    version and DIVERGENCE the first time a replayed state hash or score
    snapshot differs from the logged one. A truncated log simply yields
    the scorecard at the truncation point.
    """
    header, records = read_log(log_file)
    logged_version = header.get("engine_version")
    if logged_version != ENGINE_VERSION:
        raise ValueError(
            f"VERSION_MISMATCH: log from {logged_version!r}, engine is {ENGINE_VERSION!r}"
        )
    session = start(header["task_id"], header.get("config"))
    for record in records:
        if session.status != "running":
            raise ValueError(
                f"DIVERGENCE: replay terminal ({session.status}) before tick {record['tick']}"
            )
        step(session, record["request"])
        fresh = session.log[-1]
        if fresh["state_hash"] != record["state_hash"]:
            raise ValueError(f"DIVERGENCE: state hash differs at tick {record['tick']}")
        if fresh["score"] != record["score"]:
            raise ValueError(f"DIVERGENCE: score differs at tick {record['tick']}")
    return session.scorecard


def run_policy(session: Session, requests: Iterable[dict], stop_when_done: bool = True) -> dict:
    """Feed a request sequence through step(); convenience for tests/CLI."""
    last: dict[str, Any] = {"done": session.done}
    for req in requests:
        if stop_when_done and session.done:
            break
        last = step(session, req)
    return last
