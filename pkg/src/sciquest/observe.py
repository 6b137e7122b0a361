"""Structured per-step observations and the logical tile frame.

Both encoders are pure: they read the world and return plain JSON-able
dicts. Marking objects as observed (which gates TELEPORT_OBJECT) is the
session's job, via mark_observed, so encoding stays side-effect free.
"""

from __future__ import annotations

from .actions import FEED_WINDOW, REACH_RADIUS, dialog_options
from .world import DIRECTIONS, FACINGS, AgentState, WorldState

FRAME_W = 24
FRAME_H = 16
FRAME_CX = FRAME_W // 2
FRAME_CY = FRAME_H // 2


def encode_observation(
    world: WorldState,
    agent: AgentState,
    task_description: str,
    completed: bool,
    radius: int = REACH_RADIUS,
    feed_window: int = FEED_WINDOW,
) -> dict:
    accessible = world.enumerate_accessible(agent, radius)
    inv_uids = set(_inventory_subtree(world, agent))
    body = world.agent_body(agent)

    nearby = []
    for uid in accessible:
        if uid in inv_uids:
            continue
        obj = world.objects[uid]
        nearby.append({"uid": uid, "name": obj.name, "description": obj.description})

    inventory = [
        {"uid": uid, "name": world.objects[uid].name} for uid in body.contents
    ]

    pos = world.object_tile(agent.uid)
    ax, ay = pos if pos else (-1, -1)
    interactable = []
    for uid in accessible:
        if uid in inv_uids:
            interactable.append(uid)
            continue
        tile = world.object_tile(uid)
        if tile and max(abs(tile[0] - ax), abs(tile[1] - ay)) <= 1:
            interactable.append(uid)

    open_dirs = []
    for d in FACINGS:
        dx, dy = DIRECTIONS[d]
        nx, ny = ax + dx, ay + dy
        if 0 <= nx < world.width and 0 <= ny < world.height and world.is_tile_passable(nx, ny):
            open_dirs.append(d)

    dialog = None
    if agent.dialog is not None:
        dialog = {
            "npc": agent.dialog["npc"],
            "options": dialog_options(world, agent),
        }

    return {
        "nearby_objects": nearby,
        "inventory": inventory,
        "interactable": interactable,
        "location": {"x": ax, "y": ay, "facing": agent.facing, "open_directions": open_dirs},
        "dialog": dialog,
        "task": {"description": task_description, "completed": bool(completed)},
        "feed_recent": list(world.feed[-feed_window:]),
        "tick": world.tick,
    }


def _inventory_subtree(world: WorldState, agent: AgentState) -> list[int]:
    out: list[int] = []
    stack = list(world.agent_body(agent).contents)
    while stack:
        uid = stack.pop()
        out.append(uid)
        stack.extend(world.objects[uid].contents)
    return out


def mark_observed(world: WorldState, agent: AgentState, radius: int = REACH_RADIUS) -> None:
    """Record currently accessible uids for TELEPORT_OBJECT eligibility."""
    agent.observed.update(world.enumerate_accessible(agent, radius))


def _marker_for(world: WorldState, uid: int) -> str:
    obj = world.objects[uid]
    p = obj.properties
    if p["isAgent"]:
        return "npc" if p["isNPC"] else "agent"
    if p["isPassage"]:
        return "passage"
    if p["isContainer"]:
        return "container"
    if p["isActivatable"] or p["isUsable"]:
        return "device"
    if p["isReadable"]:
        return "sign"
    if p["isLiving"]:
        return "creature"
    return "item"


def render_tile_frame(world: WorldState, agent: AgentState) -> dict:
    """24x16 window of cell descriptors centered on the agent.

    Each cell shows the terrain kind and the top object of its stack (the
    only one a top-down view would show); cells outside the map are void.
    """
    pos = world.object_tile(agent.uid)
    ax, ay = pos if pos else (0, 0)
    rows = []
    for fy in range(FRAME_H):
        row = []
        for fx in range(FRAME_W):
            wx = ax + (fx - FRAME_CX)
            wy = ay + (fy - FRAME_CY)
            if not (0 <= wx < world.width and 0 <= wy < world.height):
                row.append({"void": True})
                continue
            cell: dict = {"terrain": world.terrain_at(wx, wy)}
            stack = world.stack(wx, wy)
            if stack:
                top = stack[-1]
                cell["uid"] = top
                cell["name"] = world.objects[top].name
                cell["marker"] = _marker_for(world, top)
            row.append(cell)
        rows.append(row)
    return {
        "width": FRAME_W,
        "height": FRAME_H,
        "center": {"x": ax, "y": ay, "facing": agent.facing},
        "cells": rows,
    }
