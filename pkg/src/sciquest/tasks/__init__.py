"""Task registry: theme modules, id scheme, benchmark listing and splits.

A task id is "theme/difficulty/seed". Generation is pure in that triple:
secrets come from the task's "secrets" stream, the world build from its
"world" stream, so regenerating an instance reproduces every uid.
"""

from __future__ import annotations

from ..rng import stream_for_task
from ..world import WorldState
from . import (
    archaeology,
    chemistry,
    plants,
    proteomics,
    reactor,
    rocket,
    spacesick,
    translation,
    unittests,
)
from .base import TaskInstance
from .unittests import UNIT_TEST_THEMES

THEMES = [
    "proteomics",
    "chemistry",
    "archaeology",
    "reactor",
    "plants",
    "spacesick",
    "rocket",
    "translation",
]
DIFFICULTIES = ["easy", "normal", "challenge"]
SEEDS = list(range(5))

EASY_STEP_CAP = 100
HARD_STEP_CAP = 1000

_MODULES = {
    "proteomics": proteomics,
    "chemistry": chemistry,
    "archaeology": archaeology,
    "reactor": reactor,
    "plants": plants,
    "spacesick": spacesick,
    "rocket": rocket,
    "translation": translation,
}
for _ut in UNIT_TEST_THEMES:
    _MODULES[_ut] = unittests

# themes whose worlds evolve on their own each tick
TICK_HOOKS = {"plants": plants.on_tick}


def generate_task(theme: str, difficulty: str, seed: int) -> TaskInstance:
    if theme not in THEMES:
        raise ValueError(f"UNKNOWN_THEME: {theme!r}")
    if difficulty not in DIFFICULTIES:
        raise ValueError(f"BAD_DIFFICULTY: {difficulty!r}")
    if seed < 0:
        raise ValueError(f"BAD_SEED: {seed!r}")
    step_cap = EASY_STEP_CAP if difficulty == "easy" else HARD_STEP_CAP
    return _generate(theme, difficulty, int(seed), step_cap)


def generate_unit_test(ut_theme: str, seed: int) -> TaskInstance:
    if ut_theme not in UNIT_TEST_THEMES:
        raise ValueError(f"UNKNOWN_THEME: {ut_theme!r}")
    if seed < 0:
        raise ValueError(f"BAD_SEED: {seed!r}")
    return _generate(ut_theme, "unittest", int(seed), EASY_STEP_CAP)


def _generate(theme: str, difficulty: str, seed: int, step_cap: int) -> TaskInstance:
    module = _MODULES[theme]
    task = TaskInstance(
        task_id=f"{theme}/{difficulty}/{seed}",
        theme=theme,
        difficulty=difficulty,
        seed=seed,
        step_cap=step_cap,
    )
    rng = stream_for_task(theme, difficulty, seed).child("secrets")
    task.secrets = module.gen_secrets(task, rng)
    _, refs = module.build(task)
    task.refs = refs
    module.finalize(task, refs)
    return task


def generate(task_id: str) -> TaskInstance:
    """Build the TaskInstance for a "theme/difficulty/seed" id."""
    parts = task_id.split("/")
    if len(parts) != 3 or not parts[2].isdigit():
        raise ValueError(f"BAD_TASK_ID: {task_id!r}")
    theme, difficulty, seed = parts[0], parts[1], int(parts[2])
    if difficulty == "unittest":
        return generate_unit_test(theme, seed)
    return generate_task(theme, difficulty, seed)


def create_world(task: TaskInstance) -> WorldState:
    """Deterministically rebuild the task's starting world."""
    world, _ = _MODULES[task.theme].build(task)
    return world


def theme_tick(task: TaskInstance, world: WorldState) -> None:
    hook = TICK_HOOKS.get(task.theme)
    if hook is not None:
        hook(task, world)


# ---------------------------------------------------------------------------
# benchmark listing and split presets

def discovery_ids() -> list[str]:
    return [f"{t}/{d}/{s}" for t in THEMES for d in DIFFICULTIES for s in SEEDS]


def unit_test_ids() -> list[str]:
    return [f"{t}/unittest/{s}" for t in UNIT_TEST_THEMES for s in SEEDS]


def task_number(theme: str, difficulty: str) -> int:
    """1-based template number, theme-major then difficulty (1..24)."""
    return THEMES.index(theme) * 3 + DIFFICULTIES.index(difficulty) + 1


def split(name: str) -> dict:
    """Train/dev/test id lists for one evaluation preset."""
    ids = discovery_ids()
    if name == "zeroshot":
        return {"train": [], "dev": [], "test": list(ids)}
    if name == "single":
        by_seed = lambda seeds: [i for i in ids if int(i.rsplit("/", 1)[1]) in seeds]
        return {
            "train": by_seed({0, 1}),
            "dev": by_seed({2}),
            "test": by_seed({3, 4}),
        }
    if name == "multi":
        def by_numbers(lo: int, hi: int) -> list[str]:
            out = []
            for i in ids:
                theme, difficulty, _ = i.split("/")
                if lo <= task_number(theme, difficulty) <= hi:
                    out.append(i)
            return out
        return {
            "train": by_numbers(1, 6),
            "dev": by_numbers(7, 12),
            "test": by_numbers(13, 24),
        }
    if name == "curriculum":
        # easiest first within each theme; competency tasks join the train pool
        train = [f"{t}/{d}/{s}" for t in THEMES for d in DIFFICULTIES for s in SEEDS]
        return {
            "train": unit_test_ids() + train,
            "dev": [],
            "test": list(ids),
        }
    raise ValueError(f"UNKNOWN_SPLIT: {name!r}")


SPLIT_NAMES = ["zeroshot", "single", "multi", "curriculum"]


def list_benchmark() -> dict:
    return {
        "discovery": discovery_ids(),
        "unit_tests": unit_test_ids(),
        "splits": {name: split(name) for name in SPLIT_NAMES},
    }
