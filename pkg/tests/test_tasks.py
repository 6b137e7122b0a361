"""Task registry tests: ids, determinism, scorecard shapes, splits."""

import pytest

from sciquest import tasks
from sciquest.canon import canonical_dumps


# ---------------------------------------------------------------------------
# cardinality and ids

def test_benchmark_cardinality():
    assert len(tasks.discovery_ids()) == 120
    assert len(tasks.unit_test_ids()) == 50
    assert len(set(tasks.discovery_ids()) | set(tasks.unit_test_ids())) == 170


def test_list_benchmark_payload():
    listing = tasks.list_benchmark()
    assert listing["discovery"] == tasks.discovery_ids()
    assert listing["unit_tests"] == tasks.unit_test_ids()
    assert sorted(listing["splits"]) == sorted(tasks.SPLIT_NAMES)


def test_id_grid_covers_all_cells():
    ids = tasks.discovery_ids()
    assert len(tasks.THEMES) == 8
    assert tasks.DIFFICULTIES == ["easy", "normal", "challenge"]
    for theme in tasks.THEMES:
        for diff in tasks.DIFFICULTIES:
            for seed in range(5):
                assert f"{theme}/{diff}/{seed}" in ids


def test_generate_parses_ids():
    t = tasks.generate("plants/challenge/3")
    assert (t.theme, t.difficulty, t.seed) == ("plants", "challenge", 3)
    ut = tasks.generate("doors/unittest/2")
    assert (ut.theme, ut.difficulty, ut.seed) == ("doors", "unittest", 2)


@pytest.mark.parametrize("bad,code", [
    ("reactor/normal", "BAD_TASK_ID"),
    ("reactor/normal/x", "BAD_TASK_ID"),
    ("botany/easy/0", "UNKNOWN_THEME"),
    ("reactor/brutal/0", "BAD_DIFFICULTY"),
    ("nosuch/unittest/0", "UNKNOWN_THEME"),
])
def test_generate_rejects_bad_ids(bad, code):
    with pytest.raises(ValueError, match=code):
        tasks.generate(bad)


def test_negative_seed_rejected():
    with pytest.raises(ValueError, match="BAD_SEED"):
        tasks.generate_task("reactor", "easy", -1)


def test_step_caps():
    assert tasks.generate("archaeology/easy/0").step_cap == 100
    assert tasks.generate("archaeology/normal/0").step_cap == 1000
    assert tasks.generate("archaeology/challenge/0").step_cap == 1000
    assert tasks.generate("search/unittest/0").step_cap == 100


# ---------------------------------------------------------------------------
# determinism

SAMPLE_IDS = [
    "proteomics/easy/0", "chemistry/normal/1", "archaeology/challenge/2",
    "reactor/normal/0", "plants/easy/3", "spacesick/challenge/4",
    "rocket/normal/2", "translation/challenge/0",
    "dialog/unittest/0", "keys/unittest/4", "movingagent/unittest/1",
]


@pytest.mark.parametrize("task_id", SAMPLE_IDS)
def test_double_generation_byte_identical(task_id):
    a = tasks.generate(task_id)
    b = tasks.generate(task_id)
    assert canonical_dumps(a.to_doc()) == canonical_dumps(b.to_doc())


@pytest.mark.parametrize("task_id", SAMPLE_IDS)
def test_world_rebuild_byte_identical(task_id):
    task = tasks.generate(task_id)
    w1 = tasks.create_world(task)
    w2 = tasks.create_world(task)
    assert w1.canonical() == w2.canonical()


def test_seeds_differ():
    docs = {canonical_dumps(tasks.generate(f"reactor/normal/{s}").to_doc())
            for s in range(5)}
    assert len(docs) == 5, "different seeds must give different instances"


def test_task_doc_roundtrip_and_redaction():
    task = tasks.generate("translation/challenge/1")
    doc = task.to_doc()
    again = tasks.TaskInstance.from_doc(doc)
    assert canonical_dumps(again.to_doc()) == canonical_dumps(doc)
    public = task.to_doc(redact_secrets=True)
    assert public["secrets"] == {} and public["refs"] == {}
    assert public["description"] == task.description


# ---------------------------------------------------------------------------
# instance content

ALL_IDS = tasks.discovery_ids() + tasks.unit_test_ids()


def test_every_instance_is_well_formed():
    for task_id in ALL_IDS:
        task = tasks.generate(task_id)
        assert task.description.strip(), task_id
        assert task.completion, f"{task_id} lacks a completion predicate"
        assert isinstance(task.scorecard_template, list)
        for item in task.scorecard_template:
            assert set(item) == {"id", "text", "max_points", "detector"}, task_id
            assert item["max_points"] > 0
        for q in task.knowledge_questions:
            assert set(q) == {"id", "question", "rubric"}, task_id
            assert q["rubric"], "every question carries a checkable rubric"
        assert "player" in task.refs, task_id


def test_every_discovery_task_has_knowledge_questions():
    for task_id in tasks.discovery_ids():
        task = tasks.generate(task_id)
        assert len(task.knowledge_questions) >= 1, task_id


def test_reactor_normal_scorecard_shape():
    task = tasks.generate("reactor/normal/0")
    items = task.scorecard_template
    assert [i["id"] for i in items] == ["P1", "P2", "P3", "P4", "P5", "P6"]
    assert sum(i["max_points"] for i in items) == 25
    assert len(task.knowledge_questions) == 2


@pytest.mark.parametrize("seed", range(5))
def test_reactor_normal_shape_all_seeds(seed):
    task = tasks.generate(f"reactor/normal/{seed}")
    assert sum(i["max_points"] for i in task.scorecard_template) == 25
    assert len(task.scorecard_template) == 6
    assert len(task.knowledge_questions) == 2


def test_worlds_start_with_player_agent():
    for task_id in SAMPLE_IDS:
        task = tasks.generate(task_id)
        world = tasks.create_world(task)
        assert world.agents, task_id
        assert world.agents[0].uid == task.refs["player"]
        assert world.tick == 0
        body = world.agent_body(world.agents[0])
        assert body.prop("isAgent") and not body.prop("isNPC")


def test_task_number_layout():
    assert tasks.task_number("proteomics", "easy") == 1
    assert tasks.task_number("proteomics", "challenge") == 3
    assert tasks.task_number("chemistry", "easy") == 4
    assert tasks.task_number("translation", "challenge") == 24


# ---------------------------------------------------------------------------
# theme tick hooks

def test_theme_tick_only_moves_ticking_themes():
    plants = tasks.generate("plants/easy/0")
    world = tasks.create_world(plants)
    before = world.hash()
    tasks.theme_tick(plants, world)  # no seeds planted: still a no-op state-wise
    assert world.hash() == before

    static = tasks.generate("rocket/easy/0")
    world = tasks.create_world(static)
    before = world.hash()
    tasks.theme_tick(static, world)
    assert world.hash() == before


def test_plants_growth_cycle_via_tick():
    task = tasks.generate("plants/easy/0")
    world = tasks.create_world(task)
    planter_uid = task.refs["planters"][0]
    seed_uid = task.refs["seeds"][0]
    world.attach(seed_uid, ("obj", planter_uid))
    for _ in range(4):
        world.tick += 1
        tasks.theme_tick(task, world)
    stages = {e["kind"] for e in world.events}
    assert "seed_planted" in stages
    assert stages & {"plant_grown", "seed_withered"}, "growth resolves either way"


# ---------------------------------------------------------------------------
# contamination consequences inside a built world

def test_spacesick_world_illness_rules():
    task = tasks.generate("spacesick/normal/0")
    secrets = task.secrets["contamination"]
    bad_names = {f["name"] for f in secrets["foods"] if f["contaminated"]}
    clean_names = {f["name"] for f in secrets["foods"] if not f["contaminated"]}

    from sciquest.actions import execute

    # eating raw contaminated food causes illness
    world = tasks.create_world(task)
    agent = world.agents[0]
    bad = world.find_by_name(sorted(bad_names)[0])
    world.attach(bad.uid, ("obj", agent.uid))
    execute(world, agent, {"action": "EAT", "arg1": bad.uid})
    assert world.agent_body(agent).prop("isIll")

    # eating clean food does not
    world = tasks.create_world(task)
    agent = world.agents[0]
    clean = world.find_by_name(sorted(clean_names)[0])
    world.attach(clean.uid, ("obj", agent.uid))
    execute(world, agent, {"action": "EAT", "arg1": clean.uid})
    assert not world.agent_body(agent).prop("isIll")

    # cooking a contaminated food neutralizes it
    world = tasks.create_world(task)
    agent = world.agents[0]
    bad = world.find_by_name(sorted(bad_names)[0])
    oven = world.objects[task.refs["oven"]]
    world.attach(bad.uid, ("obj", oven.uid))
    agent.observed.add(oven.uid)
    assert execute(world, agent, {"action": "TELEPORT_OBJECT", "arg1": oven.uid})["success"]
    assert execute(world, agent, {"action": "ACTIVATE", "arg1": oven.uid})["success"]
    assert bad.prop("isCooked")
    world.attach(bad.uid, ("obj", agent.uid))
    assert execute(world, agent, {"action": "EAT", "arg1": bad.uid})["success"]
    assert not world.agent_body(agent).prop("isIll")


# ---------------------------------------------------------------------------
# splits

def test_zeroshot_split():
    s = tasks.split("zeroshot")
    assert s["train"] == [] and s["dev"] == []
    assert s["test"] == tasks.discovery_ids()


def test_single_split_partitions_by_seed():
    s = tasks.split("single")
    assert len(s["train"]) == 48 and len(s["dev"]) == 24 and len(s["test"]) == 48
    assert all(int(i.rsplit("/", 1)[1]) in (0, 1) for i in s["train"])
    assert all(int(i.rsplit("/", 1)[1]) == 2 for i in s["dev"])
    assert all(int(i.rsplit("/", 1)[1]) in (3, 4) for i in s["test"])


def test_multi_split_partitions_by_template():
    s = tasks.split("multi")
    assert len(s["train"]) == 30 and len(s["dev"]) == 30 and len(s["test"]) == 60
    assert set(s["train"]) | set(s["dev"]) | set(s["test"]) == set(tasks.discovery_ids())
    assert not set(s["train"]) & set(s["test"])


def test_curriculum_split_includes_unit_tests_first():
    s = tasks.split("curriculum")
    assert s["train"][:50] == tasks.unit_test_ids()
    assert s["test"] == tasks.discovery_ids()


def test_unknown_split_rejected():
    with pytest.raises(ValueError, match="UNKNOWN_SPLIT"):
        tasks.split("lightning")
