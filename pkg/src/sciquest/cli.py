"""Operator entry points: gen, run, bench, serve, replay, grade.

Every subcommand only reads and writes files; world state lives and dies
inside the process, so rerunning a command is always safe.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import json
import os
import sys
from typing import Any, Optional

from . import agents, server, session as sess, tasks
from .scoring import (
    RemoteGrader,
    RubricGrader,
    apply_verdicts,
    export_scorecard,
    normalize,
)

AGENT_CHOICES = ("random", "scripted", "react", "planexec", "hypothesizer")

ENV_OVERRIDES = {
    "SCIQUEST_LLM_URL": ("llm", "url"),
    "SCIQUEST_LLM_MODEL": ("llm", "model"),
    "SCIQUEST_LLM_API_KEY": ("llm", "api_key"),
    "SCIQUEST_GRADER_URL": ("grader", "url"),
    "SCIQUEST_GRADER_MODEL": ("grader", "model"),
    "SCIQUEST_GRADER_API_KEY": ("grader", "api_key"),
}


def load_config(path: Optional[str] = None) -> dict:
    """JSON config file with environment overrides for the secret-ish bits."""
    config: dict[str, Any] = {"llm": {}, "grader": {}, "session": {}}
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        for key in config:
            if key in loaded:
                config[key].update(loaded[key])
    for env, (section, key) in ENV_OVERRIDES.items():
        if os.environ.get(env):
            config[section][key] = os.environ[env]
    return config


def _make_client(config: dict):
    llm = config.get("llm") or {}
    if llm.get("url"):
        return agents.HttpLLMClient(
            llm["url"], llm.get("model", "model"), llm.get("api_key", "")
        )
    return agents.MockLLMClient()


def _make_grader(name: str, config: dict):
    if name == "rubric":
        return RubricGrader()
    if name == "remote":
        grader_cfg = config.get("grader") or {}
        if not grader_cfg.get("url"):
            raise SystemExit("grade: remote grader needs grader.url in config")
        return RemoteGrader(grader_cfg)
    raise SystemExit(f"grade: unknown grader {name!r}")


def _run_episode(task_id: str, agent_name: str, config: dict, agent_seed: int = 0) -> dict:
    session = sess.start(task_id, config.get("session") or None)
    if agent_name == "random":
        episode = agents.run_random_episode(session, seed=agent_seed)
    elif agent_name == "scripted":
        episode = agents.scripted_solver(session)
    elif agent_name == "react":
        episode = agents.run_react_episode(session, _make_client(config))
    elif agent_name == "planexec":
        episode = agents.run_plan_execute_episode(session, _make_client(config))
    elif agent_name == "hypothesizer":
        episode = agents.run_hypothesizer_episode(session, _make_client(config))
    else:
        raise SystemExit(f"unknown agent {agent_name!r}")
    episode["session"] = session
    return episode


def _grade_episode(episode: dict, config: dict) -> None:
    session = episode["session"]
    if session.task.knowledge_questions:
        grader = RubricGrader()
        verdicts = grader.grade(session.task, episode.get("knowledge", ""))
        apply_verdicts(session.scorecard, verdicts)
        episode["normalized"] = normalize(session.scorecard)


def _row(episode: dict) -> dict:
    task = episode["session"].task
    norm = episode["normalized"]
    return {
        "task_id": episode["task_id"],
        "theme": task.theme,
        "difficulty": task.difficulty,
        "seed": task.seed,
        "status": episode["status"],
        "steps": episode["steps"],
        "completion": norm["completion"],
        "procedure": round(norm["procedure"], 4),
        "knowledge": "" if norm["knowledge"] is None else round(norm["knowledge"], 4),
        "llm_calls": episode.get("llm_calls", 0),
    }


# ---------------------------------------------------------------------------
# subcommands

def cmd_gen(args) -> int:
    task = tasks.generate(args.task_id)
    doc = task.to_doc(redact_secrets=not args.dump_secrets)
    out = args.out or args.task_id.replace("/", "_") + ".task.json"
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {out}")
    return 0


def cmd_run(args) -> int:
    config = load_config(args.config)
    episode = _run_episode(args.task_id, args.agent, config, agent_seed=args.agent_seed)
    _grade_episode(episode, config)
    session = episode.pop("session")

    stem = args.task_id.replace("/", "_")
    out_dir = args.out_dir or "."
    os.makedirs(out_dir, exist_ok=True)
    log_path = os.path.join(out_dir, f"{stem}.log.jsonl")
    card_path = os.path.join(out_dir, f"{stem}.scorecard.json")
    sess.write_log(session, log_path)
    with open(card_path, "w", encoding="utf-8") as fh:
        json.dump(export_scorecard(session.scorecard), fh, indent=2)
        fh.write("\n")

    norm = episode["normalized"]
    knowledge = "-" if norm["knowledge"] is None else f"{norm['knowledge']:.2f}"
    print(
        f"{args.task_id} {session.status} steps={episode['steps']} "
        f"completion={norm['completion']:.0f} procedure={norm['procedure']:.2f} "
        f"knowledge={knowledge}"
    )
    print(f"wrote {log_path}")
    print(f"wrote {card_path}")
    return 0


def _bench_one(task_id: str, agent_name: str, config: dict, agent_seed: int) -> dict:
    episode = _run_episode(task_id, agent_name, config, agent_seed=agent_seed)
    _grade_episode(episode, config)
    return _row(episode)


def _averages(rows: list[dict]) -> dict:
    cells: dict[str, list[dict]] = {}
    for row in rows:
        cells.setdefault(f"{row['theme']}/{row['difficulty']}", []).append(row)

    def avg(group: list[dict], field: str) -> Optional[float]:
        values = [r[field] for r in group if r[field] != ""]
        return round(sum(values) / len(values), 4) if values else None

    by_cell = {
        cell: {f: avg(group, f) for f in ("completion", "procedure", "knowledge")}
        for cell, group in sorted(cells.items())
    }
    by_difficulty: dict[str, dict] = {}
    for difficulty in sorted({r["difficulty"] for r in rows}):
        group = [r for r in rows if r["difficulty"] == difficulty]
        by_difficulty[difficulty] = {
            f: avg(group, f) for f in ("completion", "procedure", "knowledge")
        }
    return {"by_cell": by_cell, "by_difficulty": by_difficulty}


def cmd_bench(args) -> int:
    config = load_config(args.config)
    ids = tasks.split(args.split)[args.subset]
    if not ids:
        print(f"split {args.split!r} has no {args.subset!r} tasks")
        return 1
    os.makedirs(args.out_dir, exist_ok=True)
    csv_path = os.path.join(args.out_dir, "results.csv")
    json_path = os.path.join(args.out_dir, "results.json")

    fields = ["task_id", "theme", "difficulty", "seed", "status", "steps",
              "completion", "procedure", "knowledge", "llm_calls"]
    rows: list[dict] = []
    interrupted = False
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        try:
            if args.workers <= 1:
                for task_id in ids:
                    row = _bench_one(task_id, args.agent, config, args.agent_seed)
                    rows.append(row)
                    writer.writerow(row)
                    fh.flush()
            else:
                with concurrent.futures.ProcessPoolExecutor(args.workers) as pool:
                    futures = {
                        pool.submit(_bench_one, task_id, args.agent, config,
                                    args.agent_seed): task_id
                        for task_id in ids
                    }
                    for fut in concurrent.futures.as_completed(futures):
                        row = fut.result()
                        rows.append(row)
                        writer.writerow(row)
                        fh.flush()
        except KeyboardInterrupt:
            interrupted = True

    rows.sort(key=lambda r: ids.index(r["task_id"]))
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(
            {"split": args.split, "subset": args.subset, "agent": args.agent,
             "rows": rows, "averages": _averages(rows),
             "complete": not interrupted},
            fh, indent=2,
        )
        fh.write("\n")
    print(f"wrote {csv_path} ({len(rows)}/{len(ids)} rows)")
    print(f"wrote {json_path}")
    return 130 if interrupted else 0


def cmd_serve(args) -> int:
    server.serve(args.bind, log_dir=args.log_dir)
    return 0


def cmd_replay(args) -> int:
    try:
        card = sess.replay(args.log)
    except ValueError as exc:
        print(str(exc))
        return 1
    norm = normalize(card)
    print(f"scorecards match: completion={norm['completion']:.0f} "
          f"procedure={norm['procedure']:.2f}")
    return 0


def cmd_grade(args) -> int:
    config = load_config(args.config)
    header, records = sess.read_log(args.log)
    task = tasks.generate(header["task_id"])

    from .scoring import new_scorecard

    card = new_scorecard(task)
    if records:
        last = records[-1]["score"]
        card["completion"] = last["completion"]
        for item, earned in zip(card["items"], last["earned"]):
            item["earned"] = earned

    pieces = [r["request"].get("thought", "") for r in records]
    if args.notes:
        with open(args.notes, "r", encoding="utf-8") as fh:
            pieces.append(fh.read())
    knowledge_text = "\n".join(p for p in pieces if p)

    grader = _make_grader(args.grader, config)
    verdicts = grader.grade(task, knowledge_text)
    apply_verdicts(card, verdicts)

    out = args.out or args.log.rsplit(".", 1)[0] + ".graded.json"
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(export_scorecard(card), fh, indent=2)
        fh.write("\n")
    norm = normalize(card)
    knowledge = "-" if norm["knowledge"] is None else f"{norm['knowledge']:.2f}"
    print(f"{header['task_id']} knowledge={knowledge} ungraded={norm['ungraded']}")
    print(f"wrote {out}")
    return 0


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sciquest",
        description="Tile-world discovery benchmark: generate, run, serve, score.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a task bundle")
    p.add_argument("task_id")
    p.add_argument("--dump-secrets", action="store_true",
                   help="include the hidden ground truth")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="run one episode")
    p.add_argument("task_id")
    p.add_argument("--agent", choices=AGENT_CHOICES, default="random")
    p.add_argument("--llm-config", dest="config", default=None)
    p.add_argument("--agent-seed", type=int, default=0)
    p.add_argument("-o", "--out-dir", default=None)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="run a benchmark split")
    p.add_argument("--split", choices=tasks.SPLIT_NAMES, required=True)
    p.add_argument("--subset", choices=("train", "dev", "test"), default="test")
    p.add_argument("--agent", choices=AGENT_CHOICES, default="random")
    p.add_argument("--llm-config", dest="config", default=None)
    p.add_argument("--agent-seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-o", "--out-dir", default="bench-results")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="serve sessions over WebSocket + NDJSON")
    p.add_argument("--bind", default="127.0.0.1:8765")
    p.add_argument("--log-dir", default=None)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("replay", help="re-execute a log and verify it")
    p.add_argument("log")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("grade", help="grade the knowledge in a finished log")
    p.add_argument("log")
    p.add_argument("--grader", choices=("rubric", "remote"), default="rubric")
    p.add_argument("--notes", default=None,
                   help="extra knowledge text file (e.g. play-session notes)")
    p.add_argument("--llm-config", dest="config", default=None)
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=cmd_grade)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
