"""Shared task-instance type and scorecard/question helpers for generators."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class TaskInstance:
    """Everything needed to build, play, and score one episode.

    A task is fully determined by (theme, difficulty, seed): `secrets` holds
    the theme's hidden gold data, `refs` the uids of scorecard-relevant
    objects as assigned during the deterministic world build. Rebuilding the
    world from the same instance always reproduces those uids.
    """

    task_id: str
    theme: str
    difficulty: str
    seed: int
    step_cap: int
    description: str = ""
    secrets: dict = field(default_factory=dict)
    refs: dict = field(default_factory=dict)
    scorecard_template: list = field(default_factory=list)
    knowledge_questions: list = field(default_factory=list)
    completion: dict = field(default_factory=dict)

    def to_doc(self, redact_secrets: bool = False) -> dict:
        doc = {
            "task_id": self.task_id,
            "theme": self.theme,
            "difficulty": self.difficulty,
            "seed": self.seed,
            "step_cap": self.step_cap,
            "description": self.description,
            "scorecard_template": self.scorecard_template,
            "knowledge_questions": self.knowledge_questions,
            "completion": self.completion,
            "secrets": {} if redact_secrets else self.secrets,
            "refs": {} if redact_secrets else self.refs,
        }
        return doc

    @staticmethod
    def from_doc(doc: dict) -> "TaskInstance":
        return TaskInstance(
            task_id=doc["task_id"],
            theme=doc["theme"],
            difficulty=doc["difficulty"],
            seed=doc["seed"],
            step_cap=doc["step_cap"],
            description=doc.get("description", ""),
            secrets=doc.get("secrets", {}),
            refs=doc.get("refs", {}),
            scorecard_template=doc.get("scorecard_template", []),
            knowledge_questions=doc.get("knowledge_questions", []),
            completion=doc.get("completion", {}),
        )


def item(item_id: str, text: str, max_points: int, detector: dict) -> dict:
    """One procedural checklist entry."""
    return {"id": item_id, "text": text, "max_points": max_points, "detector": detector}


def question(q_id: str, text: str, rubric: list) -> dict:
    """One knowledge question with its regex rubric (all patterns must hit)."""
    return {"id": q_id, "question": text, "rubric": rubric}
