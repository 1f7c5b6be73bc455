"""Interactive self-test sessions driven by per-device script files.

Scripts are data, not code: one step per line, ``step_id | instruction |
expected result``. A session walks the steps in order; each advance records
pass/fail/skipped and moves the cursor, finishing with a step-by-step trace.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import NoScriptForModel, SessionComplete, UnknownSession

STEP_RESULTS = ("pass", "fail", "skipped")


@dataclass(frozen=True)
class SelfTestStep:
    step_id: str
    instruction: str
    expected: str


@dataclass(frozen=True)
class SelfTestScript:
    device_model: str
    steps: tuple

    @classmethod
    def from_file(cls, path: str | Path, device_model: str) -> "SelfTestScript":
        steps = []
        seen = set()
        for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").split("\n"), 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = [p.strip() for p in stripped.split("|")]
            if len(parts) != 3:
                raise ValueError(f"{path}:{line_no}: expected 'step_id | instruction | expected'")
            if parts[0] in seen:
                raise ValueError(f"{path}:{line_no}: duplicate step id {parts[0]!r}")
            seen.add(parts[0])
            steps.append(SelfTestStep(*parts))
        return cls(device_model=device_model, steps=tuple(steps))


@dataclass
class SelfTestSession:
    session_id: str
    script: SelfTestScript
    cursor: int = 0
    results: dict = field(default_factory=dict)

    @property
    def state(self) -> str:
        return "complete" if self.cursor >= len(self.script.steps) else "in_progress"

    def current_step(self) -> SelfTestStep | None:
        if self.state == "complete":
            return None
        return self.script.steps[self.cursor]

    def snapshot(self) -> dict:
        step = self.current_step()
        return {
            "session_id": self.session_id,
            "device_model": self.script.device_model,
            "state": self.state,
            "cursor": self.cursor,
            "total_steps": len(self.script.steps),
            "current_step": None
            if step is None
            else {
                "step_id": step.step_id,
                "instruction": step.instruction,
                "expected": step.expected,
            },
        }

    def report(self) -> dict:
        counts = {r: 0 for r in STEP_RESULTS}
        trace = []
        for step in self.script.steps:
            result = self.results.get(step.step_id)
            if result:
                counts[result] += 1
            trace.append(
                {
                    "step_id": step.step_id,
                    "instruction": step.instruction,
                    "expected": step.expected,
                    "result": result,
                }
            )
        return {"counts": counts, "trace": trace, "total_steps": len(self.script.steps)}


class SelfTestRunner:
    """Owns scripts and sessions; sessions are single-technician, accessed
    serially per session id."""

    def __init__(self):
        self._scripts: dict[str, SelfTestScript] = {}
        self._sessions: dict[str, SelfTestSession] = {}

    def register_script(self, script: SelfTestScript) -> None:
        self._scripts[script.device_model] = script

    def load_script_dir(self, directory: str | Path) -> int:
        directory = Path(directory)
        n = 0
        for path in sorted(directory.glob("*.txt")):
            self.register_script(SelfTestScript.from_file(path, path.stem))
            n += 1
        return n

    @property
    def models(self) -> list[str]:
        return sorted(self._scripts)

    def start(self, device_model: str) -> SelfTestSession:
        script = self._scripts.get(device_model)
        if script is None:
            raise NoScriptForModel(f"no self-test script for model {device_model!r}")
        session = SelfTestSession(session_id=secrets.token_hex(8), script=script)
        self._sessions[session.session_id] = session
        return session

    def get(self, session_id: str) -> SelfTestSession:
        session = self._sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"no self-test session {session_id!r}")
        return session

    def advance(self, session_id: str, step_result: str) -> dict:
        """Record the result for the current step; returns the next-step
        snapshot, or the final report after the last step."""
        session = self.get(session_id)
        if step_result not in STEP_RESULTS:
            raise ValueError(f"step result must be one of {STEP_RESULTS}")
        if session.state == "complete":
            raise SessionComplete(f"session {session_id} already finished")
        step = session.script.steps[session.cursor]
        session.results[step.step_id] = step_result
        session.cursor += 1
        if session.state == "complete":
            return {**session.snapshot(), "report": session.report()}
        return session.snapshot()
