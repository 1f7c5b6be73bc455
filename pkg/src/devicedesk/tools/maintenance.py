"""Maintenance plan expansion and iCalendar export.

Device profiles are data files (``task_id | title | interval_days``). Plans
expand every task to all due dates inside the horizon; the iCalendar export
is a minimal RFC 5545 document (VCALENDAR/VEVENT/UID/DTSTART/SUMMARY) with
stable UIDs so re-exports are byte-identical. The calendar-provider slot is
an interface; the file export is the offline default.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, timedelta
from pathlib import Path

from ..errors import EmptyProfile, InvalidHorizon


@dataclass(frozen=True)
class MaintenanceTask:
    task_id: str
    title: str
    interval_days: int
    source: str = "profile"

    def __post_init__(self):
        if self.interval_days < 1:
            raise ValueError("interval_days must be >= 1")


@dataclass(frozen=True)
class DeviceProfile:
    device_model: str
    tasks: tuple

    @classmethod
    def from_file(cls, path: str | Path, device_model: str) -> "DeviceProfile":
        tasks = []
        for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").split("\n"), 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = [p.strip() for p in stripped.split("|")]
            if len(parts) != 3:
                raise ValueError(f"{path}:{line_no}: expected 'task_id | title | interval_days'")
            tasks.append(MaintenanceTask(parts[0], parts[1], int(parts[2])))
        return cls(device_model=device_model, tasks=tuple(tasks))


@dataclass(frozen=True)
class PlanEvent:
    task_id: str
    title: str
    due: date
    source: str

    @property
    def uid(self) -> str:
        return f"{self.task_id}-{self.due.isoformat()}"


@dataclass
class MaintenancePlan:
    device_model: str
    created: date
    horizon_days: int
    events: list

    def tasks_summary(self) -> list[dict]:
        seen: dict[str, dict] = {}
        for ev in self.events:
            if ev.task_id not in seen:
                seen[ev.task_id] = {
                    "task_id": ev.task_id,
                    "title": ev.title,
                    "next_due": ev.due.isoformat(),
                    "source": ev.source,
                }
        return list(seen.values())

    def to_payload(self) -> dict:
        return {
            "device_model": self.device_model,
            "created": self.created.isoformat(),
            "horizon_days": self.horizon_days,
            "tasks": self.tasks_summary(),
            "events": [
                {"uid": ev.uid, "task_id": ev.task_id, "title": ev.title, "due": ev.due.isoformat()}
                for ev in self.events
            ],
        }


def generate_maintenance_plan(
    profile: DeviceProfile, horizon_days: int, start: date | None = None
) -> MaintenancePlan:
    if horizon_days < 1:
        raise InvalidHorizon(f"horizon must be >= 1 day, got {horizon_days}")
    if not profile.tasks:
        raise EmptyProfile(f"profile for {profile.device_model} lists no tasks")
    start = start or date.today()
    events = []
    for task in profile.tasks:
        for i in range(1, horizon_days // task.interval_days + 1):
            events.append(
                PlanEvent(
                    task_id=task.task_id,
                    title=task.title,
                    due=start + timedelta(days=i * task.interval_days),
                    source=task.source,
                )
            )
    events.sort(key=lambda ev: (ev.due, ev.task_id))
    return MaintenancePlan(
        device_model=profile.device_model, created=start, horizon_days=horizon_days, events=events
    )


def _escape(text: str) -> str:
    return (
        text.replace("\\", "\\\\").replace(";", "\\;").replace(",", "\\,").replace("\n", "\\n")
    )


def export_icalendar(plan: MaintenancePlan) -> str:
    """RFC 5545 minimal profile; DTSTAMP is derived from the plan creation
    date so identical plans export byte-identically."""
    stamp = plan.created.strftime("%Y%m%dT000000Z")
    lines = [
        "BEGIN:VCALENDAR",
        "VERSION:2.0",
        "PRODID:-//devicedesk//maintenance//EN",
        "CALSCALE:GREGORIAN",
    ]
    for ev in plan.events:
        lines += [
            "BEGIN:VEVENT",
            f"UID:{_escape(ev.uid)}",
            f"DTSTAMP:{stamp}",
            f"DTSTART;VALUE=DATE:{ev.due.strftime('%Y%m%d')}",
            f"SUMMARY:{_escape(f'{plan.device_model}: {ev.title}')}",
            "END:VEVENT",
        ]
    lines.append("END:VCALENDAR")
    return "\r\n".join(lines) + "\r\n"
