"""Specialized diagnostic tools: error-code lookup, log analysis, self-test
sessions, maintenance scheduling."""

from .error_lookup import ErrorCodeAnswer, ErrorCodeCatalog, edit_distance, lookup_error_code
from .logs import LogEntry, LogReport, ParsedLog, SEVERITIES, analyze_log, parse_log
from .maintenance import (
    DeviceProfile,
    MaintenancePlan,
    MaintenanceTask,
    PlanEvent,
    export_icalendar,
    generate_maintenance_plan,
)
from .selftest import (
    STEP_RESULTS,
    SelfTestRunner,
    SelfTestScript,
    SelfTestSession,
    SelfTestStep,
)

__all__ = [
    "ErrorCodeAnswer",
    "ErrorCodeCatalog",
    "edit_distance",
    "lookup_error_code",
    "LogEntry",
    "LogReport",
    "ParsedLog",
    "SEVERITIES",
    "analyze_log",
    "parse_log",
    "DeviceProfile",
    "MaintenancePlan",
    "MaintenanceTask",
    "PlanEvent",
    "export_icalendar",
    "generate_maintenance_plan",
    "STEP_RESULTS",
    "SelfTestRunner",
    "SelfTestScript",
    "SelfTestSession",
    "SelfTestStep",
]
