import os

from hypothesis import HealthCheck, settings

from polyhom.samples import base_seed

settings.register_profile(
    "polyhom",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "polyhom"))

# filled by test_acceptance, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_report_header(config):
    return f"POLYHOM_SEED={base_seed()}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
