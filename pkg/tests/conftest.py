import pytest

ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


class Criterion:
    """Records one acceptance criterion's outcome for the terminal summary."""

    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.failures: list[str] = []
        self.notes: list[str] = []

    def check(self, label: str, deviation: float, tol: float):
        ok = deviation <= tol
        text = f"{label}: max_dev={deviation:.3e} tol={tol:.0e}"
        (self.notes if ok else self.failures).append(text)
        return ok

    def finish(self):
        passed = not self.failures
        detail = "; ".join(self.failures or self.notes)
        ACCEPTANCE[self.number] = (self.title, passed, detail)
        assert passed, detail


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} [{number}] {title} | {detail}")
