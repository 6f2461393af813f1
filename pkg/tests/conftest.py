import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "unitri",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", parent=settings.get_profile("unitri"), max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "unitri"))

SMALL_PRIMES = (3, 5, 7)

# filled by tests/test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@st.composite
def group_params(draw, max_n=5, primes=SMALL_PRIMES):
    n = draw(st.integers(2, max_n))
    p = draw(st.sampled_from(primes))
    return n, p


@st.composite
def elements(draw, n, p):
    from unitri.group import UniTriMatrix, positions

    ent = {pos: draw(st.integers(0, p - 1)) for pos in positions(n)}
    return UniTriMatrix.from_entries(n, p, ent)


@st.composite
def words(draw, n, max_len=12):
    from unitri.group import GeneratorWord

    steps = draw(
        st.lists(st.tuples(st.integers(1, n - 1), st.sampled_from((1, -1))), max_size=max_len)
    )
    return GeneratorWord.of(steps)
