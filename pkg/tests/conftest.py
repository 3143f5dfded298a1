import itertools

from hypothesis import strategies as st

from kbraid.words import FreeKBraidWord


@st.composite
def kbraid_words(draw, n_range=(3, 5), k_values=(2, 3), max_length=8):
    n = draw(st.integers(*n_range))
    k = draw(st.sampled_from([k for k in k_values if k < n]))
    subsets = list(itertools.combinations(range(1, n + 1), k))
    letters = draw(st.lists(st.sampled_from(subsets), max_size=max_length))
    return FreeKBraidWord(n, k, tuple(letters))


# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {status}  {detail}")
