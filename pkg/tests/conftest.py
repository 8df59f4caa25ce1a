import sys
from fractions import Fraction

from hypothesis import settings, strategies as st

from qchn.scalars import ScalarQ

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

small_fraction = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def laurent(draw, max_terms=4):
    terms = draw(st.dictionaries(st.integers(-3, 3), small_fraction, max_size=max_terms))
    return ScalarQ.from_laurent(terms)


@st.composite
def scalars(draw):
    num = draw(laurent())
    den = draw(laurent())
    return num / den if den else num


sample_q = st.builds(Fraction, st.integers(2, 30), st.integers(2, 30)).filter(lambda x: x != 1)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid, _, check, _ in mod.CRITERIA:
        if cid not in mod.RESULTS:
            continue
        title, ok, elapsed = mod.RESULTS[cid]
        timing = f" ({elapsed:.2f}s)" if elapsed is not None else ""
        terminalreporter.write_line(f"criterion {cid:>3}: {'PASS' if ok else 'FAIL'}{timing} {title}")
