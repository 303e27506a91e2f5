import numpy as np
import pytest

from sfdc.huffman import CodeTable, huffman_codes
from sfdc.standard import encode

from oracles import GOLDEN_CODES, GOLDEN_TEXT


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile (or load cached) kernels once so timing checks exclude JIT cost."""
    from sfdc import gamma, search, standard

    y = np.array([0, 1, 2, 0, 1, 3, 3, 3], dtype=np.uint8)
    codes = huffman_codes(y)
    for lam in (2, 3):
        c = standard.encode(y, codes, lam)
        standard.access_many(c, np.arange(y.size))
        standard.compute_delay(y, codes, lam, keep=True)
        g = gamma.gamma_encode(y, codes, lam)
        gamma.gamma_access_many(g, np.arange(y.size))
        gamma.gamma_compute_delay(y, codes, lam, keep=True)
        search.skip_search(c, search.compile_pattern(y[2:5], codes, lam))
    standard.encode_with_log(y, codes, 2)
    gamma.gamma_encode_with_log(y, codes, 2)
    search.plain_skip_search(y, y[:2])


@pytest.fixture(scope="session")
def golden_codes():
    return CodeTable.from_codewords(GOLDEN_CODES)


@pytest.fixture(scope="session")
def golden(golden_codes):
    return encode(GOLDEN_TEXT, golden_codes, 6)



def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acceptance_log.LINES):
            terminalreporter.write_line(line)
