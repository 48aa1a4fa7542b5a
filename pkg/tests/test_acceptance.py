"""End-to-end acceptance criteria, one test per criterion.

Each test prints a ``[PASS]``/``[FAIL]`` line, and the pytest terminal
summary repeats all of them (see ``conftest.py``).  Run alone with
``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import subprocess
import sys
import time
from contextlib import contextmanager

import numpy as np
import pytest

from conftest import ACCEPTANCE_RESULTS
from oracles import fd_tau_derivative, naive_theta_derivative
from thetaloci import (
    Characteristic,
    Tolerance,
    enumerate_chars,
    even_jet_matrix,
    gradient_matrix,
    heat_factor,
    numerical_rank,
    random_siegel,
    theta,
    theta_jet,
    validate_siegel,
)
from thetaloci.constructors import block_diagonal, decomposable_singular_sample, thetanull_times_elliptics
from thetaloci.loci import dk_theta_null_witnesses, multiplicity_at
from thetaloci.probes import (
    EXCLUDED,
    codg_J_matrix,
    codg_L_matrix,
    fj_leading_ratio,
    irred_jacobian,
    tsing_jacobian,
    y_locus_jacobian,
)
from thetaloci.theta import multi_indices

pytestmark = pytest.mark.acceptance
RANK_TOL = Tolerance(rank_rel_eps=1e-8)


@contextmanager
def criterion(n, title, limit):
    start = time.perf_counter()
    passed = False
    try:
        yield
        passed = True
    finally:
        secs = time.perf_counter() - start
        ok = passed and secs < limit
        ACCEPTANCE_RESULTS[n] = (title, ok, secs)
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {n:2d}: {title} ({secs:.2f} s)")
    assert secs < limit, f"runtime {secs:.1f} s exceeds {limit} s"


def _random_char(rng, g, which="all"):
    chars = enumerate_chars(g, which)
    return chars[rng.integers(len(chars))]


def test_01_heat_equation():
    rng = np.random.default_rng(1)
    with criterion(1, "heat equation vs finite differences in tau", 30):
        worst = 0.0
        for g in (1, 2, 3):
            for _ in range(20):
                tau = random_siegel(rng, g, min_imag=0.5)
                char = _random_char(rng, g)
                jet = theta_jet(char, tau, None, 2)

                def f(m, char=char):
                    return theta(char, validate_siegel(m), tol=1e-15)

                for i, j in multi_indices(g, 2):
                    fd = fd_tau_derivative(f, tau.tau, i, j, h=1e-5)
                    worst = max(worst, abs(jet.entry(i, j) - heat_factor(i, j) * fd))
        assert worst < 1e-6, worst


def test_02_parity_and_counts():
    rng = np.random.default_rng(2)
    with criterion(2, "characteristic counts and vanishing odd constants", 10):
        for g, (n_odd, n_even) in {1: (1, 3), 2: (6, 10), 3: (28, 36), 4: (120, 136)}.items():
            assert len(enumerate_chars(g, "odd")) == n_odd == 2 ** (g - 1) * (2 ** g - 1)
            assert len(enumerate_chars(g, "even")) == n_even == 2 ** (g - 1) * (2 ** g + 1)
        for _ in range(10):
            g = int(rng.integers(1, 5))
            tau = random_siegel(rng, g)
            for c in enumerate_chars(g, "odd"):
                assert abs(theta(c, tau)) < 1e-12


def test_03_maximal_rank():
    rng = np.random.default_rng(3)
    with criterion(3, "gradient and even-jet matrices have maximal rank", 120):
        for g, n in ((1, 20), (2, 20), (3, 5)):
            for _ in range(n):
                tau = random_siegel(rng, g)
                assert numerical_rank(gradient_matrix(tau).M, RANK_TOL) == g
                if g < 3:
                    assert numerical_rank(even_jet_matrix(tau).M, RANK_TOL) == g * (g + 1) // 2 + 1


def _product_jet_entry(jets, sizes, idx):
    out, start = 1.0 + 0j, 0
    for jet, n in zip(jets, sizes):
        local = tuple(k - start for k in idx if start <= k < start + n)
        out *= jet.entry(*local) if local else jet.value
        start += n
    return out


def test_04_factorization():
    rng = np.random.default_rng(4)
    with criterion(4, "theta factors over block-diagonal period matrices", 60):
        for trial in range(10):
            sizes = [(1, 1), (1, 2), (2, 1)][trial % 3]
            parts = [random_siegel(rng, n) for n in sizes]
            tau = block_diagonal(parts)
            char = _random_char(rng, tau.g)
            pieces = char.split(sizes)
            prod = np.prod([theta(c, p) for c, p in zip(pieces, parts)])
            assert abs(theta(char, tau) - prod) < 1e-10
            jet = theta_jet(char, tau, None, 3)
            jets = [theta_jet(c, p, None, 3) for c, p in zip(pieces, parts)]
            for h in range(4):
                for idx in multi_indices(tau.g, h):
                    assert abs(jet.entry(*idx) - _product_jet_entry(jets, sizes, idx)) < 1e-10


def test_05_component_witnesses():
    with criterion(5, "theta-null x elliptic samples: multiplicity k+2, Jacobian rank", 120):
        for (g, k), rank in {(3, 1): 3, (4, 1): 4, (4, 2): 6}.items():
            sample = thetanull_times_elliptics(g, k)
            assert multiplicity_at(sample.tau, sample.z) == k + 2
            res = irred_jacobian(sample, k)
            assert res.rank == res.expected == rank == g * k + 1 - k * (k + 1) // 2


def test_06_tsing_rank():
    with criterion(6, "Jacobian of the singular-point equations has rank 2g", 60):
        sample = decomposable_singular_sample(3)
        res = tsing_jacobian(sample.tau, sample.z)
        assert res.rank == 6
        sv = res.singular_values
        assert sv[5] >= 1e4 * sv[6]


def test_07_codg_L():
    with criterion(7, "matrix L has rank g and matches the transposed Jacobian", 30):
        diag = validate_siegel(np.diag([1j, 2j, 3j]))
        prod_sample = thetanull_times_elliptics(3, 1)
        for tau, char in ((diag, Characteristic.ones(3)), (prod_sample.tau, prod_sample.char)):
            L = codg_L_matrix(tau, char, 1)
            J = codg_J_matrix(tau, char, 1)
            assert L.rank == 3
            assert L.rank == J.rank
            assert J.shape == L.shape[::-1]


def test_08_y_locus():
    with criterion(8, "Jacobian of the odd gradient map has rank g", 30):
        for lam in ([1j, 2j, 3j], [2j, 3j, 5j], [1j, 1.5j, 4j]):
            tau = validate_siegel(np.diag(lam))
            assert y_locus_jacobian(tau, Characteristic.ones(3)).rank == 3


FJ_CONFIGS = [
    ("g1 [01,01]", ((0, 1), (0, 1)), [[1j]], [0.2 + 2.5j]),
    ("g1 [11,10]", ((1, 1), (1, 0)), [[1j]], [0.2 + 2.5j]),
    ("g1 [10,10]", ((1, 0), (1, 0)), [[1j]], [0.2 + 2.5j]),
    ("g2 [110,100]", ((1, 1, 0), (1, 0, 0)), [[1j, 0.3], [0.3, 1.5j]], [0.2 + 1j, 0.1 + 1.5j]),
    ("g2 [100,100]", ((1, 0, 0), (1, 0, 0)), [[1j, 0.3], [0.3, 1.5j]], [0.2 + 1j, 0.1 + 1.5j]),
]


def test_09_fourier_jacobi():
    with criterion(9, "Fourier-Jacobi leading-term ratios converge in t", 60):
        for name, (e, d), tau, z in FJ_CONFIGS:
            char, tau = Characteristic(e, d), validate_siegel(tau)
            r10 = fj_leading_ratio(char, tau, z, 10.0)
            r40 = fj_leading_ratio(char, tau, z, 40.0)
            assert r40.defined, name
            assert all(abs(r - 1) < 1e-6 for r in r40.defined), name
            assert r40.max_deviation < r10.max_deviation, name
            assert all((r is EXCLUDED) == (s is EXCLUDED) for r, s in zip(r10.ratios, r40.ratios))


def test_10_emptiness():
    rng = np.random.default_rng(10)
    with criterion(10, "no 2-torsion witnesses for k >= g-1", 60):
        for g in (2, 3):
            taus = [random_siegel(rng, g) for _ in range(10)]
            taus.append(validate_siegel(np.diag([(a + 1) * 1j for a in range(g)])))
            for tau in taus:
                for k in range(g - 1, 5):
                    report = dk_theta_null_witnesses(tau, k)
                    assert not report.witnesses and not report.above_cap


def test_11_oracle_agreement():
    rng = np.random.default_rng(11)
    with criterion(11, "agreement with a naive radius-30 summation", 120):
        worst = 0.0
        for _ in range(50):
            g = int(rng.integers(1, 4))
            order = int(rng.integers(0, 5))
            tau = random_siegel(rng, g, min_imag=0.5)
            char = _random_char(rng, g)
            z = rng.uniform(-0.5, 0.5, g) + 1j * rng.uniform(-0.3, 0.3, g)
            jet = theta_jet(char, tau, z, order)
            for h in range(order + 1):
                for idx in multi_indices(g, h):
                    ref = naive_theta_derivative(char.eps, char.delta, tau.tau, z, idx)
                    worst = max(worst, abs(jet.entry(*idx) - ref))
        assert worst < 1e-10, worst


CLI_SESSION = [
    ("eval", '{"char":{"eps":[1],"delta":[1]},"tau":{"re":[[0]],"im":[[1]]},"z":[[0,0]]}'),
    ("jet", '{"char":{"eps":[0,1],"delta":[1,1]},"tau":{"re":[[0.1,0.2],[0.2,0]],'
            '"im":[[1,0.2],[0.2,1.3]]},"z":[[0.1,0.05],[0,0]],"order":2}'),
    ("tau-deriv", '{"char":{"eps":[0],"delta":[0]},"tau":{"re":[[0]],"im":[[1]]},"i":0,"j":0}'),
    ("chars", '{"g":2,"which":"odd"}'),
    ("act", '{"sigma":{"a":[[0]],"b":[[1]],"c":[[-1]],"d":[[0]]},"char":{"eps":[1],"delta":[0]},'
            '"tau":{"re":[[0.1]],"im":[[1.2]]}}'),
    ("d-form", '{"chars":[{"eps":[1],"delta":[1]}],"tau":{"re":[[0]],"im":[[1]]}}'),
    ("d2-form", '{"chars":[{"eps":[0],"delta":[0]},{"eps":[0],"delta":[1]}],'
                '"tau":{"re":[[0]],"im":[[1]]}}'),
    ("grad-matrix", '{"tau":{"re":[[0,0.3],[0.3,0]],"im":[[1,0],[0,2]]}}'),
    ("even-matrix", '{"tau":{"re":[[0.2]],"im":[[1.1]]}}'),
    ("membership", '{"tau":{"re":[[0,0],[0,0]],"im":[[1,0],[0,2]]},"locus":"theta_null"}'),
    ("multiplicity", '{"tau":{"re":[[0,0,0],[0,0,0],[0,0,0]],"im":[[1,0,0],[0,2,0],[0,0,3]]},'
                     '"char":{"eps":[1,1,1],"delta":[1,1,1]}}'),
    ("sample", '{"kind":"thetanull_times_elliptics","g":3,"k":1}'),
    ("probe", '{"kind":"irred","g":3,"k":1}'),
    ("fj-ratio", '{"char":{"eps":[1,1],"delta":[1,0]},"tau":{"re":[[0]],"im":[[1]]},'
                 '"z":[[0.2,2.5]],"t":20}'),
]


def _run_session():
    out = []
    for cmd, payload in CLI_SESSION:
        proc = subprocess.run([sys.executable, "-m", "thetaloci", cmd, payload],
                              capture_output=True, check=False)
        assert proc.returncode == 0, (cmd, proc.stdout, proc.stderr)
        out.append(proc.stdout)
    return out


def test_12_cli_determinism():
    with criterion(12, "CLI output is byte-identical across runs", 60):
        from thetaloci.schemas import COMMANDS

        assert sorted(c for c, _ in CLI_SESSION) == sorted(COMMANDS)
        first, second = _run_session(), _run_session()
        assert first == second


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
