"""Acceptance criteria, one test per criterion, each reporting a PASS/FAIL line."""

import math
import time

import numpy as np

from vncut.cli import ExperimentConfig, cmd_figure1
from vncut.hilbert import (
    CoherentParams,
    coherent_state,
    cos_eigenvector,
    cos_operator,
    expectation_C,
    s_factor,
    truncation_for,
)
from vncut.linear_chain import (
    PointerState,
    SpinState,
    classical_cut_chain,
    first_pointer_distribution,
    quantum_chain,
)
from vncut.numerics import bessel_i, gauss_legendre
from vncut.phase_chain import PhaseChainConfig, mean_shift_quantum, q_distribution
from vncut.semiclassical import (
    mean_shift_semiclassical_closed,
    mean_shift_semiclassical_quadrature,
    semiclassical_factor,
)

R_LATTICE = (0.5, 1.0, 2.0, 4.0)
MU_LATTICE = (0.0, math.pi / 6, math.pi / 3)
LATTICE = [(r, mu) for r in R_LATTICE for mu in MU_LATTICE]


def test_cut_invariance(criterion):
    rng = np.random.default_rng(20240601)
    worst_sup = worst_mean = slowest = 0.0
    for j in (0.5, 1.0, 1.5):
        for sigma in (0.05, 0.1, 0.3):
            n = int(2 * j) + 1
            spin = SpinState.normalized(j, rng.normal(size=n) + 1j * rng.normal(size=n))
            t0 = time.perf_counter()
            phi, Phi = PointerState.gaussian(sigma), PointerState.gaussian(sigma)
            q = quantum_chain(spin, phi, Phi)
            c = classical_cut_chain(first_pointer_distribution(spin, phi), Phi.density())
            slowest = max(slowest, time.perf_counter() - t0)
            worst_sup = max(worst_sup, float(np.max(np.abs(q.distribution.values - c.distribution.values))))
            worst_mean = max(worst_mean, abs(q.mean - c.mean))
    ok = worst_sup <= 1e-9 and worst_mean <= 1e-10 and slowest <= 2.0
    criterion("1 cut invariance", ok,
              f"sup {worst_sup:.2e} <= 1e-9, mean {worst_mean:.2e} <= 1e-10, slowest case {slowest:.2f}s <= 2s")
    assert ok


def test_operator_vs_series(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    for r, mu in LATTICE:
        state = coherent_state(CoherentParams(r, mu), truncation_for(r))
        worst = max(worst, abs(expectation_C(state) - math.cos(mu) * s_factor(r)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and elapsed <= 1.0
    criterion("2 <C> two routes", ok, f"max gap {worst:.2e} <= 1e-8, {elapsed:.3f}s <= 1s")
    assert ok


def test_semiclassical_closed_vs_quadrature(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    for r, mu in LATTICE:
        closed = mean_shift_semiclassical_closed(r, mu)
        quad = mean_shift_semiclassical_quadrature(r, mu, 512)
        worst = max(worst, abs(closed - quad) / max(abs(closed), 1e-300))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and elapsed <= 30.0
    criterion("3 semiclassical two routes", ok, f"max rel gap {worst:.2e} <= 1e-6, {elapsed:.2f}s <= 30s")
    assert ok


def test_limits(criterion, oracles):
    small_q = abs(s_factor(1e-3) / 1e-3 - 1)
    small_sc = abs(semiclassical_factor(1e-3) / (1e-3 * math.sqrt(math.pi / 2)) - 1)
    q6, sc6 = s_factor(6.0), semiclassical_factor(6.0)
    pinned = max(abs(q6 - float(oracles["s_factor"]["6"])), abs(sc6 - float(oracles["semiclassical_factor"]["6"])))
    ok = (small_q <= 1e-5 and small_sc <= 1e-5 and 0.95 <= q6 <= 1 and 0.95 <= sc6 <= 1
          and abs(q6 - sc6) <= 0.02 and pinned <= 1e-12)
    criterion("4 limits", ok,
              f"small-r {small_q:.1e}, {small_sc:.1e} <= 1e-5; r=6 S={q6:.6f}, semi={sc6:.6f}, "
              f"gap {abs(q6 - sc6):.1e} <= 0.02, oracle gap {pinned:.1e}")
    assert ok


def test_identity_oracles(criterion):
    # cosine-operator elements from the eigenbasis integral, n, s <= 40
    N = 41
    th, w = gauss_legendre(256, 0.0, math.pi)
    S = np.sin(np.outer(th, np.arange(1, N + 1)))
    quad = (2 / math.pi) * S.T @ ((w * np.cos(th))[:, None] * S)
    elem = float(np.max(np.abs(quad - cos_operator(N).to_dense())))

    # integral representation of I_0, I_1, z <= 30; relative once I >= 1 (I_0(30) ~ 8e11)
    y, wy = gauss_legendre(400, 0.0, math.pi)
    bessel = 0.0
    for z in (0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 15.0, 15.5, 20.0, 25.0, 30.0):
        for order in (0, 1):
            ref = wy @ (np.exp(z * np.cos(y)) * np.cos(order * y)) / math.pi
            val = float(bessel_i(order, z))
            bessel = max(bessel, abs(val - ref) / max(abs(ref), 1.0))

    # completeness of |cos th> at N = 128 with 512 nodes
    N = 128
    th, w = gauss_legendre(512, 0.0, math.pi)
    V = np.array([cos_eigenvector(t, N).amps.real for t in th])
    complete = float(np.max(np.abs(V.T @ (w[:, None] * V) - np.eye(N))))

    ok = elem <= 1e-12 and bessel <= 1e-9 and complete <= 1e-8
    criterion("5 identity oracles", ok,
              f"C elements {elem:.1e} <= 1e-12, Bessel rel {bessel:.1e} <= 1e-9, completeness {complete:.1e} <= 1e-8")
    assert ok


def test_phase_chain_mean(criterion):
    worst = 0.0
    for r, mu in LATTICE:
        cfg = PhaseChainConfig(m=0.0, r=r, mu0=mu)
        worst = max(worst, abs(q_distribution(cfg).mean - mean_shift_quantum(cfg)))
    ok = worst <= 1e-7
    criterion("6 phase-chain mean", ok, f"max gap {worst:.2e} <= 1e-7")
    assert ok


def test_figure1(criterion, oracles):
    cfg = ExperimentConfig(experiment="figure1", r_lo=0.0, r_hi=3.0, r_step=0.05, format="csv")
    text, code = cmd_figure1(cfg)
    body = [line for line in text.splitlines() if not line.startswith("#")]
    assert body[0] == "r,S_quantum,factor_semiclassical"
    rows = np.array([[float(x) for x in line.split(",")] for line in body[1:]])
    r, q, sc = rows.T
    frozen = np.array([[float(x) for x in row] for row in oracles["figure1_lattice"]])
    oracle_gap = float(np.max(np.abs(rows - frozen)))
    monotone = bool(np.all(np.diff(q) > 0) and np.all(np.diff(sc) > 0))
    ordered = bool(np.all(q <= sc))
    slope_q, slope_sc = q[1] / r[1], sc[1] / r[1]
    slopes = abs(slope_q - 1) <= 0.01 and abs(slope_sc / math.sqrt(math.pi / 2) - 1) <= 0.01
    ok = code == 0 and len(rows) == 61 and monotone and ordered and slopes and oracle_gap <= 1e-12
    criterion("7 figure 1", ok,
              f"{len(rows)} rows, monotone={monotone}, quantum<=semiclassical={ordered}, "
              f"slopes {slope_q:.4f}/1, {slope_sc:.4f}/{math.sqrt(math.pi / 2):.4f}, oracle gap {oracle_gap:.1e}")
    assert ok
