import numpy as np
import pytest

from famaport import (
    ALGORITHMS,
    BudgetExceededError,
    ChannelRealization,
    InvalidArgumentError,
    SystemConfig,
    build_signal_model,
    combiner_sinr,
    select_cuma,
    select_dc,
    select_exhaustive,
    select_geport,
    select_gfwd,
    select_gfwd_swap,
    select_slow_fama,
    subset_sinr,
)
from conftest import make_model
from oracles import best_subset_bruteforce, literal_sinr

REL = 1e-9


def handmade_model(H, snr_db=10.0, user_index=0):
    """Signal model from an explicit channel matrix."""
    P, N_t = H.shape
    cfg = SystemConfig(P=P, L=min(2, P), K=N_t, W=1.0, snr_db=snr_db, user_index=user_index)
    ch = ChannelRealization(H=np.asarray(H, dtype=complex), snr_db=snr_db, seed_path=(0, 0))
    return cfg, build_signal_model(ch, cfg)


class TestSlowFama:
    def test_no_interference_picks_strongest(self):
        _, _, model = make_model(P=10, K=1, seed=0)
        sel = select_slow_fama(model)
        assert sel.ports.indices == (int(np.argmax(np.abs(model.g))),)

    def test_constructed_toy(self):
        H = np.array(
            [[1.0, 3.0], [2.0, 2.0], [5.0, 0.1], [1.0, 0.2]], dtype=complex
        )
        _, model = handmade_model(H, snr_db=10.0)
        sel = select_slow_fama(model)
        assert sel.ports.indices == (2,)

    def test_matches_single_port_bruteforce(self):
        cfg, ch, model = make_model(P=12, K=4, seed=1)
        best = max(
            range(12),
            key=lambda p: literal_sinr(ch.H, cfg.user_index, cfg.snr_linear, [p], np.ones(1)),
        )
        sel = select_slow_fama(model)
        assert sel.ports.indices == (best,)
        lit = literal_sinr(ch.H, cfg.user_index, cfg.snr_linear, [best], np.ones(1))
        assert sel.sinr == pytest.approx(lit, rel=1e-10)


class TestDc:
    def test_l1_equals_slow_fama(self):
        _, _, model = make_model(P=10, K=3, seed=2)
        assert select_dc(model, 1).ports == select_slow_fama(model).ports

    def test_full_array_is_unrestricted_gev(self):
        _, _, model = make_model(P=8, K=3, seed=3)
        sel = select_dc(model, 8)
        assert sel.sinr == pytest.approx(subset_sinr(model, range(8)), rel=1e-12)

    def test_never_below_single_port(self):
        for seed in range(10):
            _, _, model = make_model(P=10, K=4, seed=seed)
            assert select_dc(model, 3).sinr >= select_slow_fama(model).sinr * (1 - REL)


class TestCuma:
    def test_real_positive_gains_closed_form(self):
        g = np.array([0.5, 2.0, 1.0, 3.0, 0.2])
        _, model = handmade_model(g[:, None], snr_db=10.0)
        L = 3
        sel = select_cuma(model, L)
        assert sel.ports.canonical() == (1, 2, 3)
        expect = 10.0 * (2.0 + 1.0 + 3.0) ** 2 / L
        assert sel.sinr == pytest.approx(expect, rel=1e-12)

    def test_l1_strongest_aligned_port(self):
        _, _, model = make_model(P=10, K=3, seed=4)
        sel = select_cuma(model, 1)
        anchor = int(np.argmax(np.abs(model.g)))
        # the anchor port itself has the largest aligned real part
        assert sel.ports.indices == (anchor,)

    def test_equal_gain_never_beats_gev(self):
        for seed in range(10):
            _, _, model = make_model(P=10, K=4, seed=30 + seed)
            sel = select_cuma(model, 4)
            assert sel.sinr <= subset_sinr(model, sel.ports) * (1 + REL)

    def test_combiner_is_equal_gain(self):
        _, _, model = make_model(P=10, K=3, seed=5)
        sel = select_cuma(model, 4)
        assert np.allclose(sel.w, 0.5)


class TestGfwd:
    def test_first_step_is_slow_fama_port(self):
        for seed in range(5):
            _, _, model = make_model(P=12, K=4, seed=seed)
            gfwd = select_gfwd(model, 3)
            assert gfwd.trace["selection_order"][0] == select_slow_fama(model).ports.indices[0]

    def test_no_interference_selects_top_magnitudes(self):
        _, _, model = make_model(P=12, K=1, seed=6)
        sel = select_gfwd(model, 4)
        expect = tuple(sorted(np.argsort(-np.abs(model.g), kind="stable")[:4]))
        assert sel.ports.canonical() == expect

    def test_trace_nondecreasing(self):
        for seed in range(10):
            _, _, model = make_model(P=10, K=4, seed=40 + seed)
            steps = select_gfwd(model, 3).trace["step_sinr"]
            assert len(steps) == 3
            assert all(b >= a * (1 - REL) for a, b in zip(steps, steps[1:]))

    def test_stored_sinr_consistent_with_quotient(self):
        _, _, model = make_model(P=10, K=4, seed=7)
        sel = select_gfwd(model, 3)
        assert combiner_sinr(model, sel.ports, sel.w) == pytest.approx(sel.sinr, rel=1e-8)


class TestGfwdSwap:
    def test_zero_rounds_identical_to_gfwd(self):
        _, _, model = make_model(P=12, K=4, seed=8)
        a = select_gfwd(model, 3)
        b = select_gfwd_swap(model, 3, R=0)
        assert a.ports == b.ports
        assert b.sinr == a.sinr
        assert np.array_equal(a.w, b.w)

    def test_swaps_only_improve(self):
        for seed in range(15):
            _, _, model = make_model(P=14, K=4, seed=60 + seed)
            gfwd = select_gfwd(model, 4)
            gfwds = select_gfwd_swap(model, 4, R=3)
            assert gfwds.sinr >= gfwd.sinr * (1 - REL)
            sinrs = [s["sinr"] for s in gfwds.trace["swaps"]]
            assert all(b > a for a, b in zip([gfwd.sinr] + sinrs, sinrs))

    def test_swap_log_ports_stay_valid(self):
        _, _, model = make_model(P=14, K=4, seed=9)
        sel = select_gfwd_swap(model, 4, R=3)
        assert len(sel.ports.canonical()) == 4
        for s in sel.trace["swaps"]:
            assert 0 <= s["in"] < 14 and 0 <= s["out"] < 14

    def test_determinism(self):
        _, _, model = make_model(P=14, K=4, seed=10)
        a = select_gfwd_swap(model, 4, R=3)
        b = select_gfwd_swap(model, 4, R=3)
        assert a.ports == b.ports and a.sinr == b.sinr and np.array_equal(a.w, b.w)

    def test_negative_rounds_rejected(self):
        _, _, model = make_model()
        with pytest.raises(InvalidArgumentError):
            select_gfwd_swap(model, 3, R=-1)


class TestGeport:
    def test_full_size_no_elimination(self):
        _, _, model = make_model(P=8, K=3, seed=11)
        sel = select_geport(model, 8)
        assert sel.ports.canonical() == tuple(range(8))
        assert sel.sinr == pytest.approx(subset_sinr(model, range(8)), rel=1e-12)

    def test_no_interference_drops_weakest_first(self):
        _, _, model = make_model(P=10, K=1, seed=12)
        sel = select_geport(model, 4)
        expect = tuple(sorted(np.argsort(-np.abs(model.g), kind="stable")[:4]))
        assert sel.ports.canonical() == expect

    def test_l1_contract_only(self):
        # no ordering guarantee vs slow-FAMA; only a valid, consistent output
        H = np.array([[1.0, 0.4], [0.8, 1.2], [0.3, 0.2]], dtype=complex)
        _, model = handmade_model(H, snr_db=10.0)
        sel = select_geport(model, 1)
        assert len(sel.ports.canonical()) == 1
        assert combiner_sinr(model, sel.ports, sel.w) == pytest.approx(sel.sinr, rel=1e-8)


class TestExhaustive:
    def test_full_set(self):
        _, _, model = make_model(P=8, K=3, seed=13)
        assert select_exhaustive(model, 8).ports.canonical() == tuple(range(8))

    def test_l1_is_slow_fama(self):
        _, _, model = make_model(P=10, K=3, seed=14)
        assert select_exhaustive(model, 1).ports == select_slow_fama(model).ports

    def test_dominates_all_other_selectors(self):
        for seed in range(8):
            _, _, model = make_model(P=8, K=3, seed=80 + seed)
            best = select_exhaustive(model, 2)
            others = [
                select_slow_fama(model),
                select_dc(model, 2),
                select_cuma(model, 2),
                select_gfwd(model, 2),
                select_gfwd_swap(model, 2, R=3),
                select_geport(model, 2),
            ]
            for sel in others:
                assert best.sinr >= sel.sinr * (1 - REL)

    def test_matches_independent_enumeration(self):
        _, _, model = make_model(P=7, K=3, seed=15)
        sel = select_exhaustive(model, 3)
        ports, val = best_subset_bruteforce(np.asarray(model.A), np.asarray(model.B), 3)
        assert sel.ports.canonical() == ports
        assert sel.sinr == pytest.approx(val, rel=1e-9)

    def test_budget_guard(self):
        _, _, model = make_model(P=50, K=2, seed=16, L=10)
        with pytest.raises(BudgetExceededError):
            select_exhaustive(model, 10)


class TestContracts:
    def test_registry_ids(self):
        assert set(ALGORITHMS) == {"sfama", "dc", "cuma", "gfwd", "gfwds", "geport", "exhaustive"}

    def test_se_matches_sinr(self):
        _, _, model = make_model(P=10, K=4, seed=17)
        for name, fn in ALGORITHMS.items():
            sel = fn(model, 3, 2)
            assert sel.se == pytest.approx(np.log2(1 + sel.sinr), rel=1e-12)
            assert sel.algorithm == name

    def test_every_selector_quotient_consistent(self):
        cfg, ch, model = make_model(P=10, K=4, seed=18)
        for name, fn in ALGORITHMS.items():
            sel = fn(model, 3, 2)
            lit = literal_sinr(ch.H, cfg.user_index, cfg.snr_linear, sel.ports.canonical(), sel.w)
            assert lit == pytest.approx(sel.sinr, rel=1e-8), name

    def test_l_out_of_range(self):
        _, _, model = make_model(P=8, K=3, seed=19)
        with pytest.raises(InvalidArgumentError):
            select_dc(model, 9)
        with pytest.raises(InvalidArgumentError):
            select_gfwd(model, 0)
