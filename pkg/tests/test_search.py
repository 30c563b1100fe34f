import itertools

import numpy as np
import pytest

from zxcheck.diagram import HNODE, chain, is_isomorphic, wire, xs, zs
from zxcheck.incompleteness import ALPHA, BETA, certify_pair, d1_chain, d2_chain
from zxcheck.phase import Phase
from zxcheck.search import (
    FIXTURES, ConfigError, SearchConfig, check_fixture_pair, enumerate_diagrams, evaluate, find_gaps,
    load_fixture, phase_fingerprint, scalar_fingerprint,
)
from zxcheck.semantics import Mode, compare, interpret

STAB = ["0", "pi/2", "pi", "3pi/2"]


def _has(ds, d):
    return any(is_isomorphic(d, e) for e in ds)


def test_budget_zero_is_the_wire():
    ds = list(enumerate_diagrams(SearchConfig(budget=0)))
    assert len(ds) == 1 and is_isomorphic(ds[0], wire())


def test_budget_one_tiny_alphabet():
    ds = list(enumerate_diagrams(SearchConfig(budget=1, alphabet=["0"])))
    assert len(ds) == 4
    for d in (chain([zs()]), chain([xs()]), chain([HNODE])):
        assert _has(ds, d)


def test_chains_reachable():
    ds = list(enumerate_diagrams(SearchConfig(budget=3, alphabet=[Phase.radians(ALPHA), Phase.radians(BETA)])))
    assert _has(ds, d2_chain())
    ds = list(enumerate_diagrams(SearchConfig(budget=5, alphabet=["pi/3", "2pi/3"], reduced=True)))
    assert _has(ds, d1_chain())


def test_graph_family_fixed_signature_and_unique():
    cfg = SearchConfig(budget=4, signature=(1, 2), samples=300, seed=3)
    ds = list(enumerate_diagrams(cfg))
    assert ds and all((d.n_inputs, d.n_outputs) == (1, 2) for d in ds)
    for a, b in itertools.combinations(ds[:60], 2):
        assert not is_isomorphic(a, b)


def test_config_validation():
    with pytest.raises(ConfigError):
        SearchConfig(probes=[3]).validate()
    with pytest.raises(ConfigError):
        SearchConfig(budget=11).validate()
    with pytest.raises(ConfigError):
        SearchConfig(signature=(4, 3)).validate()
    with pytest.raises(ConfigError):
        SearchConfig.from_json({"bogus": 1})


def test_chain_fast_path_matches_interpret(rng):
    for d in enumerate_diagrams(SearchConfig(budget=3, alphabet=["pi/4", 0.7])):
        for k in (1, -3):
            assert np.allclose(evaluate(d, k), interpret(d, k), atol=1e-12)


def test_fingerprints_invariance():
    m = np.array([[0.3, 0.2j], [0.9, -0.1]])
    assert phase_fingerprint(m) == phase_fingerprint(np.exp(0.4j) * m)
    assert phase_fingerprint(m) != phase_fingerprint(2 * m)
    assert scalar_fingerprint(m) == scalar_fingerprint(-2.5j * m)


def test_fingerprint_grouping_sound():
    # brute force: equal up to phase implies equal fingerprints
    ds = list(enumerate_diagrams(SearchConfig(budget=3, alphabet=["pi/4", "pi/2"])))
    ms = [interpret(d) for d in ds]
    for (a, ma), (b, mb) in itertools.combinations(zip(ds, ms), 2):
        if compare(ma, mb, Mode.PHASE):
            assert phase_fingerprint(ma) == phase_fingerprint(mb)


def test_stabilizer_alphabet_no_candidates():
    assert find_gaps(SearchConfig(budget=3, alphabet=STAB)) == []


def test_empty_probe_set():
    cfg = SearchConfig(probes=[], seeds=[d1_chain(), d2_chain()], budget=0)
    assert find_gaps(cfg) == []


def test_seeded_run_finds_pair():
    cfg = SearchConfig(budget=1, alphabet=STAB, probes=[-3], seeds=[d1_chain(), d2_chain()])
    gaps = find_gaps(cfg)
    assert len(gaps) == 1
    c = gaps[0]
    assert {len(c.d1.interior()), len(c.d2.interior())} == {3, 5}
    assert certify_pair(c.d1, c.d2, c.k, cfg.tol, cfg.floor).certified


def test_unseeded_run_rediscovers_pair():
    cfg = SearchConfig(budget=5, reduced=True, probes=[-3],
                       alphabet=["pi/3", "2pi/3", Phase.radians(ALPHA), Phase.radians(BETA)])
    gaps = find_gaps(cfg)
    hit = [c for c in gaps
           if (is_isomorphic(c.d1, d2_chain()) and is_isomorphic(c.d2, d1_chain()))
           or (is_isomorphic(c.d1, d1_chain()) and is_isomorphic(c.d2, d2_chain()))]
    assert hit
    for c in gaps:
        assert c.residual <= cfg.tol and c.separation >= cfg.floor
        assert certify_pair(c.d1, c.d2, c.k, cfg.tol, cfg.floor).certified


def test_output_independent_of_seed_for_exhaustive_runs():
    base = dict(budget=5, reduced=True, probes=[-3], alphabet=["pi/3", "2pi/3", Phase.radians(ALPHA), Phase.radians(BETA)])
    one = find_gaps(SearchConfig(seed=0, **base))
    two = find_gaps(SearchConfig(seed=99, **base))
    assert [(c.semantics_hash, c.k) for c in one] == [(c.semantics_hash, c.k) for c in two]


def test_fixture_pairs():
    cfg = SearchConfig()
    rep = check_fixture_pair(wire(), wire(), cfg)
    assert rep.equal_up_to_phase and rep.separated_by == []
    rep = check_fixture_pair(d1_chain(), d2_chain(), SearchConfig(probes=[-3]))
    assert rep.equal_up_to_phase and rep.separated_by == [-3]
    with pytest.raises(ConfigError):
        check_fixture_pair(wire(), chain([zs()]).__class__({}, [], [], []), cfg)
    for name in FIXTURES:
        lhs, rhs = load_fixture(name)
        rep = check_fixture_pair(lhs, rhs, cfg, name=name)
        assert rep.name == name and len(rep.separations) == len(cfg.probes)
