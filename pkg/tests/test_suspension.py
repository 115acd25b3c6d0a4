import math

import numpy as np
import pytest

from singflow import (HORIZONTAL, VERTICAL, AdmissibleChain, BitSequence,
                      CanonicalHeightError, FlowPoint, FlowResourceError,
                      Harmonic, PairKindError, RoofFunction, UnitPoint,
                      bw_distance_upper, flow, flow_point, flowpoints_close,
                      norm_height, pair_length, parse_sequence_literal,
                      roof_eval, seq_distance, shift, singular_point,
                      unit_roof_extension)

HARM = RoofFunction.from_profile(Harmonic(1.0))
UNIT = RoofFunction.const(1.0)


def random_point(rng, f):
    n = int(rng.integers(2, 9))
    window = tuple(int(b) for b in rng.integers(0, 2, size=n))
    tails = [(1,), (1, 0), (1, 0, 0), (0, 1, 1)]
    x = BitSequence(window, int(rng.integers(-4, 4)),
                    tails[int(rng.integers(0, 4))], tails[int(rng.integers(0, 4))])
    if x.is_zero():
        x = BitSequence.from_ones([0])
    return flow_point(f, x, float(rng.uniform(0.0, roof_eval(f, x))))


def stepwise_flow_oracle(p, t, f):
    """Independent forward-crossing simulation: peel one roof at a time with
    plain arithmetic on explicit shifted sequences."""
    assert t >= 0
    base, h = p.base, p.height + t
    while h >= roof_eval(f, base):
        h -= roof_eval(f, base)
        base = shift(base, 1)
    return FlowPoint(base, h)


def test_flow_fixes_singularity():
    star = singular_point()
    assert flow(star, 7.3, HARM) == star
    assert flow(star, -2.0, HARM) == star


def test_flow_constant_roof_translation():
    x = parse_sequence_literal("0*|1011|0*")
    q = flow(FlowPoint(x, 0.0), 2.5, UNIT)
    assert q.base == shift(x, 2) and q.height == pytest.approx(0.5)


def test_flow_one_crossing_matches_stepwise_oracle():
    x = parse_sequence_literal("0*|1001|0*")  # gap coordinates (0, 3)
    p = FlowPoint(x, 0.0)
    q = flow(p, 1.0, HARM)  # g0 = 1, exactly one crossing
    assert q.base == shift(x, 1) and q.height == pytest.approx(0.0, abs=1e-15)
    oracle = stepwise_flow_oracle(p, 1.0, HARM)
    assert flowpoints_close(q, oracle, HARM, 1e-12)


def test_flow_matches_oracle_on_samples():
    rng = np.random.default_rng(17)
    for _ in range(100):
        p = random_point(rng, HARM)
        t = float(rng.uniform(0.0, 4.0))
        assert flowpoints_close(flow(p, t, HARM), stepwise_flow_oracle(p, t, HARM),
                                HARM, 1e-9)


def test_flow_additivity_sampled():
    rng = np.random.default_rng(23)
    for _ in range(500):
        p = random_point(rng, HARM)
        a = float(rng.uniform(-3.0, 3.0))
        b = float(rng.uniform(-3.0, 3.0))
        lhs = flow(flow(p, a, HARM), b, HARM)
        rhs = flow(p, a + b, HARM)
        assert flowpoints_close(lhs, rhs, HARM, 1e-9)


def test_flow_outputs_canonical():
    rng = np.random.default_rng(29)
    for _ in range(200):
        p = random_point(rng, HARM)
        q = flow(p, float(rng.uniform(-5.0, 5.0)), HARM)
        assert 0.0 <= q.height < roof_eval(HARM, q.base)


def test_flow_resource_error():
    x = BitSequence.from_ones([0, 10 ** 5])
    p = flow_point(HARM, x, 0.0)
    with pytest.raises(FlowResourceError):
        flow(p, 30.0, HARM, max_crossings=50)


def test_flow_into_zero_right_tail_accumulates():
    # beyond the last 1 the roofs shrink but their sum diverges
    x = BitSequence.from_ones([0], left=(1,))
    p = flow_point(HARM, x, 0.0)
    q = flow(p, 3.0, HARM)
    assert 0.0 <= q.height < roof_eval(HARM, q.base)


def test_canonical_height_validation():
    x = BitSequence.from_ones([4])
    with pytest.raises(CanonicalHeightError):
        flow_point(HARM, x, 0.5)  # roof is 1/4 here
    with pytest.raises(CanonicalHeightError):
        flow_point(HARM, BitSequence.zero(), 0.1)


def test_pair_length_examples():
    x = BitSequence.from_ones([0, 5])
    a = FlowPoint(x, 0.0)
    assert pair_length(a, a, HORIZONTAL, UNIT) == 0.0
    assert pair_length(a, a, VERTICAL, UNIT) == 0.0
    # vertical on the same fiber
    b = FlowPoint(x, 0.7)
    assert pair_length(FlowPoint(x, 0.2), b, VERTICAL, UNIT) == pytest.approx(0.5)
    # horizontal with prescribed base distances
    y = BitSequence.from_ones([0, 2])   # d(x,y) = 1/4, d(Tx,Ty) = 1/2
    assert seq_distance(x, y) == 0.25
    assert seq_distance(shift(x, 1), shift(y, 1)) == 0.5
    got = pair_length(FlowPoint(x, 0.5), FlowPoint(y, 0.5), HORIZONTAL, UNIT)
    assert got == pytest.approx(0.375)


def test_pair_length_crossing_orientation():
    # flowing up from (x, u) to (Tx, u') costs 1 - u + u'
    x = BitSequence.from_ones([0, 5])
    a = FlowPoint(x, 0.9)
    b = FlowPoint(shift(x, 1), 0.05)
    assert pair_length(a, b, VERTICAL, UNIT) == pytest.approx(0.15)
    assert pair_length(b, a, VERTICAL, UNIT) == pytest.approx(0.15)


def test_pair_length_rejections():
    x = BitSequence.from_ones([0])
    y = BitSequence.from_ones([1])
    with pytest.raises(PairKindError):
        pair_length(FlowPoint(x, 0.1), FlowPoint(x, 0.6), HORIZONTAL, UNIT)
    with pytest.raises(PairKindError):
        pair_length(FlowPoint(x, 0.0), FlowPoint(shift(x, 5), 0.0), VERTICAL, UNIT)


def test_admissible_chain_length():
    x = BitSequence.from_ones([0, 5])
    pts = (FlowPoint(x, 0.0), FlowPoint(x, 0.5), FlowPoint(shift(x, 1), 0.25))
    chain = AdmissibleChain(pts, (VERTICAL, VERTICAL))
    assert chain.length(UNIT) == pytest.approx(0.5 + (1 - 0.5 + 0.25))
    with pytest.raises(ValueError):
        AdmissibleChain(pts, (VERTICAL,))


def test_bw_distance_examples():
    x = parse_sequence_literal("0*|1011|0*")
    a = FlowPoint(x, 0.0)
    assert bw_distance_upper(a, a, UNIT, 2) == 0.0
    b = FlowPoint(shift(x, 1), 0.0)
    d = bw_distance_upper(a, b, UNIT, 4)
    assert d <= 1.0 + 1e-12
    assert d <= min(1.0, seq_distance(x, shift(x, 1))) + 1e-12
    # same fiber bounded by the height difference
    p, q = FlowPoint(x, 0.2), FlowPoint(x, 0.9)
    assert bw_distance_upper(p, q, UNIT, 2) <= 0.7 + 1e-12


def test_bw_distance_same_height_equals_horizontal_formula():
    x = parse_sequence_literal("0*|1011|0*")
    y = parse_sequence_literal("0*|1101|0*")
    for u in (0.0, 0.3, 0.8):
        a, b = FlowPoint(x, u), FlowPoint(y, u)
        d = bw_distance_upper(a, b, UNIT, 4)
        assert d == pytest.approx(pair_length(a, b, HORIZONTAL, UNIT))


def test_bw_distance_properties_sampled():
    rng = np.random.default_rng(31)
    for _ in range(40):
        a = random_point(rng, HARM)
        b = random_point(rng, HARM)
        m = 5
        dab = bw_distance_upper(a, b, HARM, m)
        assert abs(dab - bw_distance_upper(b, a, HARM, m)) <= 1e-12
        assert bw_distance_upper(a, b, HARM, m + 3) <= dab + 1e-12
        assert bw_distance_upper(a, a, HARM, m) == 0.0


def test_bw_relaxed_triangle_by_concatenation():
    rng = np.random.default_rng(37)
    for _ in range(40):
        a = random_point(rng, HARM)
        c = random_point(rng, HARM)
        # middle point on a's fiber so the concatenated chain stays in the pool
        b = flow_point(HARM, a.base,
                       float(rng.uniform(0.0, roof_eval(HARM, a.base))))
        m = 4
        lhs = bw_distance_upper(a, c, HARM, 2 * m)
        rhs = (bw_distance_upper(a, b, HARM, m)
               + bw_distance_upper(b, c, HARM, m))
        assert lhs <= rhs + 1e-12


def test_unit_roof_extension_examples():
    pi = unit_roof_extension(UNIT)
    x = BitSequence.from_ones([0, 3])
    base = FlowPoint(x, 0.0)
    assert pi(UnitPoint(base, 0.0)) == base
    lifted = pi(UnitPoint(base, 0.25))
    assert lifted.base == x and lifted.height == pytest.approx(0.25)

    pih = unit_roof_extension(HARM)
    xhat = FlowPoint(BitSequence.from_ones([-2, 2]), 0.0)  # k_x = 2
    assert flowpoints_close(pih(UnitPoint(xhat, 0.4)),
                            flow(xhat, 0.4, HARM), HARM, 1e-12)


def test_unit_roof_equivariance_sampled():
    rng = np.random.default_rng(41)
    pi = unit_roof_extension(HARM)
    for _ in range(200):
        p = UnitPoint(random_point(rng, HARM), float(rng.uniform(0.0, 1.0)))
        t = float(rng.uniform(-2.5, 2.5))
        lhs = pi(pi.advance(p, t))
        rhs = flow(pi(p), t, HARM)
        assert flowpoints_close(lhs, rhs, HARM, 1e-9)


def test_norm_height_convention_at_singularity():
    assert norm_height(singular_point(), HARM) == 0.0
