import math
import os

import pytest

import rglab

DATA = os.path.join(os.path.dirname(__file__), "..", "data")


def waring():
    return rglab.RateSequence(rglab.RateFamily.constant(1.0), rglab.RateFamily.linear(1.0, 1.0))


def quadratic():
    return rglab.RateSequence(rglab.RateFamily.constant(1.0), rglab.RateFamily.power(1.0, 2.0))


def test_waring_law():
    seq = waring()
    q = rglab.q_iterate(seq, 0.5, 100)
    assert all(abs(q[n] - 1 / ((n + 1) * (n + 2))) < 1e-15 for n in range(101))
    st = rglab.normalize(seq, 1000, rglab.s0_compute(seq, 1000))
    assert st.Q0 == pytest.approx(0.5, abs=1e-12)
    assert st.s0.classification == "exactly-one"


def test_fast_growth_s0():
    s0 = rglab.s0_compute(quadratic(), 100000)
    assert s0.classification == "strictly-below-one"
    assert abs(s0.partial_value - (1 - math.pi / math.sinh(math.pi))) < 1e-5


def test_config_loading():
    seq = rglab.load_rates(os.path.join(DATA, "const.json"))
    assert seq.lambda_at(3) == 2.0
    with pytest.raises(rglab.RglabError, match="config"):
        rglab.load_rates(os.path.join(DATA, "missing.json"))


def test_not_normalizable_raises():
    e = rglab.RateFamily.exponential(1.0, math.exp(-1))
    seq = rglab.RateSequence(e, e)
    with pytest.raises(rglab.RglabError, match="not-normalizable"):
        rglab.normalize(seq, 50, rglab.s0_compute(seq, 50))


def test_transient_stationary_point():
    seq = waring()
    q = rglab.q_iterate(seq, 0.5, 5)
    d0 = [(1.0 if k == 0 else 0.0) - q[k] for k in range(6)]
    tr = rglab.LinearGrowthTransient(1.0, 1.0, d0)
    assert tr.stationary_points(5) == [pytest.approx(math.log(6))]
    assert tr.delta(0, 0.0) == pytest.approx(0.5)


def test_adversarial():
    res = rglab.construct_adversarial(rglab.RateSequence(rglab.RateFamily.constant(1.0),
                                                         rglab.RateFamily.constant(1.0)), 3, 10.0)
    assert res.certificate.passed
    assert len(res.certificate.points) == 3 and max(res.certificate.points) > 10
    assert sum(res.initial_P) == pytest.approx(1.0, abs=1e-12)
    lin = rglab.construct_adversarial(waring(), 2, 5.0)
    assert lin.family == "linear" and lin.certificate.passed


def test_integrate_and_flux():
    seq = quadratic()
    s0 = rglab.s0_compute(seq, 30)
    st = rglab.normalize(seq, 30, s0, truncated=True)
    v = rglab.Modified(st.Q0, s0.partial_value)
    P0 = [1.0] + [0.0] * 30
    traj = rglab.integrate(P0, v, seq, 0.5, 1e-10, save_every=0.01)
    assert traj.states[-1].t == pytest.approx(0.5)
    rows = rglab.mass_flux_report(traj, v, seq)
    assert rows[0].identity_rhs > 0
    assert max(abs(r.residual) for r in rows) < 1e-5

    orig = rglab.integrate(P0, rglab.Original(), seq, 0.5, 1e-10)
    last = orig.states[-1]
    assert last.mass() + last.leak == pytest.approx(1.0, abs=1e-10)


def test_invariant_suite():
    results = rglab.run_invariant_suite(waring(), 500, 2)
    assert results and all(r["pass"] for r in results)
