from qent import channels, verification
from qent.errors import IncompleteKraus


def test_default_suite_passes():
    res = verification.run_suite(dims=(2, 3), trials=100, seed=0)
    assert res.ok, res.failures[:5]
    assert res.counts["entropy.q_entropy_standard"] == [200, 0]
    assert res.counts["capacity.ordering"][0] == 8


def test_seed_reproducible():
    a = verification.run_suite(dims=(2,), trials=5, seed=3, opt_trials=1)
    b = verification.run_suite(dims=(2,), trials=5, seed=3, opt_trials=1)
    assert a.counts == b.counts


def test_zero_trials_vacuous():
    res = verification.run_suite(dims=(2, 3, 4), trials=0)
    assert res.ok and not res.counts


def test_faulty_loader_recorded():
    def load():
        raise IncompleteKraus("completeness residual 1.0e-03 exceeds 1e-09")

    res = verification.run_suite(dims=(2,), trials=1, opt_trials=0, extra_channels=[load])
    assert not res.ok
    assert res.failures == ["input_channel: IncompleteKraus: completeness residual 1.0e-03 exceeds 1e-09"]


def test_good_extra_channel():
    res = verification.run_suite(
        dims=(2,), trials=1, opt_trials=0,
        extra_channels=[lambda: channels.amplitude_damping(0.3)],
    )
    assert res.ok
    assert res.counts["input_channel.ordering"] == [1, 0]


def test_record_counts():
    res = verification.SuiteResult()
    res.record("x", True)
    res.record("x", False, "bad")
    res.record("y", False)
    assert res.counts == {"x": [1, 1], "y": [0, 1]}
    assert res.failures == ["x: bad", "y"]
    assert not res.ok
