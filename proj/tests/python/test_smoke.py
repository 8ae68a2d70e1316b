import numpy as np
import pytest

import utester


def test_fixture_entropies():
    t0z, t0x, tpx = (utester.named_tester(n) for n in ("0Z", "0X", "+X"))
    sy = np.array([[0, -1j], [1j, 0]])
    h = np.array([[1, -1], [1, 1]]) / np.sqrt(2)
    assert utester.entropy_sum(t0z, tpx, sy) == pytest.approx(0.0, abs=1e-9)
    assert utester.entropy_sum(t0z, t0x, h) == pytest.approx(1.0, abs=1e-9)


def test_estimate_bound():
    res = utester.estimate_bound(utester.named_tester("0Z"), utester.named_tester("0X"), starts=8, seed=1)
    assert res["value"] == pytest.approx(1.0, abs=1e-4)
    assert len(res["starts"]) == 8


def test_choi_matches_direct():
    u = utester.haar_random_unitary(3, seed=5)
    t = utester.named_tester("bell:4", 3)
    np.testing.assert_allclose(utester.probability_via_choi(t, u), t.distribution(u), atol=1e-9)
    e = utester.choi_operator(u)
    assert np.trace(e).real == pytest.approx(3.0)


def test_custom_tester_and_errors():
    t = utester.Tester(np.array([1, 0]), [np.array([1, 0]), np.array([0, 1])], 2, "mine")
    assert t.kind == utester.TesterKind.ANCILLA_FREE
    with pytest.raises(ValueError):
        utester.Tester(np.array([1, 1]), [np.array([1, 0]), np.array([0, 1])], 2)
    with pytest.raises(ValueError):
        t.distribution(np.eye(3))


def test_muub():
    assert utester.muub_check("pauli", "pauli-unbiased")["verdict"] is True
    assert utester.muub_check("pauli", "pauli")["verdict"] is False
    assert len(utester.basis("weyl", 3)) == 9


def test_protocol_reproducible():
    cfg = {"protocol": "extended", "D": 2, "rounds": 3000, "eve": "qmm", "seed": 3}
    a, b = utester.run_protocol(cfg), utester.run_protocol(cfg)
    assert a == b
    assert a["eve_accuracy"] == pytest.approx(utester.analytic_eve_accuracy(2), abs=0.05)
    with pytest.raises(utester.InvalidConfig):
        utester.run_protocol({"protocol": "extended", "D": 3})


def test_cli_roundtrip():
    code, report, _ = utester.run_command(["verify", "--suite", "qmath", "--seed", "7"])
    assert code == 0 and report["status"] == "pass"
    code, report, msg = utester.run_command(["qkd", "bb84"])
    assert code == 2 and report is None and "Usage" in msg
