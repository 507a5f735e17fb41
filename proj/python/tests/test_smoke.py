import _eaplab


def test_import():
    assert _eaplab.__version__
