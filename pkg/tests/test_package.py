import transition_lab


def test_exports_resolve():
    for name in transition_lab.__all__:
        assert hasattr(transition_lab, name), name
    assert callable(transition_lab.holonomy)


def test_family_data_ships_with_package():
    from transition_lab.param import load_family_data
    assert "ks_polytope" in load_family_data()
