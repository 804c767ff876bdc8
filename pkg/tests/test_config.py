import pytest

from engine.config import get_project_root, load_suite_config, parse_suite_config, resolve_square_path


def minimal_suite():
    return {
        "sweep": {"orders": [3, 2], "length": 100},
        "featured": {"squares": ["swapped3"], "length": 200, "oracle_length": 0},
        "controls": {"length": 50},
    }


def test_default_suite_loads():
    config = load_suite_config()
    assert config.sweep_orders == (2, 3, 4, 5)
    assert config.sweep_length == 10_000
    assert config.featured_squares == ("swapped3", "nongroup6", "thue_morse")
    assert config.featured_length == 100_000
    assert config.oracle_length == 2000
    assert config.controls_length == 200
    assert config.jobs == 1


def test_parse_sorts_orders_and_defaults_jobs():
    config = parse_suite_config(minimal_suite())
    assert config.sweep_orders == (2, 3)
    assert config.jobs == 1


@pytest.mark.parametrize("section", ["sweep", "featured", "controls"])
def test_missing_section(section):
    cfg = minimal_suite()
    del cfg[section]
    with pytest.raises(KeyError):
        parse_suite_config(cfg)


def test_missing_length():
    cfg = minimal_suite()
    del cfg["sweep"]["length"]
    with pytest.raises(KeyError):
        parse_suite_config(cfg)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda c: c["sweep"].update(orders=[1, 2]),
        lambda c: c["sweep"].update(orders=[]),
        lambda c: c["sweep"].update(length=0),
        lambda c: c["featured"].update(length="long"),
        lambda c: c["featured"].update(squares=[""]),
        lambda c: c.update(jobs=0),
    ],
)
def test_invalid_values(mutate):
    cfg = minimal_suite()
    mutate(cfg)
    with pytest.raises(ValueError):
        parse_suite_config(cfg)


def test_project_root_override(tmp_path, monkeypatch):
    monkeypatch.setenv("LSM_PROJECT_ROOT", str(tmp_path))
    assert get_project_root() == tmp_path.resolve()
    (tmp_path / "squares").mkdir()
    (tmp_path / "squares" / "tiny.yaml").write_text("order: 2\nrows: [[1, 2], [2, 1]]\n")
    assert resolve_square_path("tiny").name == "tiny.yaml"
    assert resolve_square_path("tiny.yaml").name == "tiny.yaml"
    with pytest.raises(FileNotFoundError):
        resolve_square_path("swapped3")


def test_load_suite_from_file(tmp_path):
    path = tmp_path / "suite.yaml"
    path.write_text(
        "sweep: {orders: [2], length: 64}\n"
        "featured: {squares: [], length: 64, oracle_length: 16}\n"
        "controls: {length: 40}\n"
        "jobs: 2\n"
    )
    config = load_suite_config(path)
    assert config.featured_squares == ()
    assert config.jobs == 2


def test_load_suite_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_suite_config(tmp_path / "absent.yaml")
