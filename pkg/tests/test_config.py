import pytest
from hypothesis import given
from hypothesis import strategies as st

from unitri.config import COMMANDS, FORMATS, RunConfig, parse_config_text
from unitri.errors import UsageError

configs = st.builds(
    RunConfig,
    command=st.sampled_from(COMMANDS),
    n=st.none() | st.integers(2, 6),
    p=st.none() | st.sampled_from([3, 5, 7, 11]),
    walk=st.none() | st.sampled_from(["P", "Q", "K", "productQ"]),
    t=st.integers(0, 10),
    t_max=st.none() | st.integers(10, 500),
    eps=st.none() | st.floats(1e-6, 0.999),
    format=st.sampled_from(FORMATS),
    exact=st.booleans(),
    jobs=st.integers(1, 8),
    budget=st.none() | st.integers(1, 10**9),
)


@given(configs)
def test_text_round_trip(cfg):
    assert RunConfig.from_text(cfg.to_text()) == cfg


def test_file_round_trip(tmp_path):
    cfg = RunConfig("tv-curve", n=3, p=5, walk="Q", t_max=40, eps=0.25, out="x.csv")
    path = tmp_path / "run.cfg"
    cfg.save(path)
    assert RunConfig.load(path) == cfg
    assert "t-max=40" in path.read_text()


def test_comments_and_dashes():
    got = parse_config_text("# header\n\n n = 3  # size\nt-max=7\nexact=yes\n")
    assert got == {"n": 3, "t_max": 7, "exact": True}


@pytest.mark.parametrize(
    "text",
    ["n", "colour=red", "n=three", "exact=maybe", "eps=x"],
)
def test_parse_errors(text):
    with pytest.raises(UsageError):
        parse_config_text(text)


@pytest.mark.parametrize(
    "kw",
    [
        {"command": "plot"},
        {"format": "xml"},
        {"jobs": 0},
        {"t": -1},
        {"t": 5, "t_max": 4},
        {"eps": 1.0},
        {"budget": 0},
    ],
)
def test_invalid_configs(kw):
    with pytest.raises(UsageError):
        RunConfig(**kw)


def test_replace_validates():
    cfg = RunConfig("spectrum", n=2, p=5)
    assert cfg.replace(p=7).p == 7
    with pytest.raises(UsageError):
        cfg.replace(jobs=0)
