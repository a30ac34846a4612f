import json

import pytest

from groups.exceptions import MalformedInputError
from report.config import InstanceConfig, kernel_generators


def test_kernel_generators(ab):
    gens = [str(g) for g in kernel_generators(ab, 1)]
    assert gens == ["b", "a b a'", "a' b a"]
    assert len(kernel_generators(ab, 4)) == 9


def test_kernel_needs_two_letters():
    from groups.words import MarkedAlphabet

    with pytest.raises(MalformedInputError):
        kernel_generators(MarkedAlphabet.of("a", "b", "c"), 2)


def test_from_file_with_overrides(tmp_path):
    path = tmp_path / "instance.json"
    path.write_text(json.dumps({"name": "sq", "subgroup": ["a a", "b b"], "radius": 6}))
    config = InstanceConfig.from_file(path, radius=9, n_max=None)
    assert config.name == "sq"
    assert config.radius == 9
    assert config.n_max == 24
    assert [str(g) for g in config.generators()] == ["a a", "b b"]


def test_unknown_keys_rejected():
    with pytest.raises(MalformedInputError):
        InstanceConfig.from_dict({"radius": 3, "colour": "red"})


def test_bad_json_reports_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"radius": 3,\n  oops}')
    with pytest.raises(MalformedInputError) as info:
        InstanceConfig.from_file(path)
    assert info.value.line == 2


def test_seed_comes_from_environment(monkeypatch):
    monkeypatch.setenv("ATLAS_SEED", "42")
    assert InstanceConfig().seed == 42


def test_invalid_values():
    with pytest.raises(MalformedInputError):
        InstanceConfig(radius=-1)
    with pytest.raises(MalformedInputError):
        InstanceConfig(mode="random")
    with pytest.raises(MalformedInputError):
        InstanceConfig(subgroup_family="commutator")


def test_surface_host():
    config = InstanceConfig(alphabet=("a", "b", "c", "d"), relators=("a b a' b' c d c' d'",))
    assert not config.presentation().is_free
    assert config.to_dict()["relators"] == ["a b a' b' c d c' d'"]
