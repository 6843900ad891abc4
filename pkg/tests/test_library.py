import json

import pytest

from src.library import (
    BUILTIN_MATRICES,
    LibraryError,
    UnknownMatrixError,
    builtin_matrix,
    export_builtins,
    list_matrices,
    load_matrix_file,
    resolve_matrix,
    save_matrix_file,
)
from src.seifert.forms import SeifertMatrix, connected_sum
from src.settings import ENV_OVERRIDES, PROJECT_ROOT, ConfigurationError, Settings, load_settings


@pytest.fixture
def clean_env(monkeypatch):
    for name in ENV_OVERRIDES:
        monkeypatch.delenv(name, raising=False)
    return monkeypatch


def test_builtins_are_admissible():
    for name in BUILTIN_MATRICES:
        m = builtin_matrix(name)
        assert m.name == name
        assert m.is_admissible()


def test_resolve_builtin_and_sum(m820):
    assert resolve_matrix("8_20") == m820
    total = resolve_matrix("8_20#8_20")
    assert total.psi == connected_sum(m820, m820).psi
    assert total.name == "8_20#8_20"
    assert resolve_matrix(" 8_20 # unknot ").psi == m820.psi


def test_resolve_inline():
    m = resolve_matrix("[[0, 1], [0, 0]]")
    assert m.psi == ((0, 1), (0, 0))
    assert m.epsilon == -1
    assert m.name == "[[0,1],[0,0]]"
    assert resolve_matrix("[[1]]", epsilon=1).epsilon == 1
    assert resolve_matrix("[[1]]#[[2]]").psi == ((1, 0), (0, 2))
    with pytest.raises(LibraryError):
        resolve_matrix("[[1], [2, 3]]")
    with pytest.raises(LibraryError):
        resolve_matrix("[[1, 0.5]]")


def test_epsilon_override_replaces_stored_sign(evenq):
    assert resolve_matrix("evenq_example", epsilon=-1).epsilon == -1
    assert resolve_matrix("evenq_example").epsilon == evenq.epsilon == 1


def test_resolve_files_and_matrix_dir(tmp_path, trefoil):
    path = save_matrix_file(trefoil, tmp_path / "mine" / "knot.json")
    assert load_matrix_file(path) == trefoil
    assert resolve_matrix(str(path)) == trefoil
    assert resolve_matrix("knot", matrix_dir=tmp_path / "mine") == trefoil
    assert resolve_matrix("knot.json", matrix_dir=tmp_path / "mine") == trefoil


def test_unknown_matrix_suggests_names(tmp_path):
    with pytest.raises(UnknownMatrixError) as info:
        resolve_matrix("8_2O")
    assert "8_20" in info.value.suggestions
    with pytest.raises(UnknownMatrixError) as info:
        resolve_matrix("trefoi")
    assert info.value.suggestions == ["trefoil"]
    with pytest.raises(LibraryError):
        resolve_matrix("")
    with pytest.raises(LibraryError):
        resolve_matrix("8_20#")


def test_bad_matrix_files(tmp_path):
    with pytest.raises(LibraryError):
        load_matrix_file(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(LibraryError):
        load_matrix_file(broken)
    partial = tmp_path / "partial.json"
    partial.write_text(json.dumps({"name": "x", "rows": [[1]]}))
    with pytest.raises(LibraryError, match="epsilon"):
        load_matrix_file(partial)


def test_list_skips_unreadable_files(tmp_path):
    (tmp_path / "broken.json").write_text("[]")
    save_matrix_file(SeifertMatrix.from_rows([[0, 1], [0, 0]], -1, "hopf_band"), tmp_path / "hopf_band.json")
    names = [m.name for m in list_matrices(tmp_path)]
    assert names == list(BUILTIN_MATRICES) + ["hopf_band"]


def test_export_matches_shipped_files(tmp_path):
    written = export_builtins(tmp_path)
    assert [p.name for p in written] == [f"{name}.json" for name in BUILTIN_MATRICES]
    for path in written:
        assert path.read_text() == (PROJECT_ROOT / "matrices" / path.name).read_text()


def test_settings_defaults(clean_env, tmp_path):
    settings = load_settings(tmp_path / "absent.json")
    assert settings == Settings()
    assert load_settings().search_bound == 2


def test_settings_file_env_and_overrides(clean_env, tmp_path):
    path = tmp_path / "general.json"
    path.write_text(json.dumps({"search_bound": 3, "output_format": "CSV", "colour": "blue"}))
    settings = load_settings(path)
    assert settings.search_bound == 3
    assert settings.output_format == "csv"

    clean_env.setenv("KNOTOBS_SEARCH_BOUND", "4")
    clean_env.setenv("KNOTOBS_MATRIX_DIR", str(tmp_path))
    settings = load_settings(path)
    assert settings.search_bound == 4
    assert settings.matrix_dir == tmp_path

    settings = load_settings(path, {"search_bound": 1, "profile_resolution": None})
    assert settings.search_bound == 1
    assert settings.profile_resolution == 12


def test_settings_rejects_invalid_values(clean_env, tmp_path):
    with pytest.raises(ConfigurationError):
        load_settings(overrides={"search_bound": 0})
    with pytest.raises(ConfigurationError):
        load_settings(overrides={"numeric_precision": "many"})
    with pytest.raises(ConfigurationError):
        load_settings(overrides={"output_format": "xml"})
    with pytest.raises(ConfigurationError):
        load_settings(overrides={"colour": "blue"})
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(ConfigurationError):
        load_settings(broken)
