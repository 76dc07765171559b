"""Unit tests for the message catalogs."""

import json

import pytest

from src.core.i18n import I18n


@pytest.fixture
def catalog_dir(tmp_path):
    (tmp_path / "en_US.json").write_text(json.dumps({
        "run": {"finished": "Run finished with status {status}", "starting": "start"},
        "report": {"pass": "PASS"},
    }), encoding="utf-8")
    (tmp_path / "pt_BR.json").write_text(json.dumps({
        "run": {"finished": "Execução terminou com status {status}"},
    }), encoding="utf-8")
    return str(tmp_path)


class TestI18n:
    """Lookup, fallback and catalog completeness."""

    @pytest.mark.unit
    def test_formatting(self, catalog_dir):
        i18n = I18n("en_US", catalog_dir)
        assert i18n.get("run.finished", status=2) == "Run finished with status 2"

    @pytest.mark.unit
    def test_fallback_to_english(self, catalog_dir):
        i18n = I18n("pt_BR", catalog_dir)
        assert i18n.get("run.finished", status=0) == "Execução terminou com status 0"
        assert i18n.get("report.pass") == "PASS"

    @pytest.mark.unit
    def test_unknown_language_uses_fallback(self, catalog_dir):
        i18n = I18n("xx_XX", catalog_dir)
        assert i18n.strings == {}
        assert i18n.get("run.starting") == "start"

    @pytest.mark.unit
    def test_missing_key_returns_path(self, catalog_dir):
        i18n = I18n("en_US", catalog_dir)
        assert i18n.get("report.nope") == "report.nope"
        assert "report.nope" in i18n.missing_keys

    @pytest.mark.unit
    def test_bad_placeholder_returns_template(self, catalog_dir):
        i18n = I18n("en_US", catalog_dir)
        assert i18n.get("run.finished", code=1) == "Run finished with status {status}"

    @pytest.mark.unit
    def test_invalid_json_falls_back(self, tmp_path, catalog_dir):
        (tmp_path / "de_DE.json").write_text("{not json", encoding="utf-8")
        i18n = I18n("de_DE", str(tmp_path))
        assert i18n.get("report.pass") == "PASS"

    @pytest.mark.unit
    def test_minimal_fallback_without_catalogs(self, tmp_path):
        i18n = I18n("en_US", str(tmp_path / "missing"))
        assert i18n.get("report.empty") == "(no results)"
        assert i18n.get_available_languages() == []

    @pytest.mark.unit
    def test_validate_completeness(self, catalog_dir):
        result = I18n("pt_BR", catalog_dir).validate_completeness()
        assert result["status"] == "incomplete"
        assert set(result["missing_keys"]) == {"run.starting", "report"}


class TestShippedCatalogs:
    """The catalogs under i18n/."""

    @pytest.mark.unit
    def test_languages_available(self):
        assert {"en_US", "pt_BR"} <= set(I18n().get_available_languages())

    @pytest.mark.unit
    def test_pt_br_complete(self):
        result = I18n("pt_BR").validate_completeness()
        assert result["status"] == "complete", result["missing_keys"]

    @pytest.mark.unit
    @pytest.mark.parametrize("key,kwargs", [
        ("report.title_analysis", {"subgroup": "Z3", "group": "S3"}),
        ("report.spectrum_header", {"points": 8}),
        ("report.verification_line", {"status": "PASS"}),
        ("run.unknown_command", {"command": "x"}),
    ])
    def test_placeholders_filled(self, key, kwargs):
        for language in ("en_US", "pt_BR"):
            text = I18n(language).get(key, **kwargs)
            assert "{" not in text
            assert text != key
