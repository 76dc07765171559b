"""Message catalog for ssb-sectors reports and log lines."""

import json
import os
from typing import Dict, List, Optional

from .config import log

_CATALOG_DIR = os.path.join(
    os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))), "i18n"
)


class I18n:
    """Language catalog with en_US fallback."""

    def __init__(self, language: str = "en_US", catalog_dir: Optional[str] = None):
        self.language = language
        self.fallback_language = "en_US"
        self.catalog_dir = catalog_dir or _CATALOG_DIR
        self.strings: Dict = {}
        self.fallback_strings: Dict = {}
        self.missing_keys = set()
        self.load_language()

    def load_language(self):
        """Load language strings, then the fallback catalog"""
        success = self._load_language_file(self.language)

        if self.language != self.fallback_language:
            if not self._load_language_file(self.fallback_language):
                log(f"⚠️  Fallback language {self.fallback_language} not available")

        if not success and not self.fallback_strings:
            log("❌ No language files found, using minimal hardcoded strings")
            self._load_minimal_fallback()

    def _load_language_file(self, lang: str) -> bool:
        lang_file = os.path.join(self.catalog_dir, f"{lang}.json")
        if not os.path.exists(lang_file):
            if lang == self.language:
                log(f"⚠️  Language file not found: {lang_file}")
            return False
        try:
            with open(lang_file, 'r', encoding='utf-8') as f:
                loaded = json.load(f)
        except json.JSONDecodeError as e:
            log(f"❌ Invalid JSON in {lang} language file: {e}")
            return False
        except OSError as e:
            log(f"❌ Error loading {lang} language file: {e}")
            return False

        if lang == self.language:
            self.strings = loaded
        else:
            self.fallback_strings = loaded
        return True

    def _load_minimal_fallback(self):
        self.fallback_strings = {
            "run": {
                "starting": "=== SSB SECTORS RUN STARTING ===",
                "finished": "Run finished with status {status}",
                "input_error": "Input error",
                "verification_failed": "Verification failed",
            },
            "report": {
                "title_analysis": "Sector analysis",
                "title_measurement": "Measurement scenario",
                "empty": "(no results)",
            },
        }

    def get(self, key_path: str, *args, **kwargs) -> str:
        """Get localized string by dot-separated key path"""
        value = self._get_from_dict(self.strings, key_path)

        if value is None and self.fallback_strings:
            value = self._get_from_dict(self.fallback_strings, key_path)

        if value is None:
            if key_path not in self.missing_keys:
                log(f"⚠️  Missing translation key: {key_path}")
                self.missing_keys.add(key_path)
            return key_path

        try:
            if args:
                return value.format(*args)
            if kwargs:
                return value.format(**kwargs)
            return value
        except (ValueError, KeyError, IndexError) as e:
            log(f"⚠️  Error formatting string '{key_path}': {e}")
            return value

    @staticmethod
    def _get_from_dict(strings_dict: dict, key_path: str):
        value = strings_dict
        for key in key_path.split('.'):
            if not isinstance(value, dict) or key not in value:
                return None
            value = value[key]
        return value

    def get_available_languages(self) -> List[str]:
        """List language codes that have a catalog file"""
        if not os.path.isdir(self.catalog_dir):
            return []
        return sorted(f[:-5] for f in os.listdir(self.catalog_dir) if f.endswith('.json'))

    def validate_completeness(self) -> Dict:
        """Compare the current catalog against the fallback"""
        if not self.fallback_strings:
            return {"status": "no_fallback", "missing_keys": []}

        missing_keys: List[str] = []
        self._compare_dicts(self.fallback_strings, self.strings, "", missing_keys)
        total = self._count_keys(self.fallback_strings)
        completion = 100.0 if total == 0 else round((total - len(missing_keys)) / total * 100, 2)
        return {
            "status": "complete" if not missing_keys else "incomplete",
            "missing_keys": missing_keys,
            "completion_percentage": completion,
        }

    def _compare_dicts(self, reference: dict, target: dict, prefix: str, missing: list):
        for key, value in reference.items():
            current_path = f"{prefix}.{key}" if prefix else key
            if key not in target:
                missing.append(current_path)
            elif isinstance(value, dict) and isinstance(target.get(key), dict):
                self._compare_dicts(value, target[key], current_path, missing)

    def _count_keys(self, d: dict) -> int:
        return sum(self._count_keys(v) if isinstance(v, dict) else 1 for v in d.values())
