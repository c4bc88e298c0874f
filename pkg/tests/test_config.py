import json
import tempfile
import unittest
from pathlib import Path

from justify import config
from justify.errors import InputError


class SettingsTests(unittest.TestCase):
    def test_defaults(self) -> None:
        settings = config.resolve(None, {})
        self.assertEqual(settings.enumeration_limit, 7)
        self.assertEqual(settings.max_prizes, 4)
        self.assertEqual(settings.seed, 0)

    def test_yaml_file_and_env_override(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "settings.yaml"
            path.write_text("subset_cap: 6\nenumeration_limit: 5\n", encoding="utf-8")
            settings = config.resolve(str(path), {config.ENV_MAX_ENUM: "4"})
        self.assertEqual(settings.subset_cap, 6)
        self.assertEqual(settings.enumeration_limit, 4)

    def test_explicit_overrides_win(self) -> None:
        settings = config.resolve(None, {config.ENV_MAX_ENUM: "4"}, enumeration_limit=6, seed=None)
        self.assertEqual(settings.enumeration_limit, 6)
        self.assertEqual(settings.seed, 0)

    def test_json_settings_are_validated(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "settings.json"
            path.write_text(json.dumps({"grid_step": 0.3, "colour": "red"}), encoding="utf-8")
            _, errors = config.load_and_validate(str(path), {})
        self.assertIn("unknown setting 'colour'", errors)
        self.assertIn("grid_step must divide 1", errors)

    def test_bad_env_value(self) -> None:
        with self.assertRaises(InputError) as ctx:
            config.resolve(None, {config.ENV_MAX_ENUM: "many"})
        self.assertTrue(any(config.ENV_MAX_ENUM in d for d in ctx.exception.defects))

    def test_prize_cap(self) -> None:
        errors = config.validate_settings(config.normalize_settings({"max_prizes": 5}))
        self.assertTrue(any("max_prizes" in e for e in errors))
        with self.assertRaises(InputError):
            config.resolve(None, {}, max_prizes=0)


if __name__ == "__main__":
    unittest.main()
