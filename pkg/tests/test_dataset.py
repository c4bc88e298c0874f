import json
import tempfile
import unittest
from pathlib import Path

from justify.core import WeakOrder
from justify.data import dataset as dataset_lib
from justify.errors import InputError

FIXTURES = Path(__file__).resolve().parents[1] / "justify" / "fixtures"


class DatasetValidationTests(unittest.TestCase):
    def test_fixture_is_valid(self) -> None:
        raw, errors = dataset_lib.load_and_validate(str(FIXTURES / "example1_b.json"))
        self.assertFalse(errors)
        self.assertEqual(raw["domain"], ["a", "b", "d"])

    def test_validate_reports_every_defect(self) -> None:
        raw = {
            "domain": ["a", "b"],
            "observations": [
                {"menu": ["a", "b"], "choice": ["c"]},
                {"menu": ["a", "b"], "choice": ["b"]},
                {"menu": ["a", "z"], "choice": ["a"]},
                {"menu": [], "choice": []},
            ],
            "true_preference": [["a"]],
            "dominance": [["a", "b"], ["b", "a"]],
        }
        errors = dataset_lib.validate_dataset(raw)
        self.assertIn("menu {a,b}: choice outside menu", errors)
        self.assertIn("menu {a,b}: contradictory duplicate observations", errors)
        self.assertIn("menu {a,z}: items outside the domain", errors)
        self.assertIn("true_preference tiers must partition the domain", errors)
        self.assertTrue(any(e.startswith("observation #3") for e in errors))
        self.assertTrue(any(e.startswith("dominance:") for e in errors))

    def test_domain_is_inferred(self) -> None:
        data = dataset_lib.parse_dataset({"observations": [{"menu": ["x", "y"], "choice": ["y"]}]})
        self.assertEqual(data.domain, frozenset({"x", "y"}))
        self.assertIsNone(data.true_preference)

    def test_parse_rejects_invalid(self) -> None:
        with self.assertRaises(InputError) as ctx:
            dataset_lib.parse_dataset({"domain": "abc", "observations": []})
        self.assertIn("domain must be a list of nonempty strings", ctx.exception.defects)

    def test_yaml_and_bad_json(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            yaml_path = Path(tmp) / "data.yaml"
            yaml_path.write_text(
                "domain: [a, b]\nobservations:\n  - menu: [a, b]\n    choice: [b]\ntrue_preference: [[b], [a]]\n",
                encoding="utf-8",
            )
            data = dataset_lib.read_dataset(str(yaml_path))
            bad = Path(tmp) / "bad.json"
            bad.write_text("{not json", encoding="utf-8")
            with self.assertRaises(InputError):
                dataset_lib.read_dataset(str(bad))
            with self.assertRaises(InputError):
                dataset_lib.read_dataset(str(Path(tmp) / "missing.json"))
        self.assertEqual(data.single(["a", "b"]), "b")
        self.assertEqual(data.true_preference.to_list(), [["b"], ["a"]])

    def test_write_dataset(self) -> None:
        data = dataset_lib.read_dataset(str(FIXTURES / "example2_pass.json"))
        with tempfile.TemporaryDirectory() as tmp:
            out = dataset_lib.write_dataset(data, str(Path(tmp) / "copy.json"))
            payload = json.loads(out.read_text(encoding="utf-8"))
        self.assertEqual(payload["dominance"], [["y", "x"]])
        self.assertEqual(len(payload["observations"]), 2)


class FlagParsingTests(unittest.TestCase):
    def test_parse_tiers(self) -> None:
        pref = dataset_lib.parse_tiers("a~b > c")
        self.assertEqual(pref, WeakOrder.from_lists([["a", "b"], ["c"]]))
        with self.assertRaises(InputError):
            dataset_lib.parse_tiers("a>>b")

    def test_parse_dominance(self) -> None:
        dominance = dataset_lib.parse_dominance("x>y, y>z")
        self.assertTrue(dominance.dominates("x", "z"))
        with self.assertRaises(InputError):
            dataset_lib.parse_dominance("x>y>z")

    def test_parse_menu(self) -> None:
        self.assertEqual(dataset_lib.parse_menu("a, b,,c"), frozenset("abc"))
        with self.assertRaises(InputError):
            dataset_lib.parse_menu(" , ")


if __name__ == "__main__":
    unittest.main()
