import unittest
from pathlib import Path

from justify import axioms
from justify.axioms import Coverage
from justify.core import ChoiceDataset, MenuItemConstraint, WeakOrder
from justify.data import dataset as dataset_lib
from justify.errors import InputError

FIXTURES = Path(__file__).resolve().parents[1] / "justify" / "fixtures"


def _read(name: str) -> ChoiceDataset:
    return dataset_lib.read_dataset(str(FIXTURES / name))


class KnownPreferenceTests(unittest.TestCase):
    def test_iua_passes_when_b_is_chosen_from_bd(self) -> None:
        data = _read("example1_b.json")
        self.assertEqual(axioms.check_optimization(data), [])
        self.assertEqual(axioms.check_iua(data), [])

    def test_iua_fails_when_d_is_chosen_from_bd(self) -> None:
        data = _read("example1_d.json")
        witnesses = [v.witness for v in axioms.check_iua(data)]
        self.assertIn({"A": ["a", "b", "d"], "a": "a", "B": ["a", "b", "d"]}, witnesses)
        self.assertIn({"A": ["b", "d"], "a": "b", "B": ["a", "b", "d"]}, witnesses)

    def test_optimization_flags_non_indifferent_choices(self) -> None:
        data = ChoiceDataset(frozenset("ab"), {frozenset("ab"): frozenset("ab")}, WeakOrder.from_ranking("ab"))
        found = axioms.check_optimization(data)
        self.assertEqual(len(found), 1)
        self.assertEqual(found[0].witness, {"A": ["a", "b"], "items": ["a", "b"]})
        tied = data.with_preference(WeakOrder.from_lists([["a", "b"]]))
        self.assertEqual(axioms.check_optimization(tied), [])

    def test_iua_counts_unobserved_sub_menus(self) -> None:
        data = ChoiceDataset(frozenset("abc"), {frozenset("abc"): frozenset("b")}, WeakOrder.from_ranking("abc"))
        coverage = Coverage()
        self.assertEqual(axioms.check_iua(data, None, coverage), [])
        self.assertEqual(coverage.vacuous, 1)
        self.assertEqual(coverage.notes, ["IUA: {b,c} unobserved"])

    def test_missing_preference(self) -> None:
        data = _read("example3.json")
        with self.assertRaises(InputError):
            axioms.check_iua(data)
        with self.assertRaises(InputError):
            axioms.check_iua(data, WeakOrder.from_ranking("ab"))

    def test_exclusion_and_underline(self) -> None:
        data = _read("example1_b.json")
        self.assertTrue(axioms.excludes(data, None, {"b", "d"}, "a"))
        self.assertFalse(axioms.excludes(data, None, {"a"}, "b"))
        self.assertTrue(axioms.excludes_from_below(data, None, {"b", "d"}, "a"))
        self.assertEqual(axioms.underline_set(data, None, {"a", "b", "d"}), frozenset({"b", "d"}))
        with self.assertRaises(InputError):
            axioms.excludes(data, None, {"a", "b"}, "a")

    def test_unobserved_exclusion_is_unknown(self) -> None:
        data = ChoiceDataset(frozenset("abc"), {frozenset("ab"): frozenset("a")}, WeakOrder.from_ranking("abc"))
        self.assertIsNone(axioms.excludes(data, None, {"b"}, "c"))
        self.assertIsNone(axioms.underline_set(data, None, {"b", "c"}))

    def test_exclusion_constraints(self) -> None:
        data = _read("example3.json")
        pref = WeakOrder.from_ranking(["a1", "a2", "b1"])
        self.assertEqual(
            axioms.exclusion_constraints(data, pref),
            [MenuItemConstraint(frozenset({"b1"}), "a1"), MenuItemConstraint(frozenset({"a2", "b1"}), "a1")],
        )
        below = axioms.exclusion_from_below_constraints(_read("example1_b.json"))
        self.assertEqual(below, [MenuItemConstraint(frozenset({"b", "d"}), "a", "exclusion-from-below")])


class DominanceAxiomTests(unittest.TestCase):
    def test_isa_passes_without_compromise(self) -> None:
        data = _read("example2_pass.json")
        self.assertEqual(axioms.submaximal_set(data, None, data.dominance, {"x", "y", "z"}), frozenset({"x"}))
        self.assertEqual(axioms.check_isa(data), [])

    def test_isa_fails_when_compromise_follows_decoy(self) -> None:
        data = _read("example2_fail.json")
        self.assertEqual(axioms.submaximal_set(data, None, data.dominance, {"x", "y", "z"}), frozenset({"x", "y"}))
        coverage = Coverage()
        found = axioms.check_isa(data, None, None, coverage)
        self.assertEqual([v.witness for v in found], [{"B": ["x", "y", "z"], "A": ["x"]}])
        self.assertEqual(coverage.vacuous, 1)

    def test_check_known_preference_dispatch(self) -> None:
        data = _read("example2_fail.json")
        results = axioms.check_known_preference(data, None, data.dominance, ("opt", "iua", "isa"))
        self.assertEqual(results["opt"][0], [])
        self.assertTrue(results["iua"][0])
        self.assertTrue(results["isa"][0])
        with self.assertRaises(InputError):
            axioms.check_known_preference(data, None, None, ("warp",))


if __name__ == "__main__":
    unittest.main()
