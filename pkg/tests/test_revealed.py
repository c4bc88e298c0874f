import itertools
import unittest
from pathlib import Path

from hypothesis import given, settings
from hypothesis import strategies as st

from justify import revealed
from justify.core import ChoiceDataset, MenuItemConstraint, TotalOrder, WeakOrder, all_menus
from justify.data import dataset as dataset_lib
from justify.errors import FitError, InputError
from justify.forward import JustifiabilityModel, generate_dataset
from justify.oracle import random_choice_function, random_model

FIXTURES = Path(__file__).resolve().parents[1] / "justify" / "fixtures"


def _read(name: str) -> ChoiceDataset:
    return dataset_lib.read_dataset(str(FIXTURES / name))


def _warp_data(ranking: str) -> ChoiceDataset:
    model = JustifiabilityModel(WeakOrder.from_ranking(ranking), (TotalOrder(tuple(ranking)),))
    return generate_dataset(model, all_menus(ranking)).with_preference(None)


class PatternTests(unittest.TestCase):
    def test_example3_cycle_and_relations(self) -> None:
        data = _read("example3.json")
        self.assertEqual(revealed.detect_cycles(data), [("a1", "a2", "b1")])
        self.assertTrue(revealed.is_chain(data, ["a1", "a2", "b1"]))
        self.assertFalse(revealed.is_chain(data, ["a2", "a1", "b1"]))
        relation, acyclic = revealed.revealed_P(data)
        self.assertEqual(relation, frozenset({("a1", "a2"), ("a2", "b1")}))
        self.assertTrue(acyclic)
        self.assertEqual(revealed.revealed_exclusions(data), [MenuItemConstraint(frozenset({"b1"}), "a1", "revealed-exclusion")])

    def test_encyclopedia_data_have_cyclic_preference(self) -> None:
        data = _read("encyclopedia_e1.json")
        relation, acyclic = revealed.revealed_P(data)
        self.assertIn(("n", "e1"), relation)
        self.assertIn(("e1", "n"), relation)
        self.assertFalse(acyclic)
        self.assertEqual(revealed.check_acyclicity(data)[0].axiom, "Acyclicity")

    def test_almost_warp_menu_reveals_exclusion(self) -> None:
        data = _read("d4.json")
        self.assertEqual(revealed.detect_cycles(data), [])
        self.assertEqual(revealed.detect_almost_warp(data), [frozenset("wxyz")])
        self.assertEqual(
            revealed.revealed_exclusions(data),
            [MenuItemConstraint(frozenset("xyz"), "w", "revealed-exclusion")],
        )

    def test_almost_warp_skips_unobserved_sub_menus(self) -> None:
        data = _read("d4.json").restrict([frozenset("wx"), frozenset("wxyz")])
        coverage = revealed.Coverage()
        self.assertEqual(revealed.detect_almost_warp(data, coverage), [])
        self.assertEqual(coverage.vacuous, 1)

    def test_warp(self) -> None:
        data = _warp_data("cab")
        self.assertTrue(revealed.satisfies_warp(data))
        self.assertEqual(revealed.warp_preference(data).ranking, ("c", "a", "b"))
        self.assertFalse(revealed.satisfies_warp(_read("d4.json")))
        with self.assertRaises(InputError):
            revealed.warp_preference(_read("d4.json"))

    def test_choice_correspondence_is_refused(self) -> None:
        data = ChoiceDataset(frozenset("ab"), {frozenset("ab"): frozenset("ab")})
        with self.assertRaises(InputError):
            revealed.fit(data)

    @given(st.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_chains_lie_in_chain_closure(self, seed) -> None:
        data = random_choice_function(seed, 5)
        closure = revealed.chain_closure(data)
        for length in (3, 4, 5):
            for sequence in itertools.permutations(sorted(data.domain), length):
                if revealed.is_chain(data, sequence):
                    pairs = set(itertools.combinations(sequence, 2))
                    self.assertTrue(pairs <= closure, sequence)


class IEATests(unittest.TestCase):
    def test_example3_passes(self) -> None:
        self.assertEqual(revealed.check_iea(_read("example3.json")), [])

    def test_encyclopedia_fails_for_both_completions(self) -> None:
        for name in ("encyclopedia_e1.json", "encyclopedia_e2.json"):
            with self.subTest(name=name):
                found = revealed.check_iea(_read(name))
                self.assertTrue(found)
                self.assertTrue(all(v.axiom == "IEA" for v in found))
                self.assertIn({"B": ["e1", "e2", "n"], "A": ["n"]}, [v.witness for v in found])

    def test_third_best_choice_fails(self) -> None:
        data = ChoiceDataset(
            frozenset("abc"),
            {
                frozenset("ab"): frozenset("a"),
                frozenset("ac"): frozenset("a"),
                frozenset("bc"): frozenset("b"),
                frozenset("abc"): frozenset("c"),
            },
        )
        self.assertTrue(revealed.check_iea(data))
        self.assertFalse(revealed.fit(data).ok)


class CanonicalModelTests(unittest.TestCase):
    def test_example3_fit(self) -> None:
        data = _read("example3.json")
        self.assertEqual(revealed.canonical_true_preference(data).ranking, ("a1", "a2", "b1"))
        result = revealed.fit(data)
        self.assertTrue(result.ok)
        self.assertEqual(result.model.justification_count, 3)
        self.assertEqual(
            {o.ranking for o in result.model.justifications},
            {("a2", "b1", "a1"), ("b1", "a1", "a2"), ("b1", "a2", "a1")},
        )
        payload = result.to_dict()
        self.assertEqual(payload["true_preference"], ["a1", "a2", "b1"])
        self.assertEqual(payload["exclusions"], [{"menu": ["b1"], "excluded": "a1"}])

    def test_implicit_model_still_reproduces(self) -> None:
        data = _read("example3.json")
        result = revealed.fit(data, enumeration_limit=2)
        self.assertTrue(result.ok)
        self.assertFalse(result.model.explicit)
        self.assertIsNone(result.model.justification_count)
        self.assertEqual(result.model.choose(["a1", "a2", "b1"]), frozenset({"a2"}))
        with self.assertRaises(InputError):
            result.model.as_model()

    def test_d4_fit(self) -> None:
        result = revealed.fit(_read("d4.json"))
        self.assertTrue(result.ok)
        self.assertEqual(result.model.true_preference.as_total_order().ranking, ("w", "x", "y", "z"))
        self.assertEqual(result.model.justification_count, 18)

    def test_encyclopedia_rejected(self) -> None:
        result = revealed.fit(_read("encyclopedia_e2.json"))
        self.assertEqual(result.status, "reject")
        self.assertTrue(result.violations)
        with self.assertRaises(FitError):
            revealed.canonical_true_preference(_read("encyclopedia_e2.json"))

    def test_warp_data_keep_every_order(self) -> None:
        result = revealed.fit(_warp_data("dcba"))
        self.assertTrue(result.ok)
        self.assertEqual(result.model.justification_count, 24)

    def test_witness_justification(self) -> None:
        constraints = [MenuItemConstraint(frozenset({"b1"}), "a1")]
        domain = ["a1", "a2", "b1"]
        found = revealed.witness_justification(constraints, "a2", {"a1", "a2"}, None, domain)
        self.assertEqual(found.ranking, ("a2", "b1", "a1"))
        self.assertIsNone(revealed.witness_justification(constraints, "a1", {"a1", "b1"}, None, domain))
        free = revealed.witness_justification([], "b", {"a", "b", "c"})
        self.assertEqual(free.ranking[0], "b")
        with self.assertRaises(InputError):
            revealed.witness_justification([], "z", {"a"})


class KnownPreferenceFitTests(unittest.TestCase):
    def test_example1(self) -> None:
        result = revealed.fit_known_preference(_read("example1_b.json"))
        self.assertTrue(result.ok)
        self.assertEqual(result.model.justification_count, 4)
        rejected = revealed.fit_known_preference(_read("example1_d.json"))
        self.assertEqual(rejected.status, "reject")
        self.assertEqual({v.axiom for v in rejected.violations}, {"IUA"})

    def test_dominance_restricts_justifications(self) -> None:
        data = _read("example2_pass.json")
        result = revealed.fit_known_preference(data, None, data.dominance)
        self.assertTrue(result.ok)
        self.assertEqual(result.model.justification_count, 3)
        self.assertTrue(all(o.prefers("y", "x") for o in result.model.justifications))


class RoundTripPropertyTests(unittest.TestCase):
    @given(st.integers(0, 10_000), st.integers(3, 5), st.integers(1, 6))
    @settings(max_examples=30, deadline=None)
    def test_generated_choice_functions_fit_back(self, seed, size, count) -> None:
        model = random_model(seed, size, count)
        data = generate_dataset(model, all_menus(model.domain)).with_preference(None)
        self.assertEqual(revealed.check_iea(data), [])
        result = revealed.fit(data)
        self.assertTrue(result.ok)
        self.assertEqual(revealed.reproduction_violations(result.model, data), [])


if __name__ == "__main__":
    unittest.main()
