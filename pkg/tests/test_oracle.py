import unittest
from pathlib import Path

from justify import oracle
from justify.core import TotalOrder
from justify.data import dataset as dataset_lib
from justify.errors import InputError, UnsupportedSizeError
from justify.forward import is_d_monotone

FIXTURES = Path(__file__).resolve().parents[1] / "justify" / "fixtures"


class EnumerationTests(unittest.TestCase):
    def test_counts(self) -> None:
        self.assertEqual(len(list(oracle.enumerate_orders("abcd"))), 24)
        self.assertEqual(len(list(oracle.enumerate_weak_orders("abc"))), 13)
        self.assertEqual(len(list(oracle.enumerate_choice_functions("abc"))), 24)

    def test_size_limits(self) -> None:
        with self.assertRaises(UnsupportedSizeError):
            oracle.enumerate_orders(oracle.domain_items(9))
        with self.assertRaises(InputError):
            next(oracle.enumerate_choice_functions("abcd"))


class RepresentabilityTests(unittest.TestCase):
    def test_example3_is_representable(self) -> None:
        data = dataset_lib.read_dataset(str(FIXTURES / "example3.json"))
        found = oracle.brute_force_representable(data)
        self.assertTrue(found.representable)
        self.assertTrue(found.exhaustive)
        self.assertTrue(oracle.reproduces(found.model, data))

    def test_encyclopedia_data_are_not(self) -> None:
        data = dataset_lib.read_dataset(str(FIXTURES / "encyclopedia_e1.json"))
        found = oracle.brute_force_representable(data)
        self.assertFalse(found.representable)
        self.assertTrue(found.agrees)
        self.assertIsNone(found.to_dict()["model"])


class GeneratorTests(unittest.TestCase):
    def test_random_model_is_seeded(self) -> None:
        self.assertEqual(oracle.random_model(5, 4, 3), oracle.random_model(5, 4, 3))
        self.assertEqual(len(oracle.random_model(5, 4, 3).justifications), 3)

    def test_nested_models(self) -> None:
        low, high = oracle.random_nested_models(11, 4)
        self.assertTrue(set(high.justifications) <= set(low.justifications))
        self.assertEqual(low.true_preference, high.true_preference)

    def test_random_eu_model_is_monotone(self) -> None:
        model = oracle.random_eu_model(3, 4, 2)
        space = model.space
        self.assertTrue(is_d_monotone(model.true_utility, space.dominance, "strict", space.prizes))
        self.assertLessEqual(len(model.vertices), 2)


class SweepTests(unittest.TestCase):
    def test_theorem1_exhaustive(self) -> None:
        report = oracle.sweep_theorem1()
        self.assertEqual(report.instances_checked, 144)
        self.assertTrue(report.ok)

    def test_theorem4_exhaustive(self) -> None:
        report = oracle.sweep_theorem4()
        self.assertEqual(report.instances_checked, 24)
        self.assertTrue(report.ok)
        self.assertEqual(report.to_dict()["counterexamples"], [])

    def test_random_four_item_data(self) -> None:
        report = oracle.sweep_random(domain_size=4, count=1000, seed=1)
        self.assertEqual(report.instances_checked, 1000)
        self.assertTrue(report.ok, report.counterexamples[:1])

    def test_revealed_exclusion_characterization(self) -> None:
        report = oracle.sweep_revealed_exclusion(domain_size=3)
        self.assertGreater(report.instances_checked, 0)
        self.assertTrue(report.ok, report.counterexamples[:1])

    def test_revealed_exclusion_on_four_items(self) -> None:
        report = oracle.sweep_revealed_exclusion(domain_size=4, count=200, seed=5)
        self.assertGreater(report.instances_checked, 0)
        self.assertEqual(report.seed, 5)
        self.assertTrue(report.ok, report.counterexamples[:1])

    def test_round_trip(self) -> None:
        report = oracle.sweep_round_trip(count=100, seed=2)
        self.assertEqual(report.instances_checked, 100)
        self.assertTrue(report.ok, report.counterexamples[:1])

    def test_two_setting_round_trip(self) -> None:
        report = oracle.sweep_two_setting(count=50, seed=3)
        self.assertEqual(report.instances_checked, 50)
        self.assertTrue(report.ok, report.counterexamples[:1])

    def test_subset_spot_check(self) -> None:
        report = oracle.spot_check_subsets(count=10_000, seed=4)
        self.assertEqual(report.agreements, 10_000)

    def test_second_best_on_d4(self) -> None:
        data = dataset_lib.read_dataset(str(FIXTURES / "d4.json"))
        self.assertTrue(oracle.second_best_holds(data, TotalOrder(("w", "x", "y", "z"))))
        self.assertFalse(oracle.second_best_holds(data, TotalOrder(("x", "w", "y", "z"))))


if __name__ == "__main__":
    unittest.main()
