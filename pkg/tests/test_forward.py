import unittest
from pathlib import Path

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from justify import axioms
from justify.core import DominanceRelation, TotalOrder, WeakOrder, all_menus
from justify.data import dataset as dataset_lib
from justify.errors import InputError
from justify.forward import (
    JustifiabilityModel,
    choose,
    generate_dataset,
    is_d_monotone,
    justified_set,
    model_from_dict,
)
from justify.oracle import random_model

FIXTURES = Path(__file__).resolve().parents[1] / "justify" / "fixtures"


def _load_model(name: str) -> JustifiabilityModel:
    return model_from_dict(dataset_lib.load_document(str(FIXTURES / name)))


class ForwardTests(unittest.TestCase):
    def test_model_reproduces_example3(self) -> None:
        model = _load_model("snyder_model.json")
        data = dataset_lib.read_dataset(str(FIXTURES / "example3.json"))
        for menu in data.menus:
            self.assertEqual(choose(model, menu), data.observations[menu])
        self.assertEqual(justified_set(model, ["a1", "a2", "b1"]), frozenset({"a2", "b1"}))

    def test_choice_correspondence_from_tied_preference(self) -> None:
        pref = WeakOrder.from_lists([["a", "b"], ["c"]])
        model = JustifiabilityModel(pref, (TotalOrder(("a", "b", "c")), TotalOrder(("b", "c", "a"))))
        self.assertEqual(choose(model, "abc"), frozenset("ab"))
        self.assertEqual(choose(model, "ac"), frozenset("a"))

    def test_model_requires_justifications_on_domain(self) -> None:
        pref = WeakOrder.from_ranking("ab")
        with self.assertRaises(InputError):
            JustifiabilityModel(pref, ())
        with self.assertRaises(InputError):
            JustifiabilityModel(pref, (TotalOrder(("a", "b", "c")),))

    def test_menu_outside_domain(self) -> None:
        model = _load_model("snyder_model.json")
        with self.assertRaises(InputError):
            choose(model, ["a1", "zz"])
        with self.assertRaises(InputError):
            choose(model, [])

    def test_model_from_dict_errors(self) -> None:
        with self.assertRaises(InputError) as ctx:
            model_from_dict({"true_preference": [], "justifications": "abc"})
        self.assertEqual(len(ctx.exception.defects), 2)

    def test_generate_dataset_keeps_preference(self) -> None:
        model = _load_model("snyder_model.json")
        data = generate_dataset(model, all_menus(model.domain))
        self.assertEqual(data.true_preference, model.true_preference)
        self.assertEqual(data.single(["a1", "a2", "b1"]), "a2")
        self.assertEqual(model.to_dict()["true_preference"], [["a1"], ["a2"], ["b1"]])


class MonotonicityTests(unittest.TestCase):
    def setUp(self) -> None:
        self.dominance = DominanceRelation.from_pairs([["z2", "z0"]])

    def test_orders_and_vectors(self) -> None:
        self.assertTrue(is_d_monotone(TotalOrder(("z2", "z1", "z0")), self.dominance))
        self.assertFalse(is_d_monotone(TotalOrder(("z0", "z2", "z1")), self.dominance))
        self.assertTrue(is_d_monotone(WeakOrder.from_lists([["z0", "z2"], ["z1"]]), self.dominance, "weak"))
        prizes = ["z0", "z1", "z2"]
        self.assertTrue(is_d_monotone(np.array([0.0, 5.0, 0.0]), self.dominance, "weak", prizes))
        self.assertFalse(is_d_monotone(np.array([0.0, 5.0, 0.0]), self.dominance, "strict", prizes))
        self.assertTrue(is_d_monotone({"z0": 0, "z1": 9, "z2": 1}, self.dominance))

    def test_vector_needs_prizes(self) -> None:
        with self.assertRaises(InputError):
            is_d_monotone([1.0, 2.0, 3.0], self.dominance)
        with self.assertRaises(InputError):
            is_d_monotone([1.0, 2.0, 3.0], self.dominance, "loose", ["z0", "z1", "z2"])

    def test_no_dominance_is_vacuous(self) -> None:
        self.assertTrue(is_d_monotone(TotalOrder(("a", "b")), None))


class ForwardPropertyTests(unittest.TestCase):
    @given(st.integers(0, 10_000), st.integers(3, 4), st.integers(1, 6))
    @settings(max_examples=40, deadline=None)
    def test_generated_data_satisfy_known_preference_axioms(self, seed, size, count) -> None:
        model = random_model(seed, size, count)
        data = generate_dataset(model, all_menus(model.domain))
        self.assertEqual(axioms.check_optimization(data), [])
        self.assertEqual(axioms.check_iua(data), [])


if __name__ == "__main__":
    unittest.main()
