import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from justify.core import DominanceRelation
from justify.errors import InputError
from justify.eu.lottery import (
    PrizeSpace,
    as_lottery,
    contains,
    dedupe,
    degenerate,
    fosd,
    is_interior,
    lottery_grid,
    mix,
)


def _space() -> PrizeSpace:
    return PrizeSpace(("z0", "z1", "z2"), DominanceRelation.from_pairs([["z2", "z0"]]))


class PrizeSpaceTests(unittest.TestCase):
    def test_needs_a_dominance_pair(self) -> None:
        with self.assertRaises(InputError) as ctx:
            PrizeSpace(("z0", "z0"), DominanceRelation())
        self.assertIn("prizes must be distinct", ctx.exception.defects)
        self.assertIn("at least one pair of prizes must be dominance-ranked", ctx.exception.defects)

    def test_from_dict_and_monotone_rows(self) -> None:
        space = PrizeSpace.from_dict({"prizes": ["z0", "z1", "z2"], "prize_dominance": [["z2", "z0"]]})
        self.assertEqual(space, _space())
        np.testing.assert_array_equal(space.monotone_rows(), [[-1.0, 0.0, 1.0]])
        with self.assertRaises(InputError):
            space.index("z9")


class LotteryTests(unittest.TestCase):
    def test_as_lottery_validates(self) -> None:
        np.testing.assert_allclose(as_lottery([0.5, 0.5, 0.0], 3), [0.5, 0.5, 0.0])
        with self.assertRaises(InputError):
            as_lottery([0.5, 0.5], 3)
        with self.assertRaises(InputError):
            as_lottery([1.5, -0.5, 0.0], 3)
        with self.assertRaises(InputError):
            as_lottery([0.5, 0.4, 0.0], 3)

    def test_grid(self) -> None:
        grid = lottery_grid(3, 0.5)
        self.assertEqual(grid.shape, (6, 3))
        np.testing.assert_allclose(grid.sum(axis=1), np.ones(6))
        self.assertEqual(lottery_grid(4, 0.1).shape[0], 286)
        with self.assertRaises(InputError):
            lottery_grid(3, 0.3)

    def test_membership_and_dedupe(self) -> None:
        p = np.array([0.2, 0.3, 0.5])
        menu = [p, p + 1e-12 * np.array([1, -1, 0]), degenerate(_space(), "z1")]
        self.assertEqual(len(dedupe(menu)), 2)
        self.assertTrue(contains(menu, np.array([0.0, 1.0, 0.0])))
        self.assertTrue(is_interior(p))
        self.assertFalse(is_interior(degenerate(_space(), "z0")))

    def test_mix(self) -> None:
        mixed = mix(0.5, [np.array([0.0, 1.0, 0.0])], np.array([1.0, 0.0, 0.0]))
        np.testing.assert_allclose(mixed[0], [0.5, 0.5, 0.0])
        with self.assertRaises(InputError):
            mix(1.5, [], np.zeros(3))


class DominanceTests(unittest.TestCase):
    def test_moving_mass_up_dominates(self) -> None:
        space = _space()
        self.assertTrue(fosd(np.array([0.0, 0.0, 1.0]), np.array([0.1, 0.0, 0.9]), space))
        self.assertFalse(fosd(np.array([0.1, 0.0, 0.9]), np.array([0.0, 0.0, 1.0]), space))

    def test_unranked_prizes_do_not_dominate(self) -> None:
        space = _space()
        self.assertFalse(fosd(np.array([0.0, 0.0, 1.0]), np.array([0.0, 1.0, 0.0]), space))
        self.assertFalse(fosd(np.array([0.2, 0.3, 0.5]), np.array([0.2, 0.3, 0.5]), space))
        with self.assertRaises(InputError):
            fosd(np.ones(2) / 2, np.ones(3) / 3, space)

    @given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(0.01, 1.0))
    @settings(max_examples=60, deadline=None)
    def test_shifting_worst_to_best_dominates(self, a, b, share) -> None:
        p = np.array([a + 0.1, b + 0.1, 0.1])
        p = p / p.sum()
        q = p.copy()
        moved = share * q[0]
        q[0] -= moved
        q[2] += moved
        self.assertTrue(fosd(q, p, _space()))


if __name__ == "__main__":
    unittest.main()
