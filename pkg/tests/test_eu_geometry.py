import unittest
from pathlib import Path

import numpy as np

from justify.data import dataset as dataset_lib
from justify.errors import InputError, UnsupportedSizeError
from justify.eu import geometry
from justify.eu.lottery import lottery_grid
from justify.eu.model import EUModel, Region, classification_margin, classify, model_from_dict, normalize_utility

FIXTURES = Path(__file__).resolve().parents[1] / "justify" / "fixtures"

UNIFORM = np.full(3, 1.0 / 3.0)


def _model(name: str) -> EUModel:
    return model_from_dict(dataset_lib.load_document(str(FIXTURES / name)))


class ConeTests(unittest.TestCase):
    def test_quadrant_rays(self) -> None:
        rays, lineality = geometry.cone_extreme_rays(np.eye(2), 2)
        np.testing.assert_allclose(rays, [[0.0, 1.0], [1.0, 0.0]], atol=1e-12)
        self.assertEqual(lineality.size, 0)

    def test_half_plane_has_lineality(self) -> None:
        rays, lineality = geometry.cone_extreme_rays(np.array([[1.0, 0.0]]), 2)
        self.assertEqual(lineality.shape, (1, 2))
        np.testing.assert_allclose(np.abs(lineality[0]), [0.0, 1.0], atol=1e-12)
        np.testing.assert_allclose(rays, [[1.0, 0.0]], atol=1e-12)

    def test_cone_member(self) -> None:
        generators = np.eye(2)
        self.assertTrue(geometry.cone_member(generators, np.array([1.0, 2.0])))
        self.assertFalse(geometry.cone_member(generators, np.array([-1.0, 0.0])))
        self.assertTrue(geometry.cone_member(np.zeros((0, 2)), np.zeros(2)))

    def test_reduce_directions_drops_interior_rows(self) -> None:
        reduced = geometry.reduce_directions(np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]))
        np.testing.assert_allclose(reduced, [[0.0, 1.0], [1.0, 0.0]], atol=1e-12)


class ConvexityGeometryTests(unittest.TestCase):
    def test_hull_meets_b(self) -> None:
        model = _model("fixture_f.json")
        found = geometry.co_intersect_b(model, [UNIFORM + np.array([-0.25, 0.3, -0.05])], UNIFORM)
        self.assertTrue(found.intersects)
        np.testing.assert_allclose(found.weights, [1.0])
        self.assertGreater(found.margin, geometry.EPSILON)

    def test_worse_lottery_misses_b(self) -> None:
        model = _model("fixture_f.json")
        found = geometry.co_intersect_b(model, [UNIFORM + np.array([0.15, -0.2, 0.05])], UNIFORM)
        self.assertFalse(found.intersects)
        self.assertIsNone(found.to_dict()["witness_weights"])

    def test_anchor_inside_menu(self) -> None:
        model = _model("fixture_f.json")
        with self.assertRaises(InputError):
            geometry.co_intersect_b(model, [UNIFORM.copy()], UNIFORM)
        with self.assertRaises(InputError):
            geometry.co_intersect_b(model, [], UNIFORM)


class RegionConeTests(unittest.TestCase):
    def _generators(self, rows: np.ndarray, basis: np.ndarray) -> np.ndarray:
        rays, lineality = geometry.cone_extreme_rays(rows @ basis, basis.shape[1])
        parts = [rays, lineality, -lineality] if lineality.size else [rays]
        return np.vstack(parts) @ basis.T

    def test_sampled_regions_are_convex_cones(self) -> None:
        model = _model("fixture_f.json")
        basis = geometry.tangent_basis(3)
        b_generators = self._generators(geometry.b_cone_rows(model), basis)
        w_generators = self._generators(np.vstack([model.true_utility, -model.matrix]), basis)
        rng = np.random.default_rng(17)
        found = {Region.B: [], Region.W: []}
        for _ in range(1000):
            d = basis @ rng.normal(size=2)
            d *= 0.3 / float(np.max(np.abs(d)))
            if classification_margin(model, UNIFORM, UNIFORM + d) < 1e-6:
                continue
            region = classify(model, UNIFORM, UNIFORM + d)
            if region in found:
                found[region].append(d)
        self.assertTrue(found[Region.B])
        self.assertTrue(found[Region.W])
        for region, generators in ((Region.B, b_generators), (Region.W, w_generators)):
            directions = found[region]
            for d in directions:
                self.assertTrue(geometry.cone_member(generators, d))
            for first, second in zip(directions, directions[1:]):
                a, b = rng.uniform(0.1, 1.0, size=2)
                combined = a * first + b * second
                combined *= 0.3 / float(np.max(np.abs(combined)))
                self.assertEqual(classify(model, UNIFORM, UNIFORM + combined), region)


class PolytopeTests(unittest.TestCase):
    def test_minimal_polytope_drops_redundant_vertex(self) -> None:
        minimal = geometry.minimal_polytope(_model("fixture_f.json"), UNIFORM)
        self.assertEqual(minimal.shape, (1, 3))
        np.testing.assert_allclose(minimal[0], normalize_utility([0.0, 1.0, 2.0]), atol=1e-9)

    def test_maximal_polytope_contains_model_vertices(self) -> None:
        model = _model("fixture_f.json")
        maximal = geometry.maximal_polytope(model, UNIFORM)
        self.assertGreaterEqual(maximal.shape[0], 1)
        for v in maximal:
            self.assertAlmostEqual(float(v.sum()), 0.0, places=9)
            self.assertGreaterEqual(v[2], v[0] - 1e-9)
        for m in model.vertices:
            self.assertTrue(geometry.cone_member(maximal, m))
        widened = EUModel(model.space, model.true_utility, tuple(maximal))
        self.assertEqual(geometry.compare_strictness(model, widened, UNIFORM).relation, "equal")

    def test_anchor_checks(self) -> None:
        model = _model("fixture_f.json")
        with self.assertRaises(InputError):
            geometry.maximal_polytope(model, np.array([0.5, 0.5, 0.0]))
        with self.assertRaises(UnsupportedSizeError):
            geometry.minimal_polytope(model, UNIFORM, max_prizes=2)

    def test_constructed_polytope_reproduces_sample(self) -> None:
        model = _model("fixture_f.json")
        sample = geometry.sample_b(model, UNIFORM, lottery_grid(3, 0.05))
        self.assertEqual(len(sample.points), 231)
        self.assertGreater(sample.counts()["B"], 0)
        vertices = geometry.construct_polytope(sample, model.true_utility, model.space)
        rebuilt = EUModel(model.space, model.true_utility, tuple(vertices))
        self.assertEqual(geometry.sample_mismatches(rebuilt, sample), [])

    def test_empty_sample_gives_monotone_cone(self) -> None:
        model = _model("fixture_f.json")
        sample = geometry.BSample(UNIFORM)
        vertices = geometry.construct_polytope(sample, model.true_utility, model.space)
        for v in vertices:
            self.assertGreaterEqual(v[2], v[0] - 1e-9)


class StrictnessTests(unittest.TestCase):
    def test_extra_vertex_makes_model_looser(self) -> None:
        strict, loose = _model("model_strict.json"), _model("model_loose.json")
        found = geometry.compare_strictness(strict, loose, UNIFORM)
        self.assertEqual(found.relation, "1-stricter")
        self.assertEqual(classify(strict, UNIFORM, found.witness), Region.B)
        self.assertNotEqual(classify(loose, UNIFORM, found.witness), Region.B)
        self.assertEqual(geometry.compare_strictness(loose, strict, UNIFORM).relation, "2-stricter")
        self.assertEqual(geometry.compare_strictness(strict, strict, UNIFORM).relation, "equal")

    def test_union_hull(self) -> None:
        strict, loose = _model("model_strict.json"), _model("model_loose.json")
        merged = geometry.union_hull(strict, loose)
        self.assertEqual(len(merged.vertices), 2)
        self.assertEqual(geometry.compare_strictness(merged, loose, UNIFORM).relation, "equal")

    def test_models_must_share_utility(self) -> None:
        strict = _model("model_strict.json")
        other = EUModel(strict.space, np.array([0.0, 1.0, 2.0]), strict.vertices)
        with self.assertRaises(InputError):
            geometry.compare_strictness(strict, other, UNIFORM)


if __name__ == "__main__":
    unittest.main()
