import numpy as np
from django.test import SimpleTestCase

from designs.contrasts import block_contrast_table, contrast_table
from designs.exceptions import DegenerateOrder


class ContrastTableTestCase(SimpleTestCase):
    def test_three_levels(self):
        table = contrast_table(3)
        np.testing.assert_allclose(table.values[0], [1, 1, 1])
        np.testing.assert_allclose(table.values[1], np.sqrt(1.5) * np.array([-1, 0, 1]), atol=1e-12)
        np.testing.assert_allclose(table.values[2], np.sqrt(0.5) * np.array([1, -2, 1]), atol=1e-12)

    def test_orthogonality_up_to_nine_levels(self):
        for q in range(2, 10):
            with self.subTest(q=q):
                gram = contrast_table(q).gram()
                np.testing.assert_allclose(gram, q * np.eye(q), atol=1e-10)

    def test_positive_leading_coefficient(self):
        z = np.arange(1, 6)
        table = contrast_table(5)
        for u in range(1, 5):
            coefficients = np.polyfit(z, table.values[u], u)
            self.assertGreater(coefficients[0], 0)

    def test_closed_forms(self):
        for q in (3, 5, 7):
            z = np.arange(1, q + 1, dtype=float)
            x = z - (q + 1) / 2
            closed = [
                x,
                x ** 2 - (q ** 2 - 1) / 12,
                x ** 3 - x * (3 * q ** 2 - 7) / 20,
                x ** 4 - x ** 2 * (3 * q ** 2 - 13) / 14 + 3 * (q ** 2 - 1) * (q ** 2 - 9) / 560,
            ]
            table = contrast_table(q)
            for u, poly in enumerate(closed[:q - 1], start=1):
                with self.subTest(q=q, u=u):
                    expected = poly * np.sqrt(q / np.sum(poly ** 2))
                    np.testing.assert_allclose(table.values[u], expected, atol=1e-10)

    def test_block_contrasts(self):
        np.testing.assert_allclose(block_contrast_table(2).values[1], [-1, 1], atol=1e-12)
        table = block_contrast_table(3)
        np.testing.assert_allclose(table.values[1], np.sqrt(1.5) * np.array([-1, 0, 1]), atol=1e-12)
        np.testing.assert_allclose(table.values[2], np.sqrt(0.5) * np.array([1, -2, 1]), atol=1e-12)
        self.assertAlmostEqual(table(1, 3), np.sqrt(1.5), places=12)

    def test_degenerate(self):
        with self.assertRaises(DegenerateOrder):
            contrast_table(1)
