"""Show that k(k+1)/2 is the degree where synchrony of the two added nodes can break.

For k = 2 and 3, random block-invariant polynomials one degree below the
bound keep y0 = y1 invariant, while the power-sum polynomial at the bound
separates them.  The even-minus-odd difference is divided by the
Vandermonde product to exhibit the factor S.

    python scripts/degree_bound_demo.py [--samples 20] [--seed 0]
"""

import argparse
import random

from hypernet.admissible import random_invariant_polynomial
from hypernet.synchrony import augmented_schema, even_odd_difference, power_sum, vandermonde_quotient


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    rng = random.Random(a.seed)
    for k in (2, 3):
        bound = k * (k + 1) // 2
        sch = augmented_schema(k)
        zero = sum(even_odd_difference(random_invariant_polynomial(sch, bound - 1, rng, n_terms=8,
                                                                   min_degree=bound - 1), k).is_zero()
                   for _ in range(a.samples))
        diff = even_odd_difference(power_sum(k).components[0], k)
        S = vandermonde_quotient(power_sum(k), k)
        print(f"k={k}: bound {bound}")
        print(f"  degree {bound - 1}: {zero}/{a.samples} random invariant polynomials give y0' - y1' = 0 on y0 = y1")
        print(f"  power sum (degree {bound}): y0' - y1' = {diff}")
        print(f"  factor S after dividing by the Vandermonde product: {S}")


if __name__ == "__main__":
    main()
