"""Export the energy-entropy diagram of a gap-1 qubit with marker states.

Writes a CSV with the thermal boundary curve followed by labelled rows for a
few reference states (maximally mixed, ground, an inverted-population state,
and a rotated low-entropy state). Feed it to any plotting tool.
"""

import argparse
import math

import numpy as np

from isotherm.diagram import export_diagram, sample_boundary
from isotherm.gibbs import GibbsFamily
from isotherm.operators import DensityMatrix, HermitianOperator


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("-o", "--output", default="qubit_diagram.csv")
    parser.add_argument("--points", type=int, default=513)
    parser.add_argument("--beta-range", type=float, default=20.0)
    args = parser.parse_args()

    fam = GibbsFamily(HermitianOperator.diagonal([0.0, 1.0]))
    sample = sample_boundary(fam, -args.beta_range, args.beta_range, args.points)
    s3 = math.sqrt(3) * 0.2
    states = [
        ("mixed", DensityMatrix.maximally_mixed(2)),
        ("ground", DensityMatrix.diagonal([1.0, 0.0])),
        ("inverted", DensityMatrix.diagonal([0.1, 0.9])),
        ("rotated", DensityMatrix(np.array([[0.7, -s3], [-s3, 0.3]]))),
    ]
    export_diagram(sample, states, args.output)
    print(f"wrote {args.output} ({args.points} boundary points, "
          f"{len(states)} states)")


if __name__ == "__main__":
    main()
