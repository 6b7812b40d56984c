"""Joint equilibration of two qubits: work released vs temperature mismatch.

Holds one qubit at beta = 2 and sweeps the other's inverse temperature,
printing the joint temperature, the work released by the minimum-energy
(iso-entropic) protocol, and the entropy produced by the maximum-entropy
(iso-energetic) one. Both vanish when the temperatures agree.
"""

import argparse

import numpy as np

from isotherm.equilibrium import equilibrate_isoenergetic, equilibrate_isoentropic
from isotherm.gibbs import GibbsFamily, gibbs_state
from isotherm.operators import HermitianOperator


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--beta-fixed", type=float, default=2.0)
    parser.add_argument("--beta-min", type=float, default=0.25)
    parser.add_argument("--beta-max", type=float, default=8.0)
    parser.add_argument("--steps", type=int, default=25)
    args = parser.parse_args()

    fam = GibbsFamily(HermitianOperator.diagonal([0.0, 1.0]))
    fixed = gibbs_state(fam, args.beta_fixed)
    print("beta_other,beta_joint_S,work_released,beta_joint_E,entropy_produced")
    for beta in np.geomspace(args.beta_min, args.beta_max, args.steps):
        pairs = [(fixed, fam), (gibbs_state(fam, float(beta)), fam)]
        out_s = equilibrate_isoentropic(pairs)
        out_e = equilibrate_isoenergetic(pairs)
        print(f"{beta:.6g},{out_s.beta_joint:.10g},{out_s.work_released:.10g},"
              f"{out_e.beta_joint:.10g},{out_e.entropy_produced:.10g}")


if __name__ == "__main__":
    main()
