#!/usr/bin/env python3
"""Shot-noise scaling study: reconstruction error versus shot budget.

Runs the full tomography pipeline on one channel at several shot budgets,
over an ensemble of seeds, and prints median/quartile Frobenius errors of
the reconstructed Choi matrix against the exact one.
"""

import argparse
import json

import numpy as np

from choiforge.channels import kraus_to_choi, zoo_channel
from choiforge.linalg import frobenius_distance
from choiforge.tomography import OpaqueChannel, TomographyConfig, run_tomography


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--channel", default="depolarizing", help="zoo channel name")
    parser.add_argument(
        "--params", type=float, nargs="*", default=[0.3], help="channel parameters"
    )
    parser.add_argument("--dim", type=int, default=2, help="channel dimension")
    parser.add_argument(
        "--shots",
        type=int,
        nargs="+",
        default=[10**3, 10**4, 10**5, 10**6],
        help="shot budgets to sweep",
    )
    parser.add_argument("--seeds", type=int, default=20, help="ensemble size")
    parser.add_argument("--json", action="store_true", help="emit machine-readable JSON")
    return parser.parse_args()


def main():
    args = parse_args()
    truth_kraus = zoo_channel(args.channel, args.params, args.dim)
    truth = kraus_to_choi(truth_kraus)
    channel = OpaqueChannel.from_kraus(truth_kraus)

    rows = []
    for shots in args.shots:
        errors = sorted(
            frobenius_distance(
                run_tomography(
                    channel, TomographyConfig(shots=shots, seed=seed)
                ).estimated_choi.matrix,
                truth.matrix,
            )
            for seed in range(args.seeds)
        )
        quartiles = np.percentile(errors, [25, 50, 75])
        rows.append(
            {
                "shots": shots,
                "q25": quartiles[0],
                "median": quartiles[1],
                "q75": quartiles[2],
                "sqrt_scaled": quartiles[1] * np.sqrt(shots),
            }
        )

    if args.json:
        print(json.dumps({"channel": args.channel, "params": args.params, "rows": rows}, indent=2))
        return

    print(f"channel: {args.channel} {args.params}, dim {args.dim}, {args.seeds} seeds")
    print(f"{'shots':>10} {'q25':>12} {'median':>12} {'q75':>12} {'median*sqrt(N)':>16}")
    for row in rows:
        print(
            f"{row['shots']:>10} {row['q25']:>12.5f} {row['median']:>12.5f} "
            f"{row['q75']:>12.5f} {row['sqrt_scaled']:>16.3f}"
        )


if __name__ == "__main__":
    main()
