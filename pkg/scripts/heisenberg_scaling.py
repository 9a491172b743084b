#!/usr/bin/env python3
"""Scaling-exponent survey: fits log QFI vs log n for the four channels
under the squeezing-optimal, coherent-only and one-mode-probe strategies."""
import argparse

import gaussqfi as gq
from gaussqfi.optimizer import (
    FAMILY_COHERENT,
    FAMILY_ONE_MODE_PROBE,
    FAMILY_OPTIMAL,
    scaling_exponent,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=float, default=512.0)
    args = parser.parse_args()

    grid = [1.0]
    while grid[-1] < args.max_n:
        grid.append(grid[-1] * 2)

    channels = [gq.phase_channel(), gq.squeeze_channel(0.0),
                gq.mix_channel(), gq.twomode_squeeze_channel()]
    print(f"{'channel':<18} {'family':<18} {'exponent':>9} {'prefactor':>10}")
    for channel in channels:
        for family in (FAMILY_OPTIMAL, FAMILY_COHERENT):
            fit = scaling_exponent(channel, family, grid)
            print(f"{channel.kind:<18} {family:<18} {fit.exponent:>9.4f} "
                  f"{fit.prefactor:>10.3f}")
    for channel in channels[2:]:
        fit = scaling_exponent(channel, FAMILY_ONE_MODE_PROBE, grid)
        print(f"{channel.kind:<18} {FAMILY_ONE_MODE_PROBE:<18} {fit.exponent:>9.4f} "
              f"{fit.prefactor:>10.3f}")


if __name__ == "__main__":
    main()
