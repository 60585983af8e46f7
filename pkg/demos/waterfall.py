"""Frame-error-rate waterfall for the whole decoder family.

Sweeps Eb/N0 on the rate-1/2 (2304, 1152) quasi-cyclic code and prints
one FER column per decoder. The point of the exercise: the exact
rescanning column decoder, the three-min vector decoder, and the
simplified vector decoder sit on top of each other, and both match the
row-layered baseline. Error performance is not where the schedules
differ; iteration count and hardware cost are (see convergence.py and
census_table.py).

Runs in about a minute with 8 workers.
"""

from ldpcsim import DecodeConfig, FixedPointFormat, SimConfig, resolve_code, run_fer_sweep

SNRS = (3.0, 3.5, 4.0, 4.5)
FMT = FixedPointFormat(step=1.5)

VARIANTS = {
    "row": ("row", DecodeConfig(max_iterations=20, fmt=FMT)),
    "col-exact": ("col-original",
                  DecodeConfig(max_iterations=20, mode="exact",
                               vector_capacity=None, fmt=FMT)),
    "three-min": ("col-incremental",
                  DecodeConfig(max_iterations=20, mode="three_min", fmt=FMT)),
    "simplified": ("col-incremental",
                   DecodeConfig(max_iterations=20, mode="simplified", fmt=FMT)),
}


def main():
    matrix = resolve_code("wimax-r12")
    print(f"code: (n={matrix.n}, k={matrix.n - matrix.m}), 4-bit messages, "
          f"step {FMT.step}, 20 iterations max")

    results = {}
    for name, (decoder, decode) in VARIANTS.items():
        cfg = SimConfig(code="wimax-r12", decoder=decoder, decode=decode,
                        snr_points=SNRS, min_frame_errors=40,
                        max_frames=4000, master_seed=7, workers=8)
        results[name] = run_fer_sweep(cfg, matrix=matrix)
        print(f"  swept {name}")

    header = "Eb/N0 " + "".join(f"{name:>12}" for name in VARIANTS)
    print()
    print(header)
    for i, snr in enumerate(SNRS):
        row = f"{snr:5.1f} "
        for name in VARIANTS:
            row += f"{results[name][i].fer:12.2e}"
        print(row)

    print()
    print("avg iterations at the last point:")
    for name in VARIANTS:
        print(f"  {name:<12} {results[name][-1].avg_iter:.3f}")


if __name__ == "__main__":
    main()
