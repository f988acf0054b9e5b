"""Monte Carlo validation of the quadrature.

Simulates the receiver experiment directly (seeded, counter-based, so
every run is bit-identical) and compares the success fraction against the
Gauss-Hermite evaluation of the same probability. The z-scores hover well
inside +-4 across alphabet sizes from 2 to 10000, which is the
independent statistical evidence that the integral, the max-of-Gaussians
experiment, and their implementations all agree.

Run:  python demos/04_monte_carlo_validation.py
"""

from m_ary_channel import McConfig, q_m, simulate_q

N_SAMPLES = 200_000
BASE_SEED = 1234


def main() -> None:
    print(f"{N_SAMPLES} trials per cell, Philox-seeded; quadrature vs simulation\n")
    print("    m    x     q_hat     q_quad   std_err      z")
    worst = 0.0
    cell = 0
    for m in (2, 8, 100, 10_000):
        for x in (0.0, 1.0, 3.0):
            est = simulate_q(x, m, McConfig(n_samples=N_SAMPLES, seed=BASE_SEED + cell))
            cell += 1
            truth = q_m(x, m)
            z = abs(est.q_hat - truth) / est.std_err if est.std_err else 0.0
            worst = max(worst, z)
            print(
                f"{m:5d} {x:4.1f}  {est.q_hat:.6f}  {truth:.6f}  {est.std_err:.6f}  {z:5.2f}"
            )
    print(f"\nworst |z| = {worst:.2f} (a 4-sigma bound fails with probability < 1e-4 per cell)")
    print("rerunning this script reproduces every digit: the generator is")
    print("counter-based and the stream layout is part of the contract.")


if __name__ == "__main__":
    main()
