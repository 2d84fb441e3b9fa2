"""Cross-check the analytical operating point against the slot-level
Monte Carlo simulator, including where the decoupled model bends."""
import statistics

from qobeam import (
    MacParams,
    TimingParams,
    sector_utilization,
    simulate_sector,
    slot_durations,
    solve_markov_numeric,
)

mac = MacParams()
slots = slot_durations(TimingParams())

print("chain model vs simulation (10 seeds x 300k slots each):")
print(" n    tau_chain  tau_sim    p_chain   p_sim     U_chain   U_sim")
for n in (1, 2, 5, 10, 20, 50):
    sol = solve_markov_numeric(n, mac)
    runs = [simulate_sector(n, mac, slots, max_slots=300_000, seed=s)
            for s in range(10)]
    tau_sim = statistics.fmean(r.empirical_tau for r in runs)
    p_sim = statistics.fmean(r.empirical_p for r in runs)
    u_sim = statistics.fmean(r.utilization for r in runs)
    u_chain = sector_utilization(n, mac, slots)
    print(f"{n:3d}   {sol.tau:.5f}   {tau_sim:.5f}   {sol.p:.5f}   {p_sim:.5f}"
          f"   {u_chain:.5f}   {u_sim:.5f}")

print()
print("tau and utilization agree to a fraction of a percent everywhere. The")
print("conditional collision probability p runs a little hot in simulation")
print("at small n: the per-station chain treats neighbours as independent,")
print("while in the coupled system stations that just collided re-enter with")
print("synchronised windows. The effect fades as n grows.")
