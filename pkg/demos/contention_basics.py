"""Walk through the contention model: the (p, tau) operating point of a
sector and where the channel time goes as the sector fills up."""
from qobeam import (
    MacParams,
    TimingParams,
    slot_durations,
    solve_markov_numeric,
    slot_probabilities,
    sector_utilization,
)

mac = MacParams()             # W0=8, m=3, h=5
slots = slot_durations(TimingParams())

print(f"slot durations: idle {slots.t_idle * 1e6:.2f} us, "
      f"success {slots.t_suc * 1e6:.2f} us, collision {slots.t_col * 1e6:.2f} us")
print()
print(" n      p        tau     P_idle   P_suc    P_col    utilization")
for n in (1, 2, 3, 5, 8, 12, 20, 35, 50):
    sol = solve_markov_numeric(n, mac)
    probs = slot_probabilities(n, sol.tau)
    u = sector_utilization(n, mac, slots)
    print(f"{n:3d}  {sol.p:.5f}  {sol.tau:.5f}  {probs.p_idle:.5f}  "
          f"{probs.p_suc:.5f}  {probs.p_col:.5f}   {u:.5f}")

print()
print("utilization peaks around 3-4 stations: with fewer the channel idles,")
print("with more it burns time in collisions. That asymmetry is what the")
print("adaptive beamwidth allocator exploits.")
