"""Degree trajectories settle onto k (t/n)^(p a1) once they leave the noise.

A vertex that finishes with in-degree k had, at earlier times t past an
onset point T_v, a degree close to k (t/n)^(p a1). The trajectory of any
vertex is exact and free: its in-neighbors arrive exactly at their birth
steps, so no sampling is recorded during growth.
"""

import numpy as np

from spagraph import ModelParams, generate, trajectory_check
from spagraph.clustering import default_omega

params = ModelParams(n=50_000, p=0.7, a1=1.0, a2=30 / 7, seed=5)
graph = generate(params)
omega = default_omega(graph.n)
exponent = params.p * params.a1

hub = int(np.argmax(graph.in_degree))
k = int(graph.in_degree[hub])
times, degrees = graph.trajectory(hub)
print(f"vertex {hub}: final in-degree {k}, first neighbor at t={times[0]}")
print("\n        t | deg^-(v,t) | k (t/n)^(p a1) | ratio")
for pick in np.linspace(0, len(times) - 1, 8).astype(int):
    t, d = int(times[pick]), int(degrees[pick])
    ref = k * (t / graph.n) ** exponent
    print(f"{t:9d} | {d:10d} | {ref:14.1f} | {d / ref:.3f}")

print(f"\nconcentration check for the top 10 vertices (omega = {omega:.2f}):")
for v in np.argsort(graph.in_degree)[-10:][::-1]:
    check = trajectory_check(graph, int(v), omega)
    print(f"  vertex {check.vertex:6d}  k={check.final_degree:5d}  "
          f"window [{check.onset_time:7.0f}, {graph.n}]  "
          f"ratio range [{check.ratio_min:.3f}, {check.ratio_max:.3f}]")
print("(ratios hug 1 late in the window; the early window is noisy at "
      "this scale)")
